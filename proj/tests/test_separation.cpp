#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "rboot/glm.hpp"
#include "rboot/separation.hpp"

using namespace rboot;

TEST_CASE("two points on a line") {
  MatrixXd X(2, 1);
  X << -1, 1;
  VectorXd y(2);
  y << -1, 1;
  const auto w = find_separating_direction(X, y);
  REQUIRE(w);
  CHECK((*w)[0] >= 1.0 - 1e-12);
}

TEST_CASE("overlapping labels have no separator") {
  MatrixXd X(4, 2);
  X << 1, 0, -1, 0, 0, 1, 0, -1;
  VectorXd y(4);
  y << 1, 1, -1, -1;  // x and -x share a label: no w with y_i x_i'w > 0 for all i
  CHECK_FALSE(find_separating_direction(X, y));
}

TEST_CASE("LP certificate agrees with the perceptron and the fitter") {
  std::mt19937_64 rng(77);
  int seps = 0, overlaps = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 20 + rep % 15;
    const int p = 2 + rep % 7;
    const MatrixXd X = oracle::gaussian_matrix(n, p, rng);
    const VectorXd y = oracle::draw_binary(X * VectorXd::Constant(p, 1.5), false, rng);
    const auto w = find_separating_direction(X, y);
    const bool perceptron = oracle::perceptron_separates(X, y);
    CAPTURE(rep);
    CHECK(static_cast<bool>(w) == perceptron);
    if (w) {
      ++seps;
      CHECK(((y.array() * (X * *w).array()) >= 1.0 - 1e-7).all());
      CHECK(fit_mle(X, y, Family::logistic).status == FitStatus::separable);
    } else {
      ++overlaps;
    }
  }
  CHECK(seps >= 5);
  CHECK(overlaps >= 5);
}
