#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "rboot/error.hpp"
#include "rboot/smooth.hpp"

using namespace rboot;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// max over j <= i of min over k >= i of the weighted mean of values[j..k].
VectorXd minimax_isotonic(const VectorXd& v, const VectorXd& w) {
  const Eigen::Index m = v.size();
  VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = -INFINITY;
    for (Eigen::Index j = 0; j <= i; ++j) {
      double worst = INFINITY;
      for (Eigen::Index k = i; k < m; ++k) {
        const double mean = v.segment(j, k - j + 1).dot(w.segment(j, k - j + 1)) / w.segment(j, k - j + 1).sum();
        worst = std::min(worst, mean);
      }
      best = std::max(best, worst);
    }
    out[i] = best;
  }
  return out;
}

}  // namespace

TEST_CASE("loess matches a reference lowess") {
  const VectorXd x = vec({0.0, 0.3, 0.5, 0.9, 1.2, 1.4, 2.0, 2.1, 2.7, 3.0, 3.3, 3.9, 4.2, 4.4, 5.0, 5.5, 6.1, 6.2, 7.0, 8.0});
  const VectorXd y = x.array().sin() + 0.1 * x.array().square();
  const VectorXd at = vec({0.0, 1.0, 2.5, 4.0, 6.6, 8.0});
  // statsmodels lowess(frac, it=0, delta=0) on the same points.
  const VectorXd ref75 = vec({0.4296790681018422, 0.7320913255989263, 1.0810549024574012, 1.3557774195199357,
                              4.550257175073191, 6.668099967239618});
  const VectorXd ref40 = vec({0.03586465967678345, 0.9010601106323158, 1.1736167986516164, 0.9735876909738463,
                              4.617464859326294, 7.442023234007699});
  const VectorXd a = loess_local_linear(x, y, at, 0.75);
  const VectorXd b = loess_local_linear(x, y, at, 0.4);
  for (Eigen::Index k = 0; k < at.size(); ++k) {
    CHECK(a[k] == doctest::Approx(ref75[k]).epsilon(1e-8));
    CHECK(b[k] == doctest::Approx(ref40[k]).epsilon(1e-8));
  }
}

TEST_CASE("loess reproduces lines and constants") {
  const VectorXd x = VectorXd::LinSpaced(15, -2.0, 5.0);
  const VectorXd at = VectorXd::LinSpaced(9, -2.0, 5.0);
  const VectorXd line = loess_local_linear(x, 3.0 - 0.5 * x.array(), at);
  for (Eigen::Index k = 0; k < at.size(); ++k) CHECK(line[k] == doctest::Approx(3.0 - 0.5 * at[k]).epsilon(1e-10));
  const VectorXd flat = loess_local_linear(x, VectorXd::Constant(15, 2.5), at);
  CHECK(flat.isApproxToConstant(2.5));
}

TEST_CASE("loess with tied abscissae") {
  const VectorXd x = vec({0, 0, 0, 1, 1, 1});
  const VectorXd y = vec({1, 2, 3, 4, 5, 6});
  const VectorXd out = loess_local_linear(x, y, vec({0.0, 1.0}), 0.5);
  CHECK(out[0] == doctest::Approx(2.0));
  CHECK(out[1] == doctest::Approx(5.0));
  CHECK_THROWS_AS(loess_local_linear(x, y, x, 0.0), Error);
}

TEST_CASE("isotonic regression small cases") {
  const VectorXd a = isotonic_increasing(vec({1, 3, 2, 4}));
  CHECK(a.isApprox(vec({1, 2.5, 2.5, 4})));
  const VectorXd b = isotonic_increasing(vec({3, 2, 1}));
  CHECK(b.isApprox(vec({2, 2, 2})));
  const VectorXd sorted = vec({-1, 0, 0, 2, 7});
  CHECK(isotonic_increasing(sorted) == sorted);
  const VectorXd c = isotonic_increasing(vec({2, 1}), vec({3, 1}));
  CHECK(c.isApprox(vec({1.75, 1.75})));
}

TEST_CASE("isotonic regression agrees with the minimax formula") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + rep % 12;
    VectorXd v(m), w(m);
    for (int i = 0; i < m; ++i) {
      v[i] = 0.3 * i + z(rng);
      w[i] = u(rng);
    }
    const VectorXd fit = isotonic_increasing(v, w);
    const VectorXd ref = minimax_isotonic(v, w);
    CHECK((fit - ref).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 1; i < m; ++i) CHECK(fit[i] >= fit[i - 1]);
    CHECK(fit.dot(w) == doctest::Approx(v.dot(w)));
  }
}
