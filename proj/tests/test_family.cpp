#include <cmath>

#include "doctest.h"

#include "rboot/error.hpp"
#include "rboot/family.hpp"

using namespace rboot;

namespace {

const Family kFamilies[] = {Family::logistic, Family::probit, Family::poisson_log};

double response_for(Family f, int k) {
  if (f == Family::poisson_log) return static_cast<double>(k % 4);
  return k % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

TEST_CASE("closed forms at t = 0") {
  CHECK(loss(Family::logistic, 1.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(loss_d1(Family::logistic, 1.0, 0.0) == doctest::Approx(-0.5));
  CHECK(loss_d2(Family::logistic, -1.0, 0.0) == doctest::Approx(0.25));
  CHECK(loss(Family::probit, -1.0, 0.0) == doctest::Approx(std::log(2.0)));
  const double phi0 = 1.0 / std::sqrt(2.0 * M_PI);
  CHECK(loss_d1(Family::probit, 1.0, 0.0) == doctest::Approx(-2.0 * phi0));
  CHECK(loss_d2(Family::probit, 1.0, 0.0) == doctest::Approx(4.0 * phi0 * phi0));
  CHECK(loss(Family::poisson_log, 3.0, 0.0) == doctest::Approx(1.0));
  CHECK(loss_d1(Family::poisson_log, 3.0, 0.0) == doctest::Approx(-2.0));
  CHECK(loss_d2(Family::poisson_log, 3.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("logistic loss matches log1p form") {
  for (double t = -30.0; t <= 30.0; t += 0.37) {
    for (double y : {-1.0, 1.0}) {
      const double z = -y * t;
      const double ref = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      CHECK(loss(Family::logistic, y, t) == doctest::Approx(ref).epsilon(1e-13));
      CHECK(mean_response(Family::logistic, t) == doctest::Approx(1.0 / (1.0 + std::exp(-t))).epsilon(1e-13));
    }
  }
}

TEST_CASE("derivatives agree with central differences on [-30, 30]") {
  for (Family f : kFamilies) {
    int k = 0;
    for (double t = -30.0; t <= 30.0; t += 0.61, ++k) {
      if (f == Family::poisson_log && t > 12.0) break;
      const double y = response_for(f, k);
      const double h = 1e-5 * std::max(1.0, std::abs(t));
      const LossTerms lt = loss_terms(f, y, t);
      const double fd1 = (loss(f, y, t + h) - loss(f, y, t - h)) / (2 * h);
      const double fd2 = (loss_d1(f, y, t + h) - loss_d1(f, y, t - h)) / (2 * h);
      const double scale1 = std::max(1.0, std::abs(lt.d1));
      const double scale2 = std::max(1e-3, std::abs(lt.d2));
      CAPTURE(to_string(f));
      CAPTURE(t);
      CHECK(std::abs(fd1 - lt.d1) / scale1 < 1e-5);
      CHECK(std::abs(fd2 - lt.d2) / scale2 < 1e-4);
      CHECK(lt.value == loss(f, y, t));
      CHECK(lt.d1 == loss_d1(f, y, t));
      CHECK(lt.d2 == loss_d2(f, y, t));
    }
  }
}

TEST_CASE("losses are strictly convex and finite") {
  for (Family f : kFamilies) {
    int k = 0;
    for (double t = -40.0; t <= 40.0; t += 0.5, ++k) {
      const double y = response_for(f, k);
      const LossTerms lt = loss_terms(f, y, t);
      CAPTURE(to_string(f));
      CAPTURE(t);
      REQUIRE(std::isfinite(lt.value));
      REQUIRE(std::isfinite(lt.d1));
      CHECK(lt.d2 >= 0.0);
      if (std::abs(t) <= 30.0) CHECK(lt.d2 > 0.0);
      if (is_binary(f)) CHECK(lt.value >= 0.0);
    }
  }
}

TEST_CASE("probit lower tail") {
  // Mills-ratio asymptotics: log Phi(x) = log phi(x) - log(-x) + log(1 - 1/x^2 + 3/x^4 - 15/x^6 + ...).
  for (double x : {-15.0, -20.0, -30.0, -38.0}) {
    const double x2 = x * x;
    const double ref = -0.5 * x2 - 0.5 * std::log(2 * M_PI) - std::log(-x) +
                       std::log(1 - 1 / x2 + 3 / (x2 * x2) - 15 / (x2 * x2 * x2) + 105 / (x2 * x2 * x2 * x2));
    CHECK(log_normal_cdf(x) == doctest::Approx(ref).epsilon(1e-10));
    // -d/dt log Phi(t) at t = x is phi(x)/Phi(x), about -x for large |x|.
    CHECK(loss_d1(Family::probit, 1.0, x) == doctest::Approx(x + 1 / x - 2 / (x * x2) + 10 / (x * x2 * x2)).epsilon(1e-7));
    CHECK(loss_d2(Family::probit, 1.0, x) == doctest::Approx(1 - 1 / x2 + 6 / (x2 * x2) - 50 / (x2 * x2 * x2)).epsilon(1e-6));
  }
  for (double x = -36.9; x < 8.0; x += 0.3) {
    CHECK(normal_cdf(x) == doctest::Approx(0.5 * std::erfc(-x / std::sqrt(2.0))).epsilon(1e-13));
    CHECK(log_normal_cdf(x) == doctest::Approx(std::log(0.5 * std::erfc(-x / std::sqrt(2.0)))).epsilon(1e-12));
  }
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.1) == doctest::Approx(-1.2815515655446004).epsilon(1e-14));
  for (double p : {1e-10, 0.03, 0.4, 0.77, 0.999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("family names") {
  CHECK(parse_family("logistic") == Family::logistic);
  CHECK(parse_family("probit") == Family::probit);
  CHECK(parse_family("poisson") == Family::poisson_log);
  CHECK(to_string(Family::poisson_log) == "poisson");
  CHECK_THROWS_AS(parse_family("gamma"), Error);
}
