#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "rboot/boot.hpp"
#include "rboot/error.hpp"
#include "rboot/intervals.hpp"
#include "rboot/signal.hpp"

using namespace rboot;

namespace {

BootstrapSummary unit_summary(const MatrixXd& mles, double alpha, const VectorXd& sigma) {
  BootstrapSummary s;
  s.boot_mles = mles;
  s.alpha_hat = alpha;
  s.sigma_hat = sigma;
  s.beta_bar = mles.colwise().mean().transpose();
  return s;
}

}  // namespace

TEST_CASE("empirical quantile convention") {
  CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4, 5}, 0.5) == 3.0);
  CHECK(empirical_quantile(std::vector<double>{4, 1, 3, 2}, 0.5) == 2.5);
  const std::vector<double> v{3.0, -1.0, 8.0, 2.0, 2.5};
  CHECK(empirical_quantile(v, 0.0) == -1.0);
  CHECK(empirical_quantile(v, 1.0) == 8.0);
  // h = 4 * 0.3 = 1.2 between sorted[1] = 2 and sorted[2] = 2.5.
  CHECK(empirical_quantile(v, 0.3) == doctest::Approx(2.1));
  CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), Error);
  CHECK_THROWS_AS(empirical_quantile(v, 1.5), Error);
}

TEST_CASE("boot-g substitution examples") {
  MatrixXd mles = MatrixXd::Zero(3, 1);
  BootstrapSummary s = unit_summary(mles, 1.0, VectorXd::Ones(1));
  IntervalSet ci = boot_g_ci(VectorXd::Zero(1), s, 0.95);
  CHECK(ci.lo[0] == doctest::Approx(-1.959963984540054));
  CHECK(ci.hi[0] == doctest::Approx(1.959963984540054));

  s.alpha_hat = 2.0;
  ci = boot_g_ci(VectorXd::Constant(1, 4.0), s, 0.95);
  CHECK(ci.lo[0] == doctest::Approx((4 - 1.959963984540054) / 2));
  CHECK(ci.hi[0] == doctest::Approx((4 + 1.959963984540054) / 2));
  CHECK(ci.hi[0] - ci.lo[0] == doctest::Approx(2 * 1.959963984540054 * 1.0 / 2.0));
  s.alpha_hat = 0.0;
  CHECK_THROWS_AS(boot_g_ci(VectorXd::Zero(1), s, 0.95), Error);
}

TEST_CASE("boot-t on a normal quantile grid reproduces boot-g") {
  const Index B = 4001;
  MatrixXd mles(B, 2);
  for (Index b = 0; b < B; ++b) {
    const double u = b == 0 ? -6.0 : b == B - 1 ? 6.0 : normal_quantile(static_cast<double>(b) / (B - 1));
    mles(b, 0) = u;             // beta_star 0, sigma 1
    mles(b, 1) = 1.2 * 3.0 + 0.5 * u;  // alpha 1.2, beta_star 3, sigma 0.5
  }
  VectorXd sigma(2);
  sigma << 1.0, 0.5;
  const BootstrapSummary s = unit_summary(mles, 1.2, sigma);
  VectorXd star(2);
  star << 0.0, 3.0;
  VectorXd bhat(2);
  bhat << 0.3, 4.1;
  for (double level : {0.95, 0.9, 0.8}) {
    const IntervalSet g = boot_g_ci(bhat, s, level);
    const IntervalSet t = boot_t_ci(bhat, s, star, level);
    for (Index j = 0; j < 2; ++j) {
      CHECK(t.lo[j] == doctest::Approx(g.lo[j]).epsilon(1e-10));
      CHECK(t.hi[j] == doctest::Approx(g.hi[j]).epsilon(1e-10));
      // symmetric pivots: symmetric about beta_hat / alpha
      CHECK(0.5 * (t.lo[j] + t.hi[j]) == doctest::Approx(bhat[j] / 1.2).epsilon(1e-10));
    }
  }
}

TEST_CASE("boot-t needs enough replicates") {
  const BootstrapSummary s = unit_summary(MatrixXd::Random(799, 1), 1.0, VectorXd::Ones(1));
  CHECK_THROWS_AS(boot_t_ci(VectorXd::Zero(1), s, VectorXd::Zero(1), 0.95), Error);
  CHECK_NOTHROW(boot_t_ci(VectorXd::Zero(1), s, VectorXd::Zero(1), 0.80));
}

TEST_CASE("skewed pivots give an asymmetric interval") {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> ex;
  MatrixXd mles(1000, 1);
  for (int b = 0; b < 1000; ++b) mles(b, 0) = -ex(rng);  // left-skewed
  const BootstrapSummary s = summarize_bootstrap(mles, VectorXd::Zero(1), false, 0);
  const IntervalSet t = boot_t_ci(VectorXd::Zero(1), s, VectorXd::Zero(1), 0.9);
  const double centre = 0.0;
  CHECK(std::abs((t.hi[0] - centre) - (centre - t.lo[0])) > 0.3);
}

TEST_CASE("nesting and scale equivariance on a bootstrap run") {
  std::mt19937_64 rng(8);
  const int n = 200, p = 5;
  const MatrixXd X = oracle::gaussian_matrix(n, p, rng, 1.0 / std::sqrt(5.0));
  const VectorXd y = oracle::draw_binary(X * VectorXd::Constant(p, 1.5), false, rng);
  VectorXd c(p);
  c << 1.0, 2.0, 0.5, 3.0, 1.0;
  const MatrixXd Xc = X * c.asDiagonal();

  auto run = [&](const MatrixXd& M) {
    const Dataset d = make_dataset(M, y, Family::logistic);
    const FitResult fit = fit_mle(d);
    REQUIRE(fit.converged());
    const ResizedCoefficients r = resize(fit, 0.7 * sd_linear_predictor(M, fit.beta_hat), M);
    BootOptions bo;
    bo.B = 1000;
    bo.seed = 2;
    bo.threads = 1;
    const BootstrapSummary s = run_bootstrap(d, r, bo);
    return std::vector<IntervalSet>{boot_g_ci(fit, s, 0.95), boot_g_ci(fit, s, 0.8), boot_t_ci(fit, s, r, 0.95),
                                    boot_t_ci(fit, s, r, 0.8), classical_wald_ci(fit, 0.95),
                                    classical_wald_ci(fit, 0.8)};
  };
  const std::vector<IntervalSet> a = run(X);
  const std::vector<IntervalSet> b = run(Xc);
  for (std::size_t m = 0; m < a.size(); m += 2) {
    for (Index j = 0; j < p; ++j) {
      CHECK(a[m].lo[j] <= a[m + 1].lo[j]);
      CHECK(a[m].hi[j] >= a[m + 1].hi[j]);
      CHECK(a[m].lo[j] < a[m].hi[j]);
    }
  }
  for (std::size_t m = 0; m < a.size(); ++m)
    for (Index j = 0; j < p; ++j) {
      CHECK(b[m].lo[j] * c[j] == doctest::Approx(a[m].lo[j]).epsilon(1e-6));
      CHECK(b[m].hi[j] * c[j] == doctest::Approx(a[m].hi[j]).epsilon(1e-6));
    }
}
