#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "rboot/error.hpp"
#include "rboot/signal.hpp"
#include "rboot/simgen.hpp"

using namespace rboot;

namespace {

bool same_curve(const GammaCurve& a, const GammaCurve& b) {
  if (a.knots.size() != b.knots.size() || a.eta_tilde != b.eta_tilde || a.gamma_hat != b.gamma_hat) return false;
  for (std::size_t i = 0; i < a.knots.size(); ++i) {
    const auto& ea = a.knots[i].eta_samples;
    const auto& eb = b.knots[i].eta_samples;
    for (std::size_t j = 0; j < ea.size(); ++j)
      if (!(ea[j] == eb[j] || (std::isnan(ea[j]) && std::isnan(eb[j])))) return false;
  }
  return a.smooth_eta == b.smooth_eta;
}

}  // namespace

TEST_CASE("sd of the linear predictor") {
  MatrixXd X(3, 1);
  X << 1, 2, 3;
  CHECK(sd_linear_predictor(X, VectorXd::Ones(1)) == doctest::Approx(1.0));
  CHECK(sd_linear_predictor(X, VectorXd::Zero(1)) == 0.0);
  std::mt19937_64 rng(1);
  const MatrixXd Y = oracle::gaussian_matrix(40, 5, rng);
  const VectorXd b = oracle::gaussian_matrix(5, 1, rng).col(0);
  CHECK(sd_linear_predictor(Y, b) == doctest::Approx(oracle::sample_sd(Y * b)).epsilon(1e-13));
  CHECK(sd_linear_predictor(Y, -2.5 * b) == doctest::Approx(2.5 * sd_linear_predictor(Y, b)).epsilon(1e-13));

  MatrixXd Xi(3, 2);
  Xi << 1, 1, 1, 2, 1, 3;
  VectorXd bi(2);
  bi << 7.0, 1.0;
  CHECK(sd_linear_predictor(Xi, bi) == doctest::Approx(1.0));
  const VectorXd half = scale_slopes(bi, 0.5, true);
  CHECK(half[0] == 7.0);
  CHECK(half[1] == 0.5);
}

TEST_CASE("curve inversion") {
  VectorXd g(4), e(4);
  g << 0, 1, 2, 3;
  e << 1, 2, 2, 4;
  CHECK(*invert_curve(g, e, 1.5) == doctest::Approx(0.5));
  CHECK(*invert_curve(g, e, 2.0) == doctest::Approx(1.0));  // smallest crossing on a flat stretch
  CHECK(*invert_curve(g, e, 3.0) == doctest::Approx(2.5));
  CHECK(*invert_curve(g, e, 0.5) == 0.0);
  CHECK_FALSE(invert_curve(g, e, 4.1));
}

TEST_CASE("curve structure on a Gaussian design") {
  DesignSpec spec = named_design("gaussian-small");
  const SimulatedData sim = simulate_design(spec);
  const FitResult fit = fit_mle(sim.data);
  REQUIRE(fit.converged());
  GammaOptions go;
  go.seed = 3;
  go.threads = 1;
  const GammaCurve curve = trace_gamma_curve(sim.data, fit, go);
  REQUIRE(curve.knots.size() == 10);
  const double g1 = sd_linear_predictor(sim.data.X, fit.beta_hat);
  for (const GammaKnot& k : curve.knots) {
    CHECK(k.gamma == doctest::Approx(k.s * g1).epsilon(1e-12));
    CHECK(k.gamma == doctest::Approx(oracle::sample_sd(sim.data.X * (k.s * fit.beta_hat))).epsilon(1e-10));
    CHECK(k.eta_samples.size() == 3);
  }
  CHECK(curve.knots.front().s == 0.0);
  CHECK(curve.knots.front().gamma == 0.0);
  CHECK(curve.knots.back().s == 1.0);
  for (double e : curve.knots.front().eta_samples) {
    CHECK(e > 0.0);
    CHECK(e < curve.eta_tilde);
  }
  for (Index k = 1; k < curve.smooth_eta.size(); ++k) CHECK(curve.smooth_eta[k] >= curve.smooth_eta[k - 1]);
  REQUIRE(curve.gamma_hat);
  CHECK(*curve.gamma_hat >= 0.0);
  CHECK(*curve.gamma_hat <= curve.smooth_gamma[curve.smooth_gamma.size() - 1]);
  CHECK(curve.smooth_at(*curve.gamma_hat) == doctest::Approx(curve.eta_tilde).epsilon(1e-9));
}

TEST_CASE("same seed, same curve, any thread count") {
  const SimulatedData sim = simulate_design(named_design("gaussian-small"));
  const FitResult fit = fit_mle(sim.data);
  GammaOptions go;
  go.seed = 42;
  go.threads = 1;
  const GammaCurve a = trace_gamma_curve(sim.data, fit, go);
  go.threads = 3;
  const GammaCurve b = trace_gamma_curve(sim.data, fit, go);
  CHECK(same_curve(a, b));
  go.seed = 43;
  CHECK_FALSE(same_curve(a, trace_gamma_curve(sim.data, fit, go)));
}

TEST_CASE("eta_tilde above the curve is reported, not extrapolated") {
  const SimulatedData sim = simulate_design(named_design("gaussian-small"));
  const FitResult fit = fit_mle(sim.data);
  GammaOptions go;
  go.threads = 1;
  GammaCurve curve = trace_gamma_curve(sim.data, fit, go);
  curve.gamma_hat = invert_curve(curve.smooth_gamma, curve.smooth_eta, curve.smooth_eta.maxCoeff() + 1.0);
  CHECK_FALSE(curve.gamma_hat);

  FitResult bad = fit;
  bad.status = FitStatus::separable;
  CHECK_THROWS_AS(estimate_gamma(sim.data, bad, go), Error);
  go.grid_size = 3;
  CHECK_THROWS_AS(estimate_gamma(sim.data, fit, go), Error);
}

TEST_CASE("Pareto n=400, p=40: mean estimate within 10% of the sampled signal") {
  const DesignSpec spec = named_design("pareto-small");
  double est = 0.0, truth = 0.0;
  int used = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DesignSpec s = spec;
    s.seed = seed;
    const SimulatedData sim = simulate_design(s);
    const FitResult fit = fit_mle(sim.data);
    if (!fit.converged()) continue;
    GammaOptions go;
    go.seed = seed;
    go.threads = 1;
    const GammaCurve curve = trace_gamma_curve(sim.data, fit, go);
    if (!curve.gamma_hat) continue;
    est += *curve.gamma_hat;
    truth += sd_linear_predictor(sim.data.X, sim.beta);
    ++used;
  }
  REQUIRE(used >= 18);
  MESSAGE("mean gamma_hat " << est / used << ", mean sampled gamma " << truth / used);
  CHECK(std::abs(est - truth) / truth <= 0.10);
}
