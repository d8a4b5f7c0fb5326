#include "rboot/signal.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "rboot/error.hpp"
#include "rboot/random.hpp"
#include "rboot/simgen.hpp"
#include "rboot/sloe.hpp"
#include "rboot/smooth.hpp"

namespace rboot {

VectorXd scale_slopes(const Eigen::Ref<const VectorXd>& beta, double s, bool has_intercept) {
  VectorXd out = s * beta;
  if (has_intercept && beta.size() > 0) out[0] = beta[0];
  return out;
}

double GammaCurve::smooth_at(double gamma) const {
  const Index m = smooth_gamma.size();
  if (m == 0) return NAN;
  if (gamma <= smooth_gamma[0]) return smooth_eta[0];
  for (Index k = 1; k < m; ++k) {
    if (gamma <= smooth_gamma[k]) {
      const double w = (gamma - smooth_gamma[k - 1]) / (smooth_gamma[k] - smooth_gamma[k - 1]);
      return smooth_eta[k - 1] + w * (smooth_eta[k] - smooth_eta[k - 1]);
    }
  }
  return smooth_eta[m - 1];
}

std::optional<double> invert_curve(const VectorXd& gamma, const VectorXd& eta, double eta_tilde) {
  const Index m = gamma.size();
  if (m == 0 || eta_tilde > eta[m - 1]) return std::nullopt;
  if (eta_tilde <= eta[0]) return gamma[0];
  for (Index k = 1; k < m; ++k) {
    if (eta_tilde <= eta[k]) {
      const double rise = eta[k] - eta[k - 1];
      const double w = rise > 0.0 ? (eta_tilde - eta[k - 1]) / rise : 0.0;
      return gamma[k - 1] + w * (gamma[k] - gamma[k - 1]);
    }
  }
  return gamma[m - 1];
}

GammaCurve trace_gamma_curve(const Dataset& data, const FitResult& fit, const GammaOptions& opts) {
  if (!fit.converged()) throw Error(ErrorKind::not_converged, "estimate_gamma needs a converged fit");
  if (opts.grid_size < 4) throw Error(ErrorKind::invalid_input, "estimate_gamma needs at least 4 grid points");
  if (opts.reps < 1) throw Error(ErrorKind::invalid_input, "estimate_gamma needs at least 1 replicate");

  GammaCurve curve;
  curve.eta_tilde = sloe_estimate(data, fit).eta_hat;

  const int I = opts.grid_size;
  const int J = opts.reps;
  const double gamma_full = sd_linear_predictor(data.X, scale_slopes(fit.beta_hat, 1.0, data.has_intercept));
  curve.knots.resize(static_cast<std::size_t>(I));
  for (int i = 0; i < I; ++i) {
    GammaKnot& knot = curve.knots[static_cast<std::size_t>(i)];
    knot.s = static_cast<double>(i) / static_cast<double>(I - 1);
    knot.gamma = knot.s * gamma_full;
    knot.eta_samples.assign(static_cast<std::size_t>(J), NAN);
  }

  parallel_for(static_cast<std::size_t>(I * J), opts.threads, [&](std::size_t task) {
    const int i = static_cast<int>(task) / J;
    const int j = static_cast<int>(task) % J;
    GammaKnot& knot = curve.knots[static_cast<std::size_t>(i)];
    const VectorXd beta_s = scale_slopes(fit.beta_hat, knot.s, data.has_intercept);
    Rng rng = make_rng(opts.seed, Stream::gamma_curve, task);
    const VectorXd y = simulate_response(data.X * beta_s, data.family, rng);
    FitOptions fo = opts.fit;
    fo.start = beta_s;
    const FitResult sim = fit_mle(data.X, y, data.family, fo);
    if (!sim.converged()) return;
    try {
      knot.eta_samples[static_cast<std::size_t>(j)] = sloe_estimate(data.X, y, data.family, sim).eta_hat;
    } catch (const Error&) {
      // leverage-degenerate replicate: dropped like a failed fit
    }
  });

  std::vector<double> xs, ys, knot_gamma;
  for (const GammaKnot& knot : curve.knots) {
    bool any = false;
    for (double e : knot.eta_samples) {
      if (std::isnan(e)) {
        ++curve.n_failed;
        continue;
      }
      xs.push_back(knot.gamma);
      ys.push_back(e);
      any = true;
    }
    if (any) knot_gamma.push_back(knot.gamma);
  }
  if (knot_gamma.size() < 2)
    throw Error(ErrorKind::too_many_failures, "signal-strength curve: fewer than two grid points survived");

  const Eigen::Map<const VectorXd> xv(xs.data(), static_cast<Index>(xs.size()));
  const Eigen::Map<const VectorXd> yv(ys.data(), static_cast<Index>(ys.size()));
  curve.smooth_gamma = Eigen::Map<const VectorXd>(knot_gamma.data(), static_cast<Index>(knot_gamma.size()));
  curve.smooth_eta = isotonic_increasing(loess_local_linear(xv, yv, curve.smooth_gamma, opts.span));
  for (GammaKnot& knot : curve.knots) {
    const bool kept = std::any_of(knot.eta_samples.begin(), knot.eta_samples.end(), [](double e) { return !std::isnan(e); });
    if (kept) knot.eta_smooth = curve.smooth_at(knot.gamma);
  }
  curve.gamma_hat = invert_curve(curve.smooth_gamma, curve.smooth_eta, curve.eta_tilde);
  return curve;
}

GammaCurve estimate_gamma(const Dataset& data, const FitResult& fit, const GammaOptions& opts) {
  GammaCurve curve = trace_gamma_curve(data, fit, opts);
  if (!curve.gamma_hat) {
    std::ostringstream msg;
    msg << "eta_tilde = " << curve.eta_tilde << " exceeds the simulated curve maximum "
        << curve.smooth_eta[curve.smooth_eta.size() - 1] << " at gamma = "
        << curve.smooth_gamma[curve.smooth_gamma.size() - 1] << "; more replicates per grid point reduce curve noise";
    throw Error(ErrorKind::curve_not_bracketing, msg.str());
  }
  return curve;
}

}  // namespace rboot
