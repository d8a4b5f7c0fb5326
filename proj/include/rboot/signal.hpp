#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rboot/glm.hpp"
#include "rboot/parallel.hpp"

namespace rboot {

/// Sample standard deviation (1/(n-1)) of X * beta. An intercept column only
/// shifts the linear predictor, so it never contributes.
template <typename DerivedX, typename DerivedB>
double sd_linear_predictor(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedB>& beta) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> t = X * beta;
  const Eigen::Index n = t.size();
  if (n < 2) return 0.0;
  const Scalar mean = t.mean();
  return std::sqrt(static_cast<double>((t.array() - mean).square().sum() / static_cast<Scalar>(n - 1)));
}

/// beta scaled by s, leaving an intercept (coordinate 0) untouched.
VectorXd scale_slopes(const Eigen::Ref<const VectorXd>& beta, double s, bool has_intercept);

struct GammaOptions {
  int grid_size = 10;  // I
  int reps = 3;        // J
  double span = 0.75;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  FitOptions fit;
};

struct GammaKnot {
  double s = 0.0;
  double gamma = 0.0;
  std::vector<double> eta_samples;  // replicate SLOE values; NaN marks a failed replicate
  double eta_smooth = NAN;          // monotone smoothed curve at this knot
};

/// The simulated eta(gamma) relation along the path s * beta_hat.
struct GammaCurve {
  std::vector<GammaKnot> knots;  // every grid point, including dropped ones
  VectorXd smooth_gamma;         // interpolation knots of the monotone curve
  VectorXd smooth_eta;
  double eta_tilde = 0.0;
  std::optional<double> gamma_hat;  // empty when eta_tilde is not bracketed
  int n_failed = 0;

  /// Piecewise-linear evaluation of the monotone curve (clamped at the ends).
  double smooth_at(double gamma) const;
};

/// Simulates the curve and inverts it without throwing on a non-bracketing
/// eta_tilde (gamma_hat is then empty).
GammaCurve trace_gamma_curve(const Dataset& data, const FitResult& fit, const GammaOptions& opts);

/// Smallest gamma with smooth(gamma) = eta_tilde, or nullopt when eta_tilde
/// exceeds the curve's right end. Returns 0 when eta_tilde is below the left end.
std::optional<double> invert_curve(const VectorXd& gamma, const VectorXd& eta, double eta_tilde);

/// Signal-strength estimate; throws Error(curve_not_bracketing) instead of extrapolating.
GammaCurve estimate_gamma(const Dataset& data, const FitResult& fit, const GammaOptions& opts);

}  // namespace rboot
