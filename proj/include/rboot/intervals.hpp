#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "rboot/boot.hpp"
#include "rboot/error.hpp"
#include "rboot/glm.hpp"
#include "rboot/interval_set.hpp"

namespace rboot {

/// Linear interpolation between order statistics of already sorted samples:
/// h = (m-1) q, x_floor(h) + (h - floor(h)) (x_floor(h)+1 - x_floor(h)).
template <typename Derived>
double sorted_quantile(const Eigen::DenseBase<Derived>& sorted, double q) {
  const Eigen::Index m = sorted.size();
  if (m == 0) throw Error(ErrorKind::invalid_input, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::invalid_input, "quantile level outside [0, 1]");
  const double h = static_cast<double>(m - 1) * q;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  if (lo + 1 >= m) return sorted[m - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

template <typename Derived>
double empirical_quantile(const Eigen::DenseBase<Derived>& samples, double q) {
  Eigen::VectorXd sorted = samples;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  return sorted_quantile(sorted, q);
}

inline double empirical_quantile(const std::vector<double>& samples, double q) {
  return empirical_quantile(Eigen::Map<const Eigen::VectorXd>(samples.data(), static_cast<Eigen::Index>(samples.size())), q);
}

/// Bias factor applied to coordinate j: alpha_hat for slopes, 1 for an intercept.
inline double coordinate_alpha(const BootstrapSummary& summary, Eigen::Index j) {
  return summary.has_intercept && j == 0 ? 1.0 : summary.alpha_hat;
}

/// [(b_j - z_{1-q/2} s_j) / a, (b_j - z_{q/2} s_j) / a].
IntervalSet boot_g_ci(const Eigen::Ref<const VectorXd>& beta_hat, const BootstrapSummary& summary, double level);

inline IntervalSet boot_g_ci(const FitResult& fit, const BootstrapSummary& summary, double level) {
  return boot_g_ci(fit.beta_hat, summary, level);
}

/// Bootstrap-t: the Gaussian quantiles are replaced by empirical quantiles of
/// the pivots u_j^b = (beta_j^b - alpha_hat beta_star_j) / sigma_hat_j.
/// Throws Error(insufficient_samples) unless B >= 40 / q.
IntervalSet boot_t_ci(const Eigen::Ref<const VectorXd>& beta_hat, const BootstrapSummary& summary,
                      const Eigen::Ref<const VectorXd>& beta_star, double level);

inline IntervalSet boot_t_ci(const FitResult& fit, const BootstrapSummary& summary, const ResizedCoefficients& resized,
                             double level) {
  return boot_t_ci(fit.beta_hat, summary, resized.beta_star, level);
}

}  // namespace rboot
