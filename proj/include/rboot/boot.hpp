#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rboot/glm.hpp"
#include "rboot/parallel.hpp"

namespace rboot {

/// beta_star = s * beta_hat with s chosen so sd(X beta_star) = gamma_target.
struct ResizedCoefficients {
  VectorXd beta_star;
  double scale_s = 0.0;
  double gamma_target = 0.0;
};

/// scale_s = gamma_hat / sd(X beta_hat), clamped to [0, 1]; the intercept is
/// copied unscaled. Throws Error(zero_mle) when beta_hat has no spread but
/// gamma_hat > 0.
ResizedCoefficients resize(const Eigen::Ref<const VectorXd>& beta_hat, double gamma_hat,
                           const Eigen::Ref<const MatrixXd>& X, bool has_intercept = false);

inline ResizedCoefficients resize(const FitResult& fit, double gamma_hat, const Eigen::Ref<const MatrixXd>& X,
                                  bool has_intercept = false) {
  return resize(fit.beta_hat, gamma_hat, X, has_intercept);
}

struct BootstrapSummary {
  MatrixXd boot_mles;  // successful replicates only, one per row
  VectorXd sigma_hat;
  VectorXd beta_bar;
  double alpha_hat = 1.0;
  int n_failed = 0;
  bool has_intercept = false;  // coordinate 0 is then excluded from alpha_hat

  Index replicates() const { return boot_mles.rows(); }
};

struct BootOptions {
  int B = 100;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  double max_failure_fraction = 0.2;
  FitOptions fit;
};

/// Column means, (B-1)-divisor standard deviations and the common inflation
///   alpha_hat = sum_j w_j beta_bar_j ref_j / sum_j w_j ref_j^2,  w_j = 1/sigma_j^2,
/// over the slope coordinates. alpha_hat is 1 when every slope of ref is 0.
BootstrapSummary summarize_bootstrap(MatrixXd boot_mles, const Eigen::Ref<const VectorXd>& reference,
                                     bool has_intercept, int n_failed);

/// Resized parametric bootstrap: B response vectors drawn at X beta_star with
/// X held fixed, each refit; failed refits are discarded and counted. Throws
/// Error(too_many_failures) past opts.max_failure_fraction.
BootstrapSummary run_bootstrap(const Dataset& data, const ResizedCoefficients& resized, const BootOptions& opts);

}  // namespace rboot
