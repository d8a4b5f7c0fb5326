#include "rboot/intervals.hpp"

#include "rboot/family.hpp"

namespace rboot {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::invalid_input, "level must lie in (0, 1)");
}

}  // namespace

IntervalSet boot_g_ci(const Eigen::Ref<const VectorXd>& beta_hat, const BootstrapSummary& summary, double level) {
  check_level(level);
  if (!(summary.alpha_hat > 0.0)) throw Error(ErrorKind::invalid_input, "boot_g_ci: alpha_hat must be positive");
  const double q = 1.0 - level;
  const double z_hi = normal_quantile(1.0 - q / 2.0);
  const double z_lo = -z_hi;
  const Index p = beta_hat.size();
  IntervalSet out{VectorXd(p), VectorXd(p), level, CiMethod::boot_g};
  for (Index j = 0; j < p; ++j) {
    const double a = coordinate_alpha(summary, j);
    out.lo[j] = (beta_hat[j] - z_hi * summary.sigma_hat[j]) / a;
    out.hi[j] = (beta_hat[j] - z_lo * summary.sigma_hat[j]) / a;
  }
  return out;
}

IntervalSet boot_t_ci(const Eigen::Ref<const VectorXd>& beta_hat, const BootstrapSummary& summary,
                      const Eigen::Ref<const VectorXd>& beta_star, double level) {
  check_level(level);
  if (!(summary.alpha_hat > 0.0)) throw Error(ErrorKind::invalid_input, "boot_t_ci: alpha_hat must be positive");
  const double q = 1.0 - level;
  const Index B = summary.replicates();
  if (static_cast<double>(B) * q < 40.0 - 1e-9)
    throw Error(ErrorKind::insufficient_samples, "boot_t_ci needs B >= 40 / q bootstrap replicates");
  const Index p = beta_hat.size();
  IntervalSet out{VectorXd(p), VectorXd(p), level, CiMethod::boot_t};
  VectorXd pivots(B);
  for (Index j = 0; j < p; ++j) {
    const double a = coordinate_alpha(summary, j);
    const double s = summary.sigma_hat[j];
    pivots = (summary.boot_mles.col(j).array() - a * beta_star[j]) / s;
    std::sort(pivots.data(), pivots.data() + B);
    const double t_hi = sorted_quantile(pivots, 1.0 - q / 2.0);
    const double t_lo = sorted_quantile(pivots, q / 2.0);
    out.lo[j] = (beta_hat[j] - t_hi * s) / a;
    out.hi[j] = (beta_hat[j] - t_lo * s) / a;
  }
  return out;
}

}  // namespace rboot
