#pragma once

#include <Eigen/Dense>

#include "rboot/glm.hpp"

namespace rboot {

/// Single-fit leave-one-out estimate of eta = sd(x_new' beta_hat).
struct SloeEstimate {
  double eta_hat = 0.0;
  VectorXd s_values;  // S_i, first-order approximations of x_i' beta_hat_(i)
  VectorXd w_values;  // w_i = x_i' H^-1 x_i
};

inline constexpr double kLeverageGuard = 1e-8;

/// S_i = t_i + q_i f'(t_i),  q_i = w_i / (1 - w_i f''(t_i)),
/// eta_hat^2 = mean(S^2) - mean(S)^2.
/// Throws Error(leverage_degenerate) when some 1 - w_i f''(t_i) <= kLeverageGuard.
SloeEstimate sloe_estimate(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& y, Family family,
                           const FitResult& fit);

SloeEstimate sloe_estimate(const Dataset& data, const FitResult& fit);

/// Exact leave-one-out counterpart: refits without each observation and
/// returns the (1/n) standard deviation of x_i' beta_hat_(i). Test-only cost.
double loo_oracle(const Dataset& data, const FitOptions& opts = {});

}  // namespace rboot
