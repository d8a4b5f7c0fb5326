#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rboot/family.hpp"
#include "rboot/interval_set.hpp"

namespace rboot {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Covariates, responses and the family they are modelled with. When
/// has_intercept is set, column 0 of X is the all-ones intercept column.
struct Dataset {
  MatrixXd X;
  VectorXd y;
  Family family = Family::logistic;
  bool has_intercept = false;

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
};

/// Throws Error(invalid_input) unless n >= p + 1, all entries are finite and
/// every response is valid for the family.
void validate(const Dataset& data);

Dataset make_dataset(MatrixXd X, VectorXd y, Family family, bool has_intercept = false);

enum class FitStatus { converged, separable, max_iter, singular_hessian };

std::string_view to_string(FitStatus status);

struct FitOptions {
  int max_iter = 100;
  double grad_tol = 1e-8;
  int max_halvings = 30;
  double divergence_norm = 1e6;
  double ridge = 1e-10;
  std::optional<VectorXd> start;
  bool record_trace = false;
};

struct FitResult {
  VectorXd beta_hat;
  VectorXd eta_lin;  // x_i' beta_hat
  MatrixXd hessian;  // sum_i f''(t_i) x_i x_i'
  FitStatus status = FitStatus::max_iter;
  double grad_norm = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // objective per accepted iterate, if requested

  bool converged() const { return status == FitStatus::converged; }
};

/// Sum of per-observation negative log-likelihoods at beta.
double negative_log_likelihood(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& y,
                               Family family, const Eigen::Ref<const VectorXd>& beta);

/// Damped Newton maximum likelihood with step halving.
///
/// Binary fits are declared separable as soon as an iterate classifies every
/// observation strictly correctly (such a direction certifies that the MLE does
/// not exist), when the coefficient norm passes divergence_norm, or when the
/// objective collapses below n * 1e-10 with a non-vanishing gradient.
FitResult fit_mle(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& y, Family family,
                  const FitOptions& opts = {});

FitResult fit_mle(const Dataset& data, const FitOptions& opts = {});

/// sqrt(diag(H^-1)); throws Error(singular_hessian) if H is not positive definite.
VectorXd classical_standard_errors(const FitResult& fit);

/// Wald intervals beta_hat_j +- z_{1-q/2} * se_j.
IntervalSet classical_wald_ci(const FitResult& fit, double level);

}  // namespace rboot
