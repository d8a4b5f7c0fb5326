#include "rboot/sloe.hpp"

#include <cmath>
#include <string>

#include "rboot/error.hpp"

namespace rboot {

SloeEstimate sloe_estimate(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& y, Family family,
                           const FitResult& fit) {
  if (!fit.converged()) throw Error(ErrorKind::not_converged, "sloe_estimate needs a converged fit");
  const Index n = X.rows();
  Eigen::LLT<MatrixXd> llt(fit.hessian);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::singular_hessian, "Hessian is not positive definite");

  // w_i = |L^-1 x_i|^2 with H = L L'.
  MatrixXd V = X.transpose();
  llt.matrixL().solveInPlace(V);

  SloeEstimate est;
  est.w_values = V.colwise().squaredNorm().transpose();
  est.s_values.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double t = fit.eta_lin[i];
    const LossTerms lt = loss_terms(family, y[i], t);
    const double w = est.w_values[i];
    const double denom = 1.0 - w * lt.d2;
    if (!(denom > kLeverageGuard))
      throw Error(ErrorKind::leverage_degenerate,
                  "observation " + std::to_string(i) + " has 1 - w f'' = " + std::to_string(denom));
    est.s_values[i] = t + (w / denom) * lt.d1;
  }
  const double mean = est.s_values.mean();
  const double var = est.s_values.squaredNorm() / static_cast<double>(n) - mean * mean;
  est.eta_hat = std::sqrt(std::max(var, 0.0));
  return est;
}

SloeEstimate sloe_estimate(const Dataset& data, const FitResult& fit) {
  return sloe_estimate(data.X, data.y, data.family, fit);
}

double loo_oracle(const Dataset& data, const FitOptions& opts) {
  const Index n = data.n();
  const Index p = data.p();
  VectorXd held_out(n);
  MatrixXd Xs(n - 1, p);
  VectorXd ys(n - 1);
  for (Index i = 0; i < n; ++i) {
    if (i > 0) {
      Xs.topRows(i) = data.X.topRows(i);
      ys.head(i) = data.y.head(i);
    }
    if (i < n - 1) {
      Xs.bottomRows(n - 1 - i) = data.X.bottomRows(n - 1 - i);
      ys.tail(n - 1 - i) = data.y.tail(n - 1 - i);
    }
    const FitResult sub = fit_mle(Xs, ys, data.family, opts);
    if (!sub.converged())
      throw Error(sub.status == FitStatus::separable ? ErrorKind::separable : ErrorKind::not_converged,
                  "leave-one-out fit without observation " + std::to_string(i) + ": " +
                      std::string(to_string(sub.status)));
    held_out[i] = data.X.row(i).dot(sub.beta_hat);
  }
  const double mean = held_out.mean();
  return std::sqrt((held_out.array() - mean).square().mean());
}

}  // namespace rboot
