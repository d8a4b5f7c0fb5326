#include <cmath>
#include <string>

#include "rboot/error.hpp"
#include "rboot/glm.hpp"

namespace rboot {

std::string_view to_string(FitStatus status) {
  switch (status) {
    case FitStatus::converged: return "converged";
    case FitStatus::separable: return "separable";
    case FitStatus::max_iter: return "max_iter";
    case FitStatus::singular_hessian: return "singular_hessian";
  }
  return "unknown";
}

std::string_view to_string(CiMethod method) {
  switch (method) {
    case CiMethod::classical: return "classical";
    case CiMethod::boot_g: return "boot-g";
    case CiMethod::boot_t: return "boot-t";
  }
  return "unknown";
}

void validate(const Dataset& data) {
  const Index n = data.n();
  const Index p = data.p();
  if (data.y.size() != n) throw Error(ErrorKind::invalid_input, "response length does not match covariate rows");
  if (p < 1) throw Error(ErrorKind::invalid_input, "at least one covariate column is required");
  if (n < p + 1) throw Error(ErrorKind::invalid_input, "n >= p+1 required");
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i)
      if (!std::isfinite(data.X(i, j)))
        throw Error(ErrorKind::invalid_input,
                    "non-finite covariate at row " + std::to_string(i) + ", column " + std::to_string(j));
  if (data.has_intercept && !(data.X.col(0).array() == 1.0).all())
    throw Error(ErrorKind::invalid_input, "intercept column must be all ones");
  for (Index i = 0; i < n; ++i) {
    const double y = data.y[i];
    const bool ok = is_binary(data.family) ? (y == 1.0 || y == -1.0)
                                           : (std::isfinite(y) && y >= 0.0 && y == std::floor(y));
    if (!ok) throw Error(ErrorKind::invalid_input, "invalid response at row " + std::to_string(i));
  }
}

Dataset make_dataset(MatrixXd X, VectorXd y, Family family, bool has_intercept) {
  Dataset data{std::move(X), std::move(y), family, has_intercept};
  validate(data);
  return data;
}

double negative_log_likelihood(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& y,
                               Family family, const Eigen::Ref<const VectorXd>& beta) {
  const VectorXd t = X * beta;
  double total = 0.0;
  for (Index i = 0; i < t.size(); ++i) total += loss(family, y[i], t[i]);
  return total;
}

namespace {

struct Evaluation {
  double objective = 0.0;
  VectorXd d1;
  VectorXd d2;
};

Evaluation evaluate(Family family, const Eigen::Ref<const VectorXd>& y, const VectorXd& t) {
  Evaluation ev;
  ev.d1.resize(t.size());
  ev.d2.resize(t.size());
  for (Index i = 0; i < t.size(); ++i) {
    const LossTerms lt = loss_terms(family, y[i], t[i]);
    ev.objective += lt.value;
    ev.d1[i] = lt.d1;
    ev.d2[i] = lt.d2;
  }
  return ev;
}

double objective_at(Family family, const Eigen::Ref<const VectorXd>& y, const VectorXd& t) {
  double total = 0.0;
  for (Index i = 0; i < t.size(); ++i) total += loss(family, y[i], t[i]);
  return total;
}

// Lower triangle of X' diag(w) X via a symmetric rank update.
MatrixXd weighted_gram(const Eigen::Ref<const MatrixXd>& X, const VectorXd& w) {
  const MatrixXd Xw = X.array().colwise() * w.array().sqrt();
  MatrixXd H = MatrixXd::Zero(X.cols(), X.cols());
  H.selfadjointView<Eigen::Lower>().rankUpdate(Xw.transpose());
  return H.selfadjointView<Eigen::Lower>();
}

bool strictly_separates(const Eigen::Ref<const VectorXd>& y, const VectorXd& t) {
  return (y.array() * t.array() > 0.0).all();
}

}  // namespace

FitResult fit_mle(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& y, Family family,
                  const FitOptions& opts) {
  const Index n = X.rows();
  const Index p = X.cols();
  const bool binary = is_binary(family);

  FitResult res;
  res.beta_hat = opts.start ? *opts.start : VectorXd::Zero(p);
  res.eta_lin = X * res.beta_hat;

  auto finish = [&](FitStatus status, const Evaluation& ev, double gnorm) {
    res.status = status;
    res.grad_norm = gnorm;
    res.objective = ev.objective;
    if (res.hessian.size() == 0) res.hessian = weighted_gram(X, ev.d2);
    return res;
  };

  for (int iter = 0;; ++iter) {
    res.iterations = iter;
    Evaluation ev = evaluate(family, y, res.eta_lin);
    if (opts.record_trace) res.trace.push_back(ev.objective);
    const VectorXd grad = X.transpose() * ev.d1;
    const double gnorm = grad.norm();

    if (binary && strictly_separates(y, res.eta_lin)) return finish(FitStatus::separable, ev, gnorm);
    if (res.beta_hat.norm() > opts.divergence_norm) return finish(FitStatus::separable, ev, gnorm);
    if (binary && ev.objective < 1e-10 * static_cast<double>(n) && gnorm > opts.grad_tol)
      return finish(FitStatus::separable, ev, gnorm);

    MatrixXd H = weighted_gram(X, ev.d2);
    if (gnorm <= opts.grad_tol) {
      res.hessian = std::move(H);
      Eigen::LLT<MatrixXd> check(res.hessian);
      return finish(check.info() == Eigen::Success ? FitStatus::converged : FitStatus::singular_hessian, ev, gnorm);
    }
    if (iter >= opts.max_iter) {
      res.hessian = std::move(H);
      return finish(FitStatus::max_iter, ev, gnorm);
    }

    Eigen::LLT<MatrixXd> llt(H);
    if (llt.info() != Eigen::Success) {
      const double bump = opts.ridge * H.trace() / static_cast<double>(p);
      llt.compute(H + bump * MatrixXd::Identity(p, p));
      if (llt.info() != Eigen::Success || !(bump > 0.0)) {
        res.hessian = std::move(H);
        return finish(FitStatus::singular_hessian, ev, gnorm);
      }
    }
    const VectorXd step = llt.solve(grad);
    const VectorXd dt = X * step;

    // Predicted decrease below the resolution of the summed objective.
    const double decrement = 0.5 * grad.dot(step);
    const bool flat = decrement <= 1e-12 * (1.0 + std::abs(ev.objective));

    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, scale *= 0.5) {
      VectorXd t_new = res.eta_lin - scale * dt;
      if ((flat && h == 0) || objective_at(family, y, t_new) <= ev.objective) {
        res.beta_hat -= scale * step;
        res.eta_lin = std::move(t_new);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Round-off floor: no representable decrease along the Newton direction.
      res.hessian = std::move(H);
      return finish(FitStatus::max_iter, ev, gnorm);
    }
  }
}

FitResult fit_mle(const Dataset& data, const FitOptions& opts) {
  return fit_mle(data.X, data.y, data.family, opts);
}

VectorXd classical_standard_errors(const FitResult& fit) {
  const Index p = fit.hessian.rows();
  Eigen::LLT<MatrixXd> llt(fit.hessian);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::singular_hessian, "Hessian is not positive definite");
  const MatrixXd inv = llt.solve(MatrixXd::Identity(p, p));
  return inv.diagonal().cwiseSqrt();
}

IntervalSet classical_wald_ci(const FitResult& fit, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::invalid_input, "level must lie in (0, 1)");
  if (!fit.converged()) throw Error(ErrorKind::not_converged, "classical_wald_ci needs a converged fit");
  const double z = normal_quantile(0.5 + 0.5 * level);
  const VectorXd se = classical_standard_errors(fit);
  return {fit.beta_hat - z * se, fit.beta_hat + z * se, level, CiMethod::classical};
}

}  // namespace rboot
