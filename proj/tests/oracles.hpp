#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Gradient of the summed negative log-likelihood, written from the model
/// definitions directly. kind: 0 logistic, 1 probit, 2 Poisson.
inline VectorXd gradient(int kind, const MatrixXd& X, const VectorXd& y, const VectorXd& beta) {
  const VectorXd t = X * beta;
  VectorXd r(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double yt = y[i] * t[i];
    if (kind == 0) r[i] = -y[i] / (1.0 + std::exp(yt));
    else if (kind == 1) r[i] = -y[i] * phi(yt) / Phi(yt);
    else r[i] = std::exp(t[i]) - y[i];
  }
  return X.transpose() * r;
}

/// Plain gradient descent with a fixed step 1/L and Nesterov momentum, run
/// until the gradient is tiny. L bounds the curvature: 1/4 (logistic),
/// 1 (probit) times the top eigenvalue of X'X; for Poisson the caller passes L.
inline VectorXd first_order_minimizer(int kind, const MatrixXd& X, const VectorXd& y, double L, int max_iter = 2000000,
                                      double tol = 1e-11) {
  VectorXd beta = VectorXd::Zero(X.cols());
  VectorXd prev = beta;
  for (int k = 0; k < max_iter; ++k) {
    const VectorXd look = beta + (static_cast<double>(k) / (k + 3.0)) * (beta - prev);
    const VectorXd g = gradient(kind, X, y, look);
    prev = beta;
    beta = look - g / L;
    if (k % 50 == 0 && gradient(kind, X, y, beta).norm() < tol) break;
  }
  return beta;
}

inline double top_eigenvalue(const MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(X.transpose() * X, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// Perceptron on the rows y_i x_i; returns true when it finds w with
/// y_i x_i'w > 0 for every i within the epoch budget.
inline bool perceptron_separates(const MatrixXd& X, const VectorXd& y, int epochs = 20000) {
  VectorXd w = VectorXd::Zero(X.cols());
  for (int e = 0; e < epochs; ++e) {
    bool clean = true;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (y[i] * X.row(i).dot(w) <= 0.0) {
        w += y[i] * X.row(i).transpose();
        clean = false;
      }
    }
    if (clean) return true;
  }
  return false;
}

inline MatrixXd gaussian_matrix(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> z;
  MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = scale * z(rng);
  return X;
}

inline VectorXd draw_binary(const VectorXd& eta, bool probit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u;
  VectorXd y(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double p = probit ? Phi(eta[i]) : 1.0 / (1.0 + std::exp(-eta[i]));
    y[i] = u(rng) < p ? 1.0 : -1.0;
  }
  return y;
}

inline VectorXd draw_poisson(const VectorXd& eta, std::mt19937_64& rng) {
  VectorXd y(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) y[i] = static_cast<double>(std::poisson_distribution<int>(std::exp(eta[i]))(rng));
  return y;
}

/// Sample standard deviation with divisor m - 1.
inline double sample_sd(const VectorXd& v) {
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace oracle
