#include "rboot/separation.hpp"

#include <vector>

namespace rboot {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::optional<VectorXd> find_separating_direction(const Eigen::Ref<const MatrixXd>& X,
                                                  const Eigen::Ref<const VectorXd>& y) {
  const Index n = X.rows();
  const Index p = X.cols();
  // Columns: w+ (p) | w- (p) | surplus e (n) | artificial s (n) | rhs.
  const Index cols = 2 * p + 2 * n;
  MatrixXd T = MatrixXd::Zero(n, cols + 1);
  for (Index i = 0; i < n; ++i) {
    T.row(i).segment(0, p) = y[i] * X.row(i);
    T.row(i).segment(p, p) = -y[i] * X.row(i);
    T(i, 2 * p + i) = -1.0;
    T(i, 2 * p + n + i) = 1.0;
    T(i, cols) = 1.0;
  }
  std::vector<Index> basis(n);
  for (Index i = 0; i < n; ++i) basis[i] = 2 * p + n + i;

  // Reduced costs for min sum(s) with the artificial basis.
  VectorXd reduced = VectorXd::Zero(cols + 1);
  reduced.segment(2 * p + n, n).setOnes();
  for (Index i = 0; i < n; ++i) reduced -= T.row(i).transpose();

  constexpr double eps = 1e-10;
  const Index max_pivots = 50 * (cols + n);
  for (Index pivots = 0; pivots < max_pivots; ++pivots) {
    Index enter = -1;
    for (Index j = 0; j < cols; ++j)
      if (reduced[j] < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    Index leave = -1;
    double best = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double a = T(i, enter);
      if (a <= eps) continue;
      const double ratio = T(i, cols) / a;
      if (leave < 0 || ratio < best - eps || (ratio <= best + eps && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) break;  // unbounded cannot happen for a bounded-below objective

    T.row(leave) /= T(leave, enter);
    for (Index i = 0; i < n; ++i)
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    reduced -= reduced[enter] * T.row(leave).transpose();
    basis[leave] = enter;
  }

  if (-reduced[cols] > 1e-8) return std::nullopt;  // positive optimum: overlap
  VectorXd w = VectorXd::Zero(p);
  for (Index i = 0; i < n; ++i) {
    if (basis[i] < p) w[basis[i]] += T(i, cols);
    else if (basis[i] < 2 * p) w[basis[i] - p] -= T(i, cols);
  }
  if (((X * w).array() * y.array()).minCoeff() <= 0.0) return std::nullopt;
  return w;
}

}  // namespace rboot
