#pragma once

#include <Eigen/Dense>

namespace rboot {

/// Local linear regression with tricube weights. For each evaluation point
/// the bandwidth is the distance to the ceil(span * m)-th nearest sample;
/// degenerate neighbourhoods (all x equal) fall back to a weighted mean.
Eigen::VectorXd loess_local_linear(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                                   const Eigen::Ref<const Eigen::VectorXd>& at, double span = 0.75);

/// Weighted pool-adjacent-violators: the non-decreasing sequence closest to
/// `values` in weighted least squares.
Eigen::VectorXd isotonic_increasing(const Eigen::Ref<const Eigen::VectorXd>& values,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights);

inline Eigen::VectorXd isotonic_increasing(const Eigen::Ref<const Eigen::VectorXd>& values) {
  return isotonic_increasing(values, Eigen::VectorXd::Ones(values.size()));
}

}  // namespace rboot
