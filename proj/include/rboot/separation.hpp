#pragma once

#include <optional>

#include <Eigen/Dense>

namespace rboot {

/// Linear-programming separability diagnostic for binary responses y in {-1, +1}.
///
/// Solves  min sum_i s_i  s.t.  y_i x_i'w + s_i >= 1, s >= 0  with a dense
/// simplex (Bland's rule). A zero optimum yields a direction with margin >= 1
/// on every observation, which proves the logistic/probit MLE does not exist.
/// Returns that direction, or nullopt when the data overlap.
std::optional<Eigen::VectorXd> find_separating_direction(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                                         const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace rboot
