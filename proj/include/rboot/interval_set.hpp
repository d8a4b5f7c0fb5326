#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace rboot {

enum class CiMethod { classical, boot_g, boot_t };

std::string_view to_string(CiMethod method);

/// Per-coordinate confidence intervals at one nominal level (1 - q).
struct IntervalSet {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  double level = 0.95;
  CiMethod method = CiMethod::classical;

  Eigen::Index size() const { return lo.size(); }
  bool covers(Eigen::Index j, double value) const { return lo[j] <= value && value <= hi[j]; }
};

}  // namespace rboot
