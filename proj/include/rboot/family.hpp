#pragma once

#include <string_view>

namespace rboot {

/// Response model. Binary families use y in {-1, +1}; poisson_log uses
/// non-negative integer counts stored as doubles.
enum class Family { logistic, probit, poisson_log };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

inline bool is_binary(Family family) { return family != Family::poisson_log; }

/// Per-observation negative log-likelihood f_y(t) with its first two
/// derivatives in the linear predictor t.
struct LossTerms {
  double value;
  double d1;
  double d2;
};

LossTerms loss_terms(Family family, double y, double t);

double loss(Family family, double y, double t);
double loss_d1(Family family, double y, double t);
double loss_d2(Family family, double y, double t);

/// Inverse link: P(Y = +1) for binary families, the mean count for Poisson.
double mean_response(Family family, double t);

/// Standard normal cdf and its logarithm, accurate deep into the lower tail.
double normal_cdf(double x);
double log_normal_cdf(double x);

/// Standard normal quantile z_prob, prob in (0, 1).
double normal_quantile(double prob);

}  // namespace rboot
