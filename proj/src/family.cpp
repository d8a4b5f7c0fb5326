#include "rboot/family.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "rboot/error.hpp"

namespace rboot {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::separable: return "separable";
    case ErrorKind::singular_hessian: return "singular_hessian";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::leverage_degenerate: return "leverage_degenerate";
    case ErrorKind::curve_not_bracketing: return "curve_not_bracketing";
    case ErrorKind::zero_mle: return "zero_mle";
    case ErrorKind::too_many_failures: return "too_many_failures";
    case ErrorKind::insufficient_samples: return "insufficient_samples";
    case ErrorKind::poisson_overflow: return "poisson_overflow";
  }
  return "unknown";
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::logistic: return "logistic";
    case Family::probit: return "probit";
    case Family::poisson_log: return "poisson";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "logistic" || name == "binomial") return Family::logistic;
  if (name == "probit") return Family::probit;
  if (name == "poisson" || name == "poisson-log" || name == "poisson_log") return Family::poisson_log;
  throw Error(ErrorKind::invalid_input, "unknown family '" + std::string(name) + "'");
}

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))
constexpr double kProbitTail = 8.0;

struct ProbitTerms {
  double log_cdf;  // log Phi(x)
  double mills;    // phi(x) / Phi(x)
  double curv;     // mills * (x + mills)
};

// Lower tail x < -8 via the continued fraction
//   Phi(x) / phi(x) = 1 / (z + 1 / (z + 2 / (z + 3 / ...))),  z = -x.
// With K = z + 2 / (z + 3 / ...), phi/Phi = z + 1/K and x + phi/Phi = 1/K,
// so the curvature never forms the cancelling difference explicitly.
ProbitTerms probit_lower_tail(double x) {
  const double z = -x;
  double k = z;
  for (int j = 60; j >= 2; --j) k = z + j / k;
  const double mills = z + 1.0 / k;
  return {-0.5 * x * x - kLogSqrt2Pi - std::log(mills), mills, mills / k};
}

ProbitTerms probit_terms(double x) {
  if (x < -kProbitTail) return probit_lower_tail(x);
  const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * x * x - kLogSqrt2Pi);
  const double mills = pdf / cdf;
  const double log_cdf = x > 0.0 ? std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2)) : std::log(cdf);
  return {log_cdf, mills, mills * (x + mills)};
}

// log(1 + exp(-m)) without overflow.
double softplus_neg(double m) { return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

LossTerms loss_terms(Family family, double y, double t) {
  switch (family) {
    case Family::logistic: {
      const double m = y * t;
      const double s = sigmoid(-m);
      return {softplus_neg(m), -y * s, s * (1.0 - s)};
    }
    case Family::probit: {
      const ProbitTerms pt = probit_terms(y * t);
      return {-pt.log_cdf, -y * pt.mills, pt.curv};
    }
    case Family::poisson_log: {
      const double mu = std::exp(t);
      return {mu - y * t, mu - y, mu};
    }
  }
  return {0.0, 0.0, 0.0};
}

double loss(Family family, double y, double t) { return loss_terms(family, y, t).value; }
double loss_d1(Family family, double y, double t) { return loss_terms(family, y, t).d1; }
double loss_d2(Family family, double y, double t) { return loss_terms(family, y, t).d2; }

double mean_response(Family family, double t) {
  switch (family) {
    case Family::logistic: return sigmoid(t);
    case Family::probit: return normal_cdf(t);
    case Family::poisson_log: return std::exp(t);
  }
  return 0.0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_normal_cdf(double x) { return probit_terms(x).log_cdf; }

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw Error(ErrorKind::invalid_input, "normal_quantile: probability outside (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

}  // namespace rboot
