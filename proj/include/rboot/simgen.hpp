#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rboot/glm.hpp"
#include "rboot/random.hpp"

namespace rboot {

enum class CovariateKind { gaussian_iid, mvt, modified_arch, pareto_iid };
enum class CoefficientKind { mixture, fixed_magnitude };

std::string_view to_string(CovariateKind kind);
std::string_view to_string(CoefficientKind kind);
CovariateKind parse_covariate_kind(std::string_view name);
CoefficientKind parse_coefficient_kind(std::string_view name);

struct CovariateSpec {
  CovariateKind kind = CovariateKind::gaussian_iid;
  double nu = 8.0;            // mvt degrees of freedom; chi mixing dof for modified_arch
  double rho = 0.5;           // mvt circulant correlation base
  double arch_alpha0 = 0.6;
  double arch_alpha1 = 0.4;
  double pareto_shape = 5.0;
  double pareto_scale = 1.0;
  bool pareto_center = true;
};

struct CoefficientSpec {
  CoefficientKind kind = CoefficientKind::mixture;
  Index nonnull = 0;
  double mean = 5.0;        // mixture of N(+mean, sd^2) and N(-mean, sd^2)
  double sd = 1.0;
  double magnitude = 10.0;  // fixed_magnitude with random signs
  std::optional<double> target_gamma;  // rescale so that the population sd(x'beta) hits this
};

/// A simulation design: covariate law, coefficient scheme, response family.
/// Every covariate generator standardizes columns to variance 1/p.
struct DesignSpec {
  std::string name = "custom";
  Index n = 0;
  Index p = 0;
  CovariateSpec covariates;
  CoefficientSpec coefficients;
  Family family = Family::logistic;
  std::uint64_t seed = 1;
};

void validate(const DesignSpec& spec);

/// Sigma_ij = rho^min(|i-j|, p+1-|i-j|).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> circulant_correlation(Index p, Scalar rho) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> S(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) {
      const Index d = i > j ? i - j : j - i;
      S(i, j) = std::pow(rho, static_cast<Scalar>(std::min(d, p + 1 - d)));
    }
  return S;
}

/// Population covariance of one standardized covariate row.
MatrixXd covariate_covariance(const DesignSpec& spec);

/// Rows are generated from counter-derived substreams of `seed`.
MatrixXd gen_covariates(const DesignSpec& spec, std::uint64_t seed);

VectorXd gen_coefficients(const DesignSpec& spec, std::uint64_t seed);

/// Draws responses at linear predictors eta (binary families return +-1).
/// Throws Error(poisson_overflow) if some Poisson mean exceeds 1e12.
VectorXd simulate_response(const Eigen::Ref<const VectorXd>& eta, Family family, Rng& rng);

VectorXd gen_response(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& beta, Family family,
                      Rng& rng);

/// sqrt(beta' Cov beta) under the design's covariate law.
double population_gamma(const DesignSpec& spec, const Eigen::Ref<const VectorXd>& beta);

struct SimulatedData {
  Dataset data;
  VectorXd beta;
  double gamma = 0.0;  // population signal strength of beta
};

/// Coefficients from the design seed, then one covariate/response draw from
/// `draw_seed` (defaults to the design seed).
SimulatedData simulate_design(const DesignSpec& spec, std::optional<std::uint64_t> draw_seed = std::nullopt);

/// Draws X and y for already fixed coefficients.
Dataset draw_dataset(const DesignSpec& spec, const Eigen::Ref<const VectorXd>& beta, std::uint64_t draw_seed);

/// Preset designs: mvt-large, arch-large, probit-arch, pareto-small,
/// poisson-large, sparse-appendixC, gaussian-small.
DesignSpec named_design(std::string_view name);
std::vector<std::string> design_names();

/// Same design at a different (n, p); the non-null count scales with p.
DesignSpec scaled_design(DesignSpec spec, Index n, Index p);

}  // namespace rboot
