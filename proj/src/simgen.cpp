#include "rboot/simgen.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "rboot/error.hpp"

namespace rboot {

std::string_view to_string(CovariateKind kind) {
  switch (kind) {
    case CovariateKind::gaussian_iid: return "gaussian_iid";
    case CovariateKind::mvt: return "mvt";
    case CovariateKind::modified_arch: return "modified_arch";
    case CovariateKind::pareto_iid: return "pareto_iid";
  }
  return "unknown";
}

std::string_view to_string(CoefficientKind kind) {
  return kind == CoefficientKind::mixture ? "mixture" : "fixed_magnitude";
}

CovariateKind parse_covariate_kind(std::string_view name) {
  if (name == "gaussian_iid") return CovariateKind::gaussian_iid;
  if (name == "mvt") return CovariateKind::mvt;
  if (name == "modified_arch") return CovariateKind::modified_arch;
  if (name == "pareto_iid") return CovariateKind::pareto_iid;
  throw Error(ErrorKind::invalid_input, "unknown covariate kind '" + std::string(name) + "'");
}

CoefficientKind parse_coefficient_kind(std::string_view name) {
  if (name == "mixture") return CoefficientKind::mixture;
  if (name == "fixed_magnitude") return CoefficientKind::fixed_magnitude;
  throw Error(ErrorKind::invalid_input, "unknown coefficient kind '" + std::string(name) + "'");
}

void validate(const DesignSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_input, "design: " + msg); };
  if (spec.p < 1 || spec.n < spec.p + 1) fail("n >= p+1 and p >= 1 required");
  const CovariateSpec& c = spec.covariates;
  switch (c.kind) {
    case CovariateKind::mvt:
      if (!(c.nu > 2.0)) fail("mvt needs nu > 2");
      if (!(std::abs(c.rho) < 1.0)) fail("mvt needs |rho| < 1");
      break;
    case CovariateKind::modified_arch:
      if (!(c.nu > 0.0)) fail("modified_arch needs nu > 0");
      if (!(c.arch_alpha0 > 0.0)) fail("modified_arch needs alpha0 > 0");
      if (!(c.arch_alpha1 >= 0.0 && c.arch_alpha1 < 1.0)) fail("modified_arch needs 0 <= alpha1 < 1");
      break;
    case CovariateKind::pareto_iid:
      if (!(c.pareto_shape > 2.0)) fail("pareto needs shape > 2");
      if (!(c.pareto_scale > 0.0)) fail("pareto needs scale > 0");
      break;
    case CovariateKind::gaussian_iid: break;
  }
  const CoefficientSpec& b = spec.coefficients;
  if (b.nonnull < 0 || b.nonnull > spec.p) fail("non-null count must lie in [0, p]");
  if (b.target_gamma && !(*b.target_gamma >= 0.0)) fail("target_gamma must be non-negative");
}

MatrixXd covariate_covariance(const DesignSpec& spec) {
  const double inv_p = 1.0 / static_cast<double>(spec.p);
  if (spec.covariates.kind == CovariateKind::mvt) return circulant_correlation(spec.p, spec.covariates.rho) * inv_p;
  return MatrixXd::Identity(spec.p, spec.p) * inv_p;
}

namespace {

void standardize_columns_empirically(MatrixXd& X) {
  const double target = 1.0 / std::sqrt(static_cast<double>(X.cols()));
  const double denom = static_cast<double>(X.rows() - 1);
  for (Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() / denom);
    if (sd > 0.0) X.col(j) *= target / sd;
  }
}

}  // namespace

MatrixXd gen_covariates(const DesignSpec& spec, std::uint64_t seed) {
  validate(spec);
  const Index n = spec.n;
  const Index p = spec.p;
  const CovariateSpec& c = spec.covariates;
  const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(p));
  MatrixXd X(n, p);
  std::normal_distribution<double> normal;

  switch (c.kind) {
    case CovariateKind::gaussian_iid: {
      for (Index i = 0; i < n; ++i) {
        Rng rng = make_rng(seed, Stream::design_covariates, static_cast<std::uint64_t>(i));
        for (Index j = 0; j < p; ++j) X(i, j) = normal(rng) * inv_sqrt_p;
      }
      break;
    }
    case CovariateKind::mvt: {
      const Eigen::LLT<MatrixXd> llt(circulant_correlation(p, c.rho));
      if (llt.info() != Eigen::Success) throw Error(ErrorKind::invalid_input, "circulant correlation not positive definite");
      // Var of a unit-scale t_nu coordinate is nu / (nu - 2).
      const double standardize = std::sqrt((c.nu - 2.0) / c.nu) * inv_sqrt_p;
      std::chi_squared_distribution<double> chi2(c.nu);
      MatrixXd Z(n, p);
      VectorXd row_scale(n);
      for (Index i = 0; i < n; ++i) {
        Rng rng = make_rng(seed, Stream::design_covariates, static_cast<std::uint64_t>(i));
        for (Index j = 0; j < p; ++j) Z(i, j) = normal(rng);
        row_scale[i] = standardize / std::sqrt(chi2(rng) / c.nu);
      }
      X.noalias() = Z * llt.matrixU();  // rows ~ N(0, Sigma)
      X = row_scale.asDiagonal() * X;
      break;
    }
    case CovariateKind::modified_arch: {
      std::chi_squared_distribution<double> chi2(c.nu);
      const double sd0 = std::sqrt(c.arch_alpha0 / (1.0 - c.arch_alpha1));
      for (Index i = 0; i < n; ++i) {
        Rng rng = make_rng(seed, Stream::design_covariates, static_cast<std::uint64_t>(i));
        double prev = sd0 * normal(rng);
        for (Index j = 0; j < p; ++j) {
          const double sigma = std::sqrt(c.arch_alpha0 + c.arch_alpha1 * prev * prev);
          prev = sigma * normal(rng);
          X(i, j) = prev;
        }
        X.row(i) /= std::sqrt(chi2(rng));  // zeta = 1 / chi_nu
      }
      standardize_columns_empirically(X);
      break;
    }
    case CovariateKind::pareto_iid: {
      const double a = c.pareto_shape;
      const double m = c.pareto_scale;
      const double mean = a * m / (a - 1.0);
      const double sd = m / (a - 1.0) * std::sqrt(a / (a - 2.0));
      const double shift = c.pareto_center ? mean : 0.0;
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (Index i = 0; i < n; ++i) {
        Rng rng = make_rng(seed, Stream::design_covariates, static_cast<std::uint64_t>(i));
        for (Index j = 0; j < p; ++j) {
          const double u = 1.0 - unif(rng);  // (0, 1]
          X(i, j) = (m * std::pow(u, -1.0 / a) - shift) / sd * inv_sqrt_p;
        }
      }
      break;
    }
  }
  return X;
}

double population_gamma(const DesignSpec& spec, const Eigen::Ref<const VectorXd>& beta) {
  if (spec.covariates.kind == CovariateKind::mvt)
    return std::sqrt(beta.dot(circulant_correlation(spec.p, spec.covariates.rho) * beta) / static_cast<double>(spec.p));
  return beta.norm() / std::sqrt(static_cast<double>(spec.p));
}

VectorXd gen_coefficients(const DesignSpec& spec, std::uint64_t seed) {
  validate(spec);
  const CoefficientSpec& c = spec.coefficients;
  Rng rng = make_rng(seed, Stream::design_coefficients, 0);
  std::vector<Index> idx(static_cast<std::size_t>(spec.p));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial Fisher-Yates: the first `nonnull` slots are a uniform subset.
  for (Index k = 0; k < c.nonnull; ++k) {
    std::uniform_int_distribution<Index> pick(k, spec.p - 1);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  std::sort(idx.begin(), idx.begin() + c.nonnull);

  VectorXd beta = VectorXd::Zero(spec.p);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal;
  for (Index k = 0; k < c.nonnull; ++k) {
    const double sign = coin(rng) ? 1.0 : -1.0;
    beta[idx[static_cast<std::size_t>(k)]] =
        c.kind == CoefficientKind::mixture ? sign * c.mean + c.sd * normal(rng) : sign * c.magnitude;
  }
  if (c.target_gamma) {
    const double g = population_gamma(spec, beta);
    if (g > 0.0) beta *= *c.target_gamma / g;
  }
  return beta;
}

VectorXd simulate_response(const Eigen::Ref<const VectorXd>& eta, Family family, Rng& rng) {
  VectorXd y(eta.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index i = 0; i < eta.size(); ++i) {
    if (family == Family::poisson_log) {
      const double mu = std::exp(eta[i]);
      if (!(mu <= 1e12)) throw Error(ErrorKind::poisson_overflow, "Poisson mean exceeds 1e12 at row " + std::to_string(i));
      y[i] = static_cast<double>(std::poisson_distribution<long long>(mu)(rng));
    } else {
      y[i] = unif(rng) < mean_response(family, eta[i]) ? 1.0 : -1.0;
    }
  }
  return y;
}

VectorXd gen_response(const Eigen::Ref<const MatrixXd>& X, const Eigen::Ref<const VectorXd>& beta, Family family,
                      Rng& rng) {
  if (X.cols() != beta.size()) throw Error(ErrorKind::invalid_input, "gen_response: shape mismatch");
  return simulate_response(X * beta, family, rng);
}

Dataset draw_dataset(const DesignSpec& spec, const Eigen::Ref<const VectorXd>& beta, std::uint64_t draw_seed) {
  MatrixXd X = gen_covariates(spec, draw_seed);
  Rng rng = make_rng(draw_seed, Stream::design_response, 0);
  VectorXd y = gen_response(X, beta, spec.family, rng);
  return Dataset{std::move(X), std::move(y), spec.family, false};
}

SimulatedData simulate_design(const DesignSpec& spec, std::optional<std::uint64_t> draw_seed) {
  SimulatedData sim;
  sim.beta = gen_coefficients(spec, spec.seed);
  sim.gamma = population_gamma(spec, sim.beta);
  sim.data = draw_dataset(spec, sim.beta, draw_seed.value_or(spec.seed));
  return sim;
}

DesignSpec named_design(std::string_view name) {
  DesignSpec d;
  d.name = std::string(name);
  d.n = 4000;
  d.p = 400;
  d.covariates.kind = CovariateKind::mvt;
  d.coefficients = {CoefficientKind::mixture, 50, 5.0, 1.0, 10.0, std::nullopt};
  if (name == "mvt-large") return d;
  if (name == "arch-large") {
    d.covariates.kind = CovariateKind::modified_arch;
    return d;
  }
  if (name == "probit-arch") {
    d.covariates.kind = CovariateKind::modified_arch;
    d.coefficients.mean = 3.0;
    d.family = Family::probit;
    return d;
  }
  if (name == "poisson-large") {
    d.coefficients.mean = 3.0;
    d.family = Family::poisson_log;
    return d;
  }
  if (name == "sparse-appendixC") {
    d.covariates.kind = CovariateKind::modified_arch;
    d.coefficients = {CoefficientKind::fixed_magnitude, 10, 0.0, 0.0, 10.0, std::nullopt};
    return d;
  }
  if (name == "pareto-small") {
    d.n = 400;
    d.p = 40;
    d.covariates.kind = CovariateKind::pareto_iid;
    d.coefficients.nonnull = 20;
    return d;
  }
  if (name == "gaussian-small") {
    d.n = 200;
    d.p = 20;
    d.covariates.kind = CovariateKind::gaussian_iid;
    d.coefficients = {CoefficientKind::mixture, 5, 3.0, 1.0, 10.0, std::nullopt};
    return d;
  }
  throw Error(ErrorKind::invalid_input, "unknown design '" + std::string(name) + "'");
}

std::vector<std::string> design_names() {
  return {"mvt-large", "arch-large", "probit-arch", "pareto-small", "poisson-large", "sparse-appendixC",
          "gaussian-small"};
}

DesignSpec scaled_design(DesignSpec spec, Index n, Index p) {
  const double ratio = static_cast<double>(p) / static_cast<double>(spec.p);
  spec.coefficients.nonnull =
      std::min<Index>(p, static_cast<Index>(std::llround(static_cast<double>(spec.coefficients.nonnull) * ratio)));
  spec.n = n;
  spec.p = p;
  return spec;
}

}  // namespace rboot
