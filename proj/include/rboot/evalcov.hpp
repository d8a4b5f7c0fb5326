#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rboot/boot.hpp"
#include "rboot/glm.hpp"
#include "rboot/parallel.hpp"
#include "rboot/random.hpp"
#include "rboot/simgen.hpp"

namespace rboot {

enum class BaselineMode { pairs, parametric_at_mle };

/// n indices drawn uniformly with replacement.
std::vector<Index> pairs_resample(Index n, Rng& rng);

/// Comparison bootstraps. pairs resamples rows of (X, y); parametric_at_mle
/// simulates responses at beta_hat itself. Both are summarized against
/// beta_hat. Throws Error(too_many_failures) if more than half the refits fail.
BootstrapSummary baseline_bootstraps(const Dataset& data, const FitResult& fit, int B, BaselineMode mode,
                                     std::uint64_t seed, unsigned threads = default_threads());

enum class CoverageMethod { classical, pairs, parametric, boot_g, boot_t };
enum class GammaMode { known, estimated };

std::string_view to_string(CoverageMethod method);
std::string_view to_string(GammaMode mode);
CoverageMethod parse_coverage_method(std::string_view name);

struct CoverageOptions {
  std::vector<CoverageMethod> methods{CoverageMethod::classical, CoverageMethod::boot_g, CoverageMethod::boot_t};
  std::vector<double> levels{0.95, 0.90, 0.80};
  std::vector<GammaMode> gamma_modes{GammaMode::known};
  int N = 100;
  int B = 100;
  int grid_size = 8;
  int reps = 2;
  std::uint64_t seed = 1;
  bool fix_x = false;
  unsigned threads = default_threads();
};

/// Coverage tallies for one interval construction at one level.
struct CoverageCell {
  std::string column;  // e.g. "classical", "boot-t/known"
  CoverageMethod method = CoverageMethod::classical;
  std::optional<GammaMode> gamma_mode;
  double level = 0.95;
  VectorXd q_j;     // per coordinate, over successful repetitions
  VectorXd qbar_i;  // per successful repetition, over coordinates
  double qbar = 0.0;
  double qbar_se = 0.0;  // sd(qbar_i) / sqrt(N)

  /// Binomial Monte Carlo standard error of q_j.
  double q_se(Index j) const;
};

struct BiasSdRow {
  Index coordinate = 0;
  double beta = 0.0;
  double mean_mle = 0.0;
  double empirical_bias = NAN;  // mean(beta_hat_j) / beta_j; NaN for nulls
  double empirical_sd = 0.0;
  double classical_sd = 0.0;          // mean Wald standard error
  std::vector<double> resized_sd;     // mean sigma_hat_j per gamma mode
};

struct BiasSdTable {
  std::vector<BiasSdRow> rows;
  std::vector<GammaMode> gamma_modes;
  std::vector<double> resized_alpha;  // mean alpha_hat per gamma mode
  std::vector<double> mean_gamma;     // mean gamma used per gamma mode
  double empirical_slope = NAN;       // through-origin regression of mean MLE on beta (non-nulls)
};

struct CoverageReport {
  DesignSpec design;
  VectorXd beta;
  double gamma_true = 0.0;
  int N = 0;
  int n_ok = 0;
  int n_failed = 0;
  long long bootstrap_failures = 0;
  std::vector<CoverageCell> cells;
  BiasSdTable bias_sd;
};

/// Monte Carlo coverage of the requested interval constructions. Coefficients
/// come from the design seed once; every repetition redraws X (unless fix_x)
/// and y, refits, bootstraps and tallies indicator coverage. Throws
/// Error(too_many_failures) when more than half the repetitions fail.
CoverageReport run_coverage(const DesignSpec& design, const CoverageOptions& opts);

/// Bias / standard deviation study (no intervals). Requires N >= 100.
BiasSdTable run_bias_sd_study(const DesignSpec& design, CoverageOptions opts);

/// Human-readable table mirroring the layout of the published coverage tables.
std::string format_coverage_table(const CoverageReport& report);
std::string format_bias_sd_table(const BiasSdTable& table);

}  // namespace rboot
