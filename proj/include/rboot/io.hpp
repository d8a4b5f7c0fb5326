#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "rboot/boot.hpp"
#include "rboot/evalcov.hpp"
#include "rboot/glm.hpp"
#include "rboot/interval_set.hpp"
#include "rboot/signal.hpp"
#include "rboot/simgen.hpp"

namespace rboot {

inline constexpr int kSchemaVersion = 1;

/// Dataset plus the covariate names read from the CSV header.
struct NamedDataset {
  Dataset data;
  std::vector<std::string> names;  // one per column of data.X, "(Intercept)" first when present
};

/// Header row, first column `y`, remaining columns numeric covariates.
/// Binary responses may be 0/1 or -1/+1 and are stored as -1/+1. With
/// has_intercept a column of ones is prepended. Errors name the line.
NamedDataset parse_dataset_csv(const std::filesystem::path& path, Family family, bool has_intercept);

/// Inverse of parse_dataset_csv (binary y written as 0/1, intercept column dropped).
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

void to_json(nlohmann::json& j, const DesignSpec& spec);
void from_json(const nlohmann::json& j, DesignSpec& spec);

struct NamedIntervals {
  std::vector<std::string> names;
  std::vector<IntervalSet> sets;
};

void write_intervals_csv(const std::filesystem::path& path, const NamedIntervals& intervals);
nlohmann::json intervals_json(const NamedIntervals& intervals);

void write_curve_csv(const std::filesystem::path& path, const GammaCurve& curve);
void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m, const std::vector<std::string>& names);

nlohmann::json coverage_json(const CoverageReport& report);
void write_coverage_csv(const std::filesystem::path& path, const CoverageReport& report);
void write_bias_sd_csv(const std::filesystem::path& path, const BiasSdTable& table);

nlohmann::json vector_json(const VectorXd& v);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace rboot
