#include "rboot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rboot/error.hpp"

namespace rboot {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::parse_error, path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write " + path.string());
  return out;
}

}  // namespace

NamedDataset parse_dataset_csv(const std::filesystem::path& path, Family family, bool has_intercept) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  for (std::string_view f : split(line)) header.emplace_back(f);
  if (header.empty() || header[0] != "y") parse_fail(path, lineno, "first column must be named y");
  const std::size_t cols = header.size() - 1;
  if (cols == 0) parse_fail(path, lineno, "no covariate columns");

  std::vector<double> values;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size())
      parse_fail(path, lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      const auto res = std::from_chars(fields[c].data(), fields[c].data() + fields[c].size(), v);
      if (res.ec != std::errc() || res.ptr != fields[c].data() + fields[c].size())
        parse_fail(path, lineno, "column " + header[c] + ": not a number '" + std::string(fields[c]) + "'");
      if (!std::isfinite(v)) parse_fail(path, lineno, "column " + header[c] + ": non-finite value");
      if (c == 0) {
        if (is_binary(family)) {
          if (v == 0.0) v = -1.0;
          if (v != 1.0 && v != -1.0) parse_fail(path, lineno, "binary response must be 0/1 or -1/+1");
        } else if (v < 0.0 || v != std::floor(v)) {
          parse_fail(path, lineno, "Poisson response must be a non-negative integer");
        }
        ys.push_back(v);
      } else {
        values.push_back(v);
      }
    }
  }
  const auto n = static_cast<Index>(ys.size());
  const auto p = static_cast<Index>(cols) + (has_intercept ? 1 : 0);
  if (n < p + 1)
    throw Error(ErrorKind::invalid_input, path.string() + ": n >= p+1 required (n=" + std::to_string(n) +
                                              ", p=" + std::to_string(p) + ")");
  NamedDataset out;
  out.data.family = family;
  out.data.has_intercept = has_intercept;
  out.data.y = Eigen::Map<const VectorXd>(ys.data(), n);
  out.data.X.resize(n, p);
  const Index offset = has_intercept ? 1 : 0;
  if (has_intercept) {
    out.data.X.col(0).setOnes();
    out.names.emplace_back("(Intercept)");
  }
  for (std::size_t c = 1; c < header.size(); ++c) out.names.push_back(header[c]);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < static_cast<Index>(cols); ++j)
      out.data.X(i, j + offset) = values[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j)];
  validate(out.data);
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  const Index offset = data.has_intercept ? 1 : 0;
  out << "y";
  for (Index j = offset; j < data.p(); ++j) out << ",x" << (j - offset + 1);
  out << "\n";
  for (Index i = 0; i < data.n(); ++i) {
    const double y = is_binary(data.family) ? (data.y[i] > 0 ? 1.0 : 0.0) : data.y[i];
    out << format_double(y);
    for (Index j = offset; j < data.p(); ++j) out << "," << format_double(data.X(i, j));
    out << "\n";
  }
}

void to_json(json& j, const DesignSpec& s) {
  j = json{{"schema_version", kSchemaVersion},
           {"name", s.name},
           {"n", s.n},
           {"p", s.p},
           {"family", std::string(to_string(s.family))},
           {"seed", s.seed},
           {"covariates",
            {{"kind", std::string(to_string(s.covariates.kind))},
             {"nu", s.covariates.nu},
             {"rho", s.covariates.rho},
             {"arch_alpha0", s.covariates.arch_alpha0},
             {"arch_alpha1", s.covariates.arch_alpha1},
             {"pareto_shape", s.covariates.pareto_shape},
             {"pareto_scale", s.covariates.pareto_scale},
             {"pareto_center", s.covariates.pareto_center}}},
           {"coefficients",
            {{"kind", std::string(to_string(s.coefficients.kind))},
             {"nonnull", s.coefficients.nonnull},
             {"mean", s.coefficients.mean},
             {"sd", s.coefficients.sd},
             {"magnitude", s.coefficients.magnitude}}}};
  if (s.coefficients.target_gamma) j["coefficients"]["target_gamma"] = *s.coefficients.target_gamma;
}

void from_json(const json& j, DesignSpec& s) {
  DesignSpec d;
  d.name = j.value("name", d.name);
  d.n = j.at("n").get<Index>();
  d.p = j.at("p").get<Index>();
  d.family = parse_family(j.value("family", std::string("logistic")));
  d.seed = j.value("seed", d.seed);
  if (j.contains("covariates")) {
    const json& c = j["covariates"];
    d.covariates.kind = parse_covariate_kind(c.value("kind", std::string("gaussian_iid")));
    d.covariates.nu = c.value("nu", d.covariates.nu);
    d.covariates.rho = c.value("rho", d.covariates.rho);
    d.covariates.arch_alpha0 = c.value("arch_alpha0", d.covariates.arch_alpha0);
    d.covariates.arch_alpha1 = c.value("arch_alpha1", d.covariates.arch_alpha1);
    d.covariates.pareto_shape = c.value("pareto_shape", d.covariates.pareto_shape);
    d.covariates.pareto_scale = c.value("pareto_scale", d.covariates.pareto_scale);
    d.covariates.pareto_center = c.value("pareto_center", d.covariates.pareto_center);
  }
  if (j.contains("coefficients")) {
    const json& c = j["coefficients"];
    d.coefficients.kind = parse_coefficient_kind(c.value("kind", std::string("mixture")));
    d.coefficients.nonnull = c.value("nonnull", d.coefficients.nonnull);
    d.coefficients.mean = c.value("mean", d.coefficients.mean);
    d.coefficients.sd = c.value("sd", d.coefficients.sd);
    d.coefficients.magnitude = c.value("magnitude", d.coefficients.magnitude);
    if (c.contains("target_gamma")) d.coefficients.target_gamma = c["target_gamma"].get<double>();
  }
  validate(d);
  s = std::move(d);
}

void write_intervals_csv(const std::filesystem::path& path, const NamedIntervals& intervals) {
  std::ofstream out = open_out(path);
  out << "coordinate,method,level,lo,hi\n";
  for (const IntervalSet& set : intervals.sets)
    for (Index j = 0; j < set.size(); ++j)
      out << intervals.names[static_cast<std::size_t>(j)] << "," << to_string(set.method) << ","
          << format_double(set.level) << "," << format_double(set.lo[j]) << "," << format_double(set.hi[j]) << "\n";
}

json intervals_json(const NamedIntervals& intervals) {
  json rows = json::array();
  for (const IntervalSet& set : intervals.sets)
    for (Index j = 0; j < set.size(); ++j)
      rows.push_back({{"coordinate", intervals.names[static_cast<std::size_t>(j)]},
                      {"method", std::string(to_string(set.method))},
                      {"level", set.level},
                      {"lo", set.lo[j]},
                      {"hi", set.hi[j]}});
  return json{{"schema_version", kSchemaVersion}, {"intervals", rows}};
}

void write_curve_csv(const std::filesystem::path& path, const GammaCurve& curve) {
  std::ofstream out = open_out(path);
  out << "# eta_tilde=" << format_double(curve.eta_tilde) << "\n";
  out << "# gamma_hat=" << (curve.gamma_hat ? format_double(*curve.gamma_hat) : std::string("NA")) << "\n";
  out << "s,gamma,replicate,eta_hat,eta_smooth\n";
  for (const GammaKnot& k : curve.knots)
    for (std::size_t r = 0; r < k.eta_samples.size(); ++r)
      out << format_double(k.s) << "," << format_double(k.gamma) << "," << r + 1 << ","
          << format_double(k.eta_samples[r]) << "," << format_double(k.eta_smooth) << "\n";
}

void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m, const std::vector<std::string>& names) {
  std::ofstream out = open_out(path);
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(std::isnan(v[i]) ? json(nullptr) : json(v[i]));
  return a;
}

json coverage_json(const CoverageReport& r) {
  json cells = json::array();
  for (const CoverageCell& c : r.cells)
    cells.push_back({{"column", c.column},
                     {"level", c.level},
                     {"q_j", vector_json(c.q_j)},
                     {"qbar", c.qbar},
                     {"qbar_se", c.qbar_se}});
  json rows = json::array();
  for (const BiasSdRow& b : r.bias_sd.rows)
    rows.push_back({{"coordinate", b.coordinate},
                    {"beta", b.beta},
                    {"mean_mle", b.mean_mle},
                    {"empirical_bias", std::isnan(b.empirical_bias) ? json(nullptr) : json(b.empirical_bias)},
                    {"empirical_sd", b.empirical_sd},
                    {"classical_sd", b.classical_sd},
                    {"resized_sd", b.resized_sd}});
  json modes = json::array();
  for (GammaMode g : r.bias_sd.gamma_modes) modes.push_back(std::string(to_string(g)));
  return json{{"schema_version", kSchemaVersion},
              {"design", r.design},
              {"beta", vector_json(r.beta)},
              {"gamma_true", r.gamma_true},
              {"N", r.N},
              {"n_ok", r.n_ok},
              {"n_failed", r.n_failed},
              {"bootstrap_failures", r.bootstrap_failures},
              {"cells", cells},
              {"bias_sd",
               {{"rows", rows},
                {"gamma_modes", modes},
                {"resized_alpha", r.bias_sd.resized_alpha},
                {"mean_gamma", r.bias_sd.mean_gamma},
                {"empirical_slope", r.bias_sd.empirical_slope}}}};
}

void write_coverage_csv(const std::filesystem::path& path, const CoverageReport& r) {
  std::ofstream out = open_out(path);
  out << "column,level,kind,coordinate,beta,coverage,se\n";
  for (const CoverageCell& c : r.cells) {
    for (Index j = 0; j < c.q_j.size(); ++j)
      out << c.column << "," << format_double(c.level) << ",q_j," << j << "," << format_double(r.beta[j]) << ","
          << format_double(c.q_j[j]) << "," << format_double(c.q_se(j)) << "\n";
    out << c.column << "," << format_double(c.level) << ",qbar,,," << format_double(c.qbar) << ","
        << format_double(c.qbar_se) << "\n";
  }
}

void write_bias_sd_csv(const std::filesystem::path& path, const BiasSdTable& t) {
  std::ofstream out = open_out(path);
  out << "coordinate,beta,mean_mle,empirical_bias,empirical_sd,classical_sd";
  for (GammaMode g : t.gamma_modes) out << ",resized_sd_" << to_string(g);
  out << "\n";
  for (const BiasSdRow& b : t.rows) {
    out << b.coordinate << "," << format_double(b.beta) << "," << format_double(b.mean_mle) << ","
        << format_double(b.empirical_bias) << "," << format_double(b.empirical_sd) << ","
        << format_double(b.classical_sd);
    for (double s : b.resized_sd) out << "," << format_double(s);
    out << "\n";
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) { open_out(path) << text; }

void write_json(const std::filesystem::path& path, const json& j) { open_out(path) << j.dump(2) << "\n"; }

}  // namespace rboot
