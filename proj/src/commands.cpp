#include "rboot/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rboot/boot.hpp"
#include "rboot/error.hpp"
#include "rboot/evalcov.hpp"
#include "rboot/intervals.hpp"
#include "rboot/io.hpp"
#include "rboot/signal.hpp"
#include "rboot/simgen.hpp"
#include "rboot/sloe.hpp"

namespace rboot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Config {
  std::string data;
  std::string design;
  std::string family = "logistic";
  bool intercept = false;
  std::vector<double> levels;
  int B = 0;
  int grid = 10;
  int reps = 3;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  std::string out = ".";
  double known_gamma = NAN;
  std::vector<std::string> methods;
  bool fix_x = false;
  bool dump_boot = false;
  int N = 100;
  Index n = 0;
  Index p = 0;
  std::string gamma = "known";

  CLI::Option* seed_opt = nullptr;
  CLI::Option* family_opt = nullptr;
};

DesignSpec load_design(const Config& c) {
  DesignSpec spec;
  if (fs::is_regular_file(c.design)) {
    std::ifstream in(c.design);
    try {
      spec = json::parse(in).get<DesignSpec>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse_error, c.design + ": " + e.what());
    }
  } else {
    spec = named_design(c.design);
  }
  if (c.n > 0 || c.p > 0) spec = scaled_design(spec, c.n > 0 ? c.n : spec.n, c.p > 0 ? c.p : spec.p);
  if (c.seed_opt->count() > 0) spec.seed = c.seed;
  if (c.family_opt->count() > 0) spec.family = parse_family(c.family);
  validate(spec);
  return spec;
}

std::vector<std::string> default_names(Index p, bool has_intercept) {
  std::vector<std::string> names;
  for (Index j = 0; j < p; ++j)
    names.push_back(has_intercept && j == 0 ? std::string("(Intercept)")
                                            : "x" + std::to_string(j + (has_intercept ? 0 : 1)));
  return names;
}

NamedDataset load_data(const Config& c) {
  if (c.data.empty() == c.design.empty()) throw Error(ErrorKind::invalid_input, "give exactly one of --data and --design");
  if (!c.data.empty()) return parse_dataset_csv(c.data, parse_family(c.family), c.intercept);
  const SimulatedData sim = simulate_design(load_design(c));
  return NamedDataset{sim.data, default_names(sim.data.p(), sim.data.has_intercept)};
}

std::vector<double> levels_of(const Config& c) {
  std::vector<double> levels = c.levels.empty() ? std::vector<double>{0.95} : c.levels;
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0)) throw Error(ErrorKind::invalid_input, "levels must lie in (0, 1)");
  return levels;
}

std::vector<CoverageMethod> methods_of(const Config& c, std::vector<CoverageMethod> fallback) {
  if (c.methods.empty()) return fallback;
  std::vector<CoverageMethod> out;
  for (const std::string& m : c.methods) {
    const CoverageMethod parsed = parse_coverage_method(m);
    if (std::find(out.begin(), out.end(), parsed) == out.end()) out.push_back(parsed);
  }
  return out;
}

FitResult checked_fit(const Dataset& data) {
  FitResult fit = fit_mle(data);
  switch (fit.status) {
    case FitStatus::converged: return fit;
    case FitStatus::separable: throw Error(ErrorKind::separable, "the data are separable; the MLE does not exist");
    case FitStatus::singular_hessian: throw Error(ErrorKind::singular_hessian, "singular Hessian at the MLE");
    case FitStatus::max_iter: break;
  }
  throw Error(ErrorKind::not_converged, "Newton iterations did not converge");
}

std::optional<double> try_eta_tilde(const Dataset& data, const FitResult& fit) {
  try {
    return sloe_estimate(data, fit).eta_hat;
  } catch (const Error&) {
    return std::nullopt;
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

GammaOptions gamma_options(const Config& c) {
  GammaOptions go;
  go.grid_size = c.grid;
  go.reps = c.reps;
  go.seed = c.seed;
  go.threads = c.threads;
  return go;
}

int cmd_fit(const Config& c, std::ostream& out) {
  const NamedDataset nd = load_data(c);
  const FitResult fit = checked_fit(nd.data);
  const VectorXd se = classical_standard_errors(fit);
  NamedIntervals ints{nd.names, {}};
  for (double level : levels_of(c)) ints.sets.push_back(classical_wald_ci(fit, level));

  const fs::path dir(c.out);
  write_json(dir / "fit.json", json{{"schema_version", kSchemaVersion},
                                    {"family", std::string(to_string(nd.data.family))},
                                    {"names", nd.names},
                                    {"beta_hat", vector_json(fit.beta_hat)},
                                    {"std_error", vector_json(se)},
                                    {"eta_tilde", optional_json(try_eta_tilde(nd.data, fit))},
                                    {"objective", fit.objective},
                                    {"grad_norm", fit.grad_norm},
                                    {"iterations", fit.iterations},
                                    {"status", std::string(to_string(fit.status))}});
  write_intervals_csv(dir / "intervals.csv", ints);
  write_json(dir / "intervals.json", intervals_json(ints));
  out << "fit: n=" << nd.data.n() << " p=" << nd.data.p() << " iterations=" << fit.iterations << "\n";
  return 0;
}

int cmd_infer(const Config& c, std::ostream& out) {
  const NamedDataset nd = load_data(c);
  const Dataset& data = nd.data;
  const std::vector<double> levels = levels_of(c);
  const std::vector<CoverageMethod> methods =
      methods_of(c, {CoverageMethod::classical, CoverageMethod::boot_g, CoverageMethod::boot_t});
  const bool wants_t = std::find(methods.begin(), methods.end(), CoverageMethod::boot_t) != methods.end();
  const int B = c.B > 0 ? c.B : (wants_t ? 10000 : 100);

  const FitResult fit = checked_fit(data);
  const double eta_tilde = sloe_estimate(data, fit).eta_hat;

  std::optional<GammaCurve> curve;
  double gamma_hat = c.known_gamma;
  if (std::isnan(gamma_hat)) {
    curve = estimate_gamma(data, fit, gamma_options(c));
    gamma_hat = *curve->gamma_hat;
  } else if (!(gamma_hat >= 0.0)) {
    throw Error(ErrorKind::invalid_input, "--known-gamma must be non-negative");
  }

  const ResizedCoefficients resized = resize(fit, gamma_hat, data.X, data.has_intercept);
  BootOptions bo;
  bo.B = B;
  bo.seed = c.seed;
  bo.threads = c.threads;
  const BootstrapSummary summary = run_bootstrap(data, resized, bo);

  std::optional<BootstrapSummary> pairs, parametric;
  NamedIntervals ints{nd.names, {}};
  for (double level : levels) {
    for (CoverageMethod m : methods) {
      switch (m) {
        case CoverageMethod::classical: ints.sets.push_back(classical_wald_ci(fit, level)); break;
        case CoverageMethod::boot_g: ints.sets.push_back(boot_g_ci(fit, summary, level)); break;
        case CoverageMethod::boot_t: ints.sets.push_back(boot_t_ci(fit, summary, resized, level)); break;
        case CoverageMethod::pairs:
          if (!pairs)
            pairs = baseline_bootstraps(data, fit, B, BaselineMode::pairs, derive_seed(c.seed, Stream::pairs, 0),
                                        c.threads);
          ints.sets.push_back(boot_g_ci(fit, *pairs, level));
          break;
        case CoverageMethod::parametric:
          if (!parametric)
            parametric = baseline_bootstraps(data, fit, B, BaselineMode::parametric_at_mle,
                                             derive_seed(c.seed, Stream::parametric, 0), c.threads);
          ints.sets.push_back(boot_g_ci(fit, *parametric, level));
          break;
      }
    }
  }

  const fs::path dir(c.out);
  write_json(dir / "summary.json", json{{"schema_version", kSchemaVersion},
                                        {"family", std::string(to_string(data.family))},
                                        {"names", nd.names},
                                        {"beta_hat", vector_json(fit.beta_hat)},
                                        {"beta_star", vector_json(resized.beta_star)},
                                        {"alpha_hat", summary.alpha_hat},
                                        {"sigma_hat", vector_json(summary.sigma_hat)},
                                        {"gamma_hat", gamma_hat},
                                        {"gamma_source", curve ? "estimated" : "known"},
                                        {"eta_tilde", eta_tilde},
                                        {"scale_s", resized.scale_s},
                                        {"B", B},
                                        {"n_failed", summary.n_failed},
                                        {"seed", c.seed}});
  write_intervals_csv(dir / "intervals.csv", ints);
  write_json(dir / "intervals.json", intervals_json(ints));
  if (curve) write_curve_csv(dir / "curve.csv", *curve);
  if (c.dump_boot) write_matrix_csv(dir / "boot.csv", summary.boot_mles, nd.names);
  out << "infer: gamma_hat=" << format_double(gamma_hat) << " alpha_hat=" << format_double(summary.alpha_hat)
      << " B=" << B << " failed=" << summary.n_failed << "\n";
  return 0;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const DesignSpec spec = load_design(c);
  const SimulatedData sim = simulate_design(spec);
  const fs::path dir(c.out);
  write_dataset_csv(dir / "data.csv", sim.data);
  write_json(dir / "design.json", json(spec));
  write_json(dir / "truth.json", json{{"schema_version", kSchemaVersion},
                                      {"beta", vector_json(sim.beta)},
                                      {"gamma", sim.gamma},
                                      {"seed", spec.seed}});
  out << "simulate: " << spec.name << " n=" << spec.n << " p=" << spec.p << " gamma=" << format_double(sim.gamma)
      << "\n";
  return 0;
}

int cmd_coverage(const Config& c, std::ostream& out) {
  if (c.design.empty()) throw Error(ErrorKind::invalid_input, "coverage needs --design");
  const DesignSpec spec = load_design(c);
  CoverageOptions opts;
  opts.methods = methods_of(c, opts.methods);
  opts.levels = c.levels.empty() ? opts.levels : levels_of(c);
  if (c.gamma == "known") opts.gamma_modes = {GammaMode::known};
  else if (c.gamma == "estimated") opts.gamma_modes = {GammaMode::estimated};
  else if (c.gamma == "both") opts.gamma_modes = {GammaMode::known, GammaMode::estimated};
  else throw Error(ErrorKind::invalid_input, "--gamma must be known, estimated or both");
  opts.N = c.N;
  const bool wants_t =
      std::find(opts.methods.begin(), opts.methods.end(), CoverageMethod::boot_t) != opts.methods.end();
  opts.B = c.B > 0 ? c.B : (wants_t ? 1000 : 100);
  opts.grid_size = c.grid;
  opts.reps = c.reps;
  opts.seed = c.seed;
  opts.fix_x = c.fix_x;
  opts.threads = c.threads;

  const CoverageReport report = run_coverage(spec, opts);
  const std::string table = format_coverage_table(report) + "\n" + format_bias_sd_table(report.bias_sd);
  const fs::path dir(c.out);
  write_json(dir / "coverage.json", coverage_json(report));
  write_coverage_csv(dir / "coverage.csv", report);
  write_bias_sd_csv(dir / "bias_sd.csv", report.bias_sd);
  write_text(dir / "coverage.txt", table);
  out << table;
  return 0;
}

int cmd_curve(const Config& c, std::ostream& out) {
  const NamedDataset nd = load_data(c);
  const FitResult fit = checked_fit(nd.data);
  const GammaCurve curve = trace_gamma_curve(nd.data, fit, gamma_options(c));
  write_curve_csv(fs::path(c.out) / "curve.csv", curve);
  if (!curve.gamma_hat)
    throw Error(ErrorKind::curve_not_bracketing, "eta_tilde lies above the simulated curve; curve.csv written");
  out << "curve: eta_tilde=" << format_double(curve.eta_tilde) << " gamma_hat=" << format_double(*curve.gamma_hat)
      << "\n";
  return 0;
}

void add_data_flags(CLI::App* sub, Config& c) {
  sub->add_option("--data", c.data, "dataset CSV (header row, y first)");
  sub->add_option("--design", c.design, "named design or design JSON file");
  sub->add_flag("--intercept", c.intercept, "prepend an intercept column to --data");
  sub->add_option("--n", c.n, "override the design sample size");
  sub->add_option("--p", c.p, "override the design dimension");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Resized parametric bootstrap for high-dimensional GLMs", "rboot"};
  app.require_subcommand(1);
  c.seed_opt = app.add_option("--seed", c.seed, "master random seed");
  c.family_opt = app.add_option("--family", c.family, "logistic, probit or poisson");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--threads", c.threads, "worker threads");
  app.add_option("--level", c.levels, "confidence level, repeatable");
  app.add_option("--B", c.B, "bootstrap replicates");
  app.add_option("--grid", c.grid, "signal-strength grid size I");
  app.add_option("--reps", c.reps, "replicates per grid point J");
  app.add_option("--method", c.methods, "classical, boot-g, boot-t, pairs, parametric");
  app.fallthrough();

  CLI::App* fit = app.add_subcommand("fit", "fit the MLE and classical intervals");
  add_data_flags(fit, c);
  CLI::App* infer = app.add_subcommand("infer", "resized bootstrap intervals");
  add_data_flags(infer, c);
  infer->add_option("--known-gamma", c.known_gamma, "skip estimation and resize to this signal strength");
  infer->add_flag("--dump-boot", c.dump_boot, "write the bootstrap MLEs to boot.csv");
  CLI::App* simulate = app.add_subcommand("simulate", "draw a dataset from a design");
  simulate->add_option("--design", c.design, "named design or design JSON file")->required();
  simulate->add_option("--n", c.n, "override the design sample size");
  simulate->add_option("--p", c.p, "override the design dimension");
  CLI::App* coverage = app.add_subcommand("coverage", "Monte Carlo coverage study");
  coverage->add_option("--design", c.design, "named design or design JSON file")->required();
  coverage->add_option("--n", c.n, "override the design sample size");
  coverage->add_option("--p", c.p, "override the design dimension");
  coverage->add_option("--N", c.N, "repetitions");
  coverage->add_option("--gamma", c.gamma, "known, estimated or both");
  coverage->add_flag("--fix-x", c.fix_x, "hold the covariates fixed across repetitions");
  CLI::App* curve = app.add_subcommand("curve", "signal-strength curve for plotting");
  add_data_flags(curve, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (c.threads == 0) c.threads = 1;
    fs::create_directories(c.out);
    if (fit->parsed()) return cmd_fit(c, out);
    if (infer->parsed()) return cmd_infer(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (coverage->parsed()) return cmd_coverage(c, out);
    return cmd_curve(c, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    try {
      write_json(fs::path(c.out) / "error.json", json{{"schema_version", kSchemaVersion},
                                                      {"error", std::string(to_string(e.kind()))},
                                                      {"message", e.what()}});
    } catch (const std::exception&) {
    }
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rboot
