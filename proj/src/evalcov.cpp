#include "rboot/evalcov.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rboot/error.hpp"
#include "rboot/intervals.hpp"
#include "rboot/signal.hpp"

namespace rboot {

std::vector<Index> pairs_resample(Index n, Rng& rng) {
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index& i : idx) i = pick(rng);
  return idx;
}

BootstrapSummary baseline_bootstraps(const Dataset& data, const FitResult& fit, int B, BaselineMode mode,
                                     std::uint64_t seed, unsigned threads) {
  if (B < 2) throw Error(ErrorKind::invalid_input, "baseline bootstrap needs B >= 2");
  if (!fit.converged()) throw Error(ErrorKind::not_converged, "baseline bootstrap needs a converged fit");
  const Index n = data.n();
  const Index p = data.p();
  const VectorXd eta = data.X * fit.beta_hat;
  MatrixXd draws(B, p);
  std::vector<char> ok(static_cast<std::size_t>(B), 0);

  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t b) {
    FitOptions fo;
    fo.start = fit.beta_hat;
    FitResult refit;
    if (mode == BaselineMode::pairs) {
      Rng rng = make_rng(seed, Stream::pairs, b);
      const std::vector<Index> rows = pairs_resample(n, rng);
      MatrixXd Xb(n, p);
      VectorXd yb(n);
      for (Index i = 0; i < n; ++i) {
        Xb.row(i) = data.X.row(rows[static_cast<std::size_t>(i)]);
        yb[i] = data.y[rows[static_cast<std::size_t>(i)]];
      }
      refit = fit_mle(Xb, yb, data.family, fo);
    } else {
      Rng rng = make_rng(seed, Stream::parametric, b);
      const VectorXd yb = simulate_response(eta, data.family, rng);
      refit = fit_mle(data.X, yb, data.family, fo);
    }
    if (!refit.converged()) return;
    draws.row(static_cast<Index>(b)) = refit.beta_hat.transpose();
    ok[b] = 1;
  });

  MatrixXd kept(B, p);
  Index row = 0;
  int failed = 0;
  for (int b = 0; b < B; ++b) {
    if (ok[static_cast<std::size_t>(b)]) kept.row(row++) = draws.row(b);
    else ++failed;
  }
  if (2 * failed > B)
    throw Error(ErrorKind::too_many_failures, std::to_string(failed) + " of " + std::to_string(B) +
                                                  " baseline bootstrap refits failed");
  kept.conservativeResize(row, p);
  return summarize_bootstrap(std::move(kept), fit.beta_hat, data.has_intercept, failed);
}

std::string_view to_string(CoverageMethod method) {
  switch (method) {
    case CoverageMethod::classical: return "classical";
    case CoverageMethod::pairs: return "pairs";
    case CoverageMethod::parametric: return "parametric";
    case CoverageMethod::boot_g: return "boot-g";
    case CoverageMethod::boot_t: return "boot-t";
  }
  return "unknown";
}

std::string_view to_string(GammaMode mode) { return mode == GammaMode::known ? "known" : "estimated"; }

CoverageMethod parse_coverage_method(std::string_view name) {
  if (name == "classical") return CoverageMethod::classical;
  if (name == "pairs") return CoverageMethod::pairs;
  if (name == "parametric") return CoverageMethod::parametric;
  if (name == "boot-g" || name == "boot_g") return CoverageMethod::boot_g;
  if (name == "boot-t" || name == "boot_t") return CoverageMethod::boot_t;
  throw Error(ErrorKind::invalid_input, "unknown method '" + std::string(name) + "'");
}

double CoverageCell::q_se(Index j) const {
  const double n = static_cast<double>(qbar_i.size());
  return n > 0 ? std::sqrt(q_j[j] * (1.0 - q_j[j]) / n) : NAN;
}

namespace {

bool is_resized(CoverageMethod m) { return m == CoverageMethod::boot_g || m == CoverageMethod::boot_t; }

struct ModeOutcome {
  VectorXd sigma_hat;
  double alpha_hat = 1.0;
  double gamma = 0.0;
  int boot_failed = 0;
};

struct RepOutcome {
  bool ok = false;
  VectorXd beta_hat;
  VectorXd classical_se;
  std::vector<ModeOutcome> modes;
  std::vector<std::vector<char>> covered;  // per cell, per coordinate
  int boot_failed = 0;
};

std::vector<CoverageCell> make_cells(const CoverageOptions& opts) {
  std::vector<CoverageCell> cells;
  auto add = [&](CoverageMethod m, std::optional<GammaMode> g) {
    for (double level : opts.levels) {
      CoverageCell c;
      c.method = m;
      c.gamma_mode = g;
      c.level = level;
      c.column = std::string(to_string(m)) + (g ? "/" + std::string(to_string(*g)) : "");
      cells.push_back(std::move(c));
    }
  };
  for (CoverageMethod m : opts.methods)
    if (!is_resized(m)) add(m, std::nullopt);
  for (GammaMode g : opts.gamma_modes)
    for (CoverageMethod m : opts.methods)
      if (is_resized(m)) add(m, g);
  return cells;
}

}  // namespace

CoverageReport run_coverage(const DesignSpec& design, const CoverageOptions& opts) {
  validate(design);
  if (opts.N < 1) throw Error(ErrorKind::invalid_input, "coverage needs N >= 1");
  for (double level : opts.levels)
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::invalid_input, "levels must lie in (0, 1)");
  const bool wants_boot_t =
      std::find(opts.methods.begin(), opts.methods.end(), CoverageMethod::boot_t) != opts.methods.end();
  for (double level : opts.levels)
    if (wants_boot_t && opts.B * (1.0 - level) < 40.0 - 1e-9)
      throw Error(ErrorKind::insufficient_samples, "boot-t at this level needs B >= 40 / q");

  CoverageReport report;
  report.design = design;
  report.N = opts.N;
  report.beta = gen_coefficients(design, design.seed);
  report.gamma_true = population_gamma(design, report.beta);
  report.cells = make_cells(opts);
  const Index p = design.p;

  std::optional<MatrixXd> fixed_x;
  if (opts.fix_x) fixed_x = gen_covariates(design, derive_seed(opts.seed, Stream::design_covariates, 0));

  std::vector<RepOutcome> reps(static_cast<std::size_t>(opts.N));
  parallel_for(static_cast<std::size_t>(opts.N), opts.threads, [&](std::size_t r) {
    RepOutcome& out = reps[r];
    const std::uint64_t rep_seed = derive_seed(opts.seed, Stream::repetition, r);
    try {
      Dataset data;
      if (fixed_x) {
        data.X = *fixed_x;
        Rng rng = make_rng(rep_seed, Stream::design_response, 0);
        data.y = gen_response(data.X, report.beta, design.family, rng);
        data.family = design.family;
      } else {
        data = draw_dataset(design, report.beta, rep_seed);
      }
      const FitResult fit = fit_mle(data);
      if (!fit.converged()) return;
      out.beta_hat = fit.beta_hat;
      out.classical_se = classical_standard_errors(fit);

      std::vector<BootstrapSummary> summaries;
      std::vector<VectorXd> stars;
      for (GammaMode g : opts.gamma_modes) {
        ModeOutcome mo;
        if (g == GammaMode::known) {
          mo.gamma = report.gamma_true;
        } else {
          GammaOptions go;
          go.grid_size = opts.grid_size;
          go.reps = opts.reps;
          go.seed = derive_seed(rep_seed, Stream::gamma_curve, 0);
          go.threads = 1;
          mo.gamma = *estimate_gamma(data, fit, go).gamma_hat;
        }
        const ResizedCoefficients resized = resize(fit, mo.gamma, data.X, data.has_intercept);
        BootOptions bo;
        bo.B = opts.B;
        bo.seed = derive_seed(rep_seed, Stream::bootstrap, static_cast<std::uint64_t>(g));
        bo.threads = 1;
        BootstrapSummary s = run_bootstrap(data, resized, bo);
        mo.sigma_hat = s.sigma_hat;
        mo.alpha_hat = s.alpha_hat;
        mo.boot_failed = s.n_failed;
        out.boot_failed += s.n_failed;
        out.modes.push_back(std::move(mo));
        summaries.push_back(std::move(s));
        stars.push_back(resized.beta_star);
      }

      std::optional<BootstrapSummary> pairs, parametric;
      for (CoverageMethod m : opts.methods) {
        if (m == CoverageMethod::pairs && !pairs)
          pairs = baseline_bootstraps(data, fit, opts.B, BaselineMode::pairs,
                                      derive_seed(rep_seed, Stream::pairs, 0), 1);
        if (m == CoverageMethod::parametric && !parametric)
          parametric = baseline_bootstraps(data, fit, opts.B, BaselineMode::parametric_at_mle,
                                           derive_seed(rep_seed, Stream::parametric, 0), 1);
      }

      for (const CoverageCell& cell : report.cells) {
        IntervalSet ci;
        std::size_t mode_idx = 0;
        if (cell.gamma_mode)
          mode_idx = static_cast<std::size_t>(
              std::find(opts.gamma_modes.begin(), opts.gamma_modes.end(), *cell.gamma_mode) - opts.gamma_modes.begin());
        switch (cell.method) {
          case CoverageMethod::classical: ci = classical_wald_ci(fit, cell.level); break;
          case CoverageMethod::pairs: ci = boot_g_ci(fit, *pairs, cell.level); break;
          case CoverageMethod::parametric: ci = boot_g_ci(fit, *parametric, cell.level); break;
          case CoverageMethod::boot_g: ci = boot_g_ci(fit, summaries[mode_idx], cell.level); break;
          case CoverageMethod::boot_t: ci = boot_t_ci(fit.beta_hat, summaries[mode_idx], stars[mode_idx], cell.level); break;
        }
        std::vector<char> hit(static_cast<std::size_t>(p));
        for (Index j = 0; j < p; ++j) hit[static_cast<std::size_t>(j)] = ci.covers(j, report.beta[j]) ? 1 : 0;
        out.covered.push_back(std::move(hit));
      }
      out.ok = true;
    } catch (const Error&) {
      out = RepOutcome{};
    }
  });

  // Ordered reduction over repetitions.
  std::vector<const RepOutcome*> good;
  for (const RepOutcome& r : reps) {
    if (r.ok) good.push_back(&r);
    report.bootstrap_failures += r.boot_failed;
  }
  report.n_ok = static_cast<int>(good.size());
  report.n_failed = opts.N - report.n_ok;
  if (report.n_ok == 0 || 2 * report.n_failed > opts.N)
    throw Error(ErrorKind::too_many_failures, std::to_string(report.n_failed) + " of " + std::to_string(opts.N) +
                                                  " repetitions failed; the design is likely past the "
                                                  "separability boundary");
  const double n_ok = static_cast<double>(report.n_ok);

  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    CoverageCell& cell = report.cells[c];
    cell.q_j = VectorXd::Zero(p);
    cell.qbar_i.resize(report.n_ok);
    for (std::size_t r = 0; r < good.size(); ++r) {
      const std::vector<char>& hit = good[r]->covered[c];
      double covered = 0.0;
      for (Index j = 0; j < p; ++j) {
        cell.q_j[j] += hit[static_cast<std::size_t>(j)];
        covered += hit[static_cast<std::size_t>(j)];
      }
      cell.qbar_i[static_cast<Index>(r)] = covered / static_cast<double>(p);
    }
    cell.q_j /= n_ok;
    cell.qbar = cell.qbar_i.mean();
    cell.qbar_se = report.n_ok > 1 ? std::sqrt((cell.qbar_i.array() - cell.qbar).square().sum() / (n_ok - 1.0) / n_ok)
                                   : 0.0;
  }

  BiasSdTable& t = report.bias_sd;
  t.gamma_modes = opts.gamma_modes;
  t.resized_alpha.assign(opts.gamma_modes.size(), 0.0);
  t.mean_gamma.assign(opts.gamma_modes.size(), 0.0);
  VectorXd sum = VectorXd::Zero(p), se_sum = VectorXd::Zero(p);
  std::vector<VectorXd> sigma_sum(opts.gamma_modes.size(), VectorXd::Zero(p));
  for (const RepOutcome* r : good) {
    sum += r->beta_hat;
    se_sum += r->classical_se;
    for (std::size_t g = 0; g < opts.gamma_modes.size(); ++g) {
      sigma_sum[g] += r->modes[g].sigma_hat;
      t.resized_alpha[g] += r->modes[g].alpha_hat / n_ok;
      t.mean_gamma[g] += r->modes[g].gamma / n_ok;
    }
  }
  const VectorXd mean = sum / n_ok;
  VectorXd ss = VectorXd::Zero(p);
  for (const RepOutcome* r : good) ss += (r->beta_hat - mean).array().square().matrix();
  double num = 0.0, den = 0.0;
  for (Index j = 0; j < p; ++j) {
    BiasSdRow row;
    row.coordinate = j;
    row.beta = report.beta[j];
    row.mean_mle = mean[j];
    if (row.beta != 0.0) {
      row.empirical_bias = mean[j] / row.beta;
      num += row.beta * mean[j];
      den += row.beta * row.beta;
    }
    row.empirical_sd = report.n_ok > 1 ? std::sqrt(ss[j] / (n_ok - 1.0)) : 0.0;
    row.classical_sd = se_sum[j] / n_ok;
    for (const VectorXd& s : sigma_sum) row.resized_sd.push_back(s[j] / n_ok);
    t.rows.push_back(std::move(row));
  }
  if (den > 0.0) t.empirical_slope = num / den;
  return report;
}

BiasSdTable run_bias_sd_study(const DesignSpec& design, CoverageOptions opts) {
  if (opts.N < 100) throw Error(ErrorKind::invalid_input, "bias/sd study needs N >= 100");
  opts.methods.clear();
  return run_coverage(design, opts).bias_sd;
}

namespace {

std::string fmt(const char* f, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

std::string format_coverage_table(const CoverageReport& report) {
  std::ostringstream os;
  os << "design " << report.design.name << "  n=" << report.design.n << " p=" << report.design.p
     << "  gamma=" << report.gamma_true << "  repetitions " << report.n_ok << "/" << report.N
     << "\n";
  std::vector<Index> nonnull, null;
  for (Index j = 0; j < report.beta.size(); ++j) (report.beta[j] != 0.0 ? nonnull : null).push_back(j);

  auto section = [&](const char* title, auto value) {
    os << "\n" << title << "\n";
    std::vector<std::string> columns;
    for (const CoverageCell& c : report.cells)
      if (std::find(columns.begin(), columns.end(), c.column) == columns.end()) columns.push_back(c.column);
    char head[64];
    std::snprintf(head, sizeof head, "%-8s", "level");
    os << head;
    for (const std::string& col : columns) {
      std::snprintf(head, sizeof head, "%22s", col.c_str());
      os << head;
    }
    os << "\n";
    std::vector<double> levels;
    for (const CoverageCell& c : report.cells)
      if (std::find(levels.begin(), levels.end(), c.level) == levels.end()) levels.push_back(c.level);
    for (double level : levels) {
      std::snprintf(head, sizeof head, "%-8.0f", 100.0 * level);
      os << head;
      for (const std::string& col : columns)
        for (const CoverageCell& c : report.cells)
          if (c.column == col && c.level == level) {
            const auto [q, se] = value(c);
            std::snprintf(head, sizeof head, "%22s", fmt("%.1f (%.2f)", 100.0 * q, 100.0 * se).c_str());
            os << head;
          }
      os << "\n";
    }
  };
  auto mean_over = [](const CoverageCell& c, const std::vector<Index>& idx) {
    double q = 0.0, se = 0.0;
    for (Index j : idx) {
      q += c.q_j[j];
      se += c.q_se(j);
    }
    const double k = static_cast<double>(idx.size());
    return std::pair{q / k, se / k};
  };
  if (!nonnull.empty())
    section("single variable, mean q_j over non-null coordinates",
            [&](const CoverageCell& c) { return mean_over(c, nonnull); });
  if (!null.empty())
    section("single variable, mean q_j over null coordinates", [&](const CoverageCell& c) { return mean_over(c, null); });
  section("single experiment, qbar", [](const CoverageCell& c) { return std::pair{c.qbar, c.qbar_se}; });
  return os.str();
}

std::string format_bias_sd_table(const BiasSdTable& table) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%6s %9s %9s %9s %9s %9s", "coord", "beta", "bias", "emp.sd", "class.sd", "");
  os << buf;
  for (GammaMode g : table.gamma_modes) {
    std::snprintf(buf, sizeof buf, " %14s", ("resized/" + std::string(to_string(g))).c_str());
    os << buf;
  }
  os << "\n";
  for (const BiasSdRow& r : table.rows) {
    if (std::isnan(r.empirical_bias))
      std::snprintf(buf, sizeof buf, "%6ld %9.3f %9s %9.3f %9.3f %9s", static_cast<long>(r.coordinate), r.beta, "-",
                    r.empirical_sd, r.classical_sd, "");
    else
      std::snprintf(buf, sizeof buf, "%6ld %9.3f %9.3f %9.3f %9.3f %9s", static_cast<long>(r.coordinate), r.beta,
                    r.empirical_bias, r.empirical_sd, r.classical_sd, "");
    os << buf;
    for (double s : r.resized_sd) {
      std::snprintf(buf, sizeof buf, " %14.3f", s);
      os << buf;
    }
    os << "\n";
  }
  std::snprintf(buf, sizeof buf, "empirical bias slope %.4f\n", table.empirical_slope);
  os << buf;
  for (std::size_t g = 0; g < table.gamma_modes.size(); ++g) {
    std::snprintf(buf, sizeof buf, "resized alpha (%s gamma, mean gamma %.4f) %.4f\n",
                  std::string(to_string(table.gamma_modes[g])).c_str(), table.mean_gamma[g], table.resized_alpha[g]);
    os << buf;
  }
  return os.str();
}

}  // namespace rboot
