#include "rboot/boot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rboot/error.hpp"
#include "rboot/random.hpp"
#include "rboot/signal.hpp"
#include "rboot/simgen.hpp"

namespace rboot {

ResizedCoefficients resize(const Eigen::Ref<const VectorXd>& beta_hat, double gamma_hat,
                           const Eigen::Ref<const MatrixXd>& X, bool has_intercept) {
  if (!(gamma_hat >= 0.0)) throw Error(ErrorKind::invalid_input, "resize: gamma_hat must be non-negative");
  const double spread = sd_linear_predictor(X, scale_slopes(beta_hat, 1.0, has_intercept));
  ResizedCoefficients out;
  out.gamma_target = gamma_hat;
  if (spread <= 0.0) {
    if (gamma_hat > 0.0) throw Error(ErrorKind::zero_mle, "resize: MLE has zero linear-predictor spread");
    out.scale_s = 0.0;
  } else {
    out.scale_s = std::clamp(gamma_hat / spread, 0.0, 1.0);
  }
  out.beta_star = scale_slopes(beta_hat, out.scale_s, has_intercept);
  return out;
}

BootstrapSummary summarize_bootstrap(MatrixXd boot_mles, const Eigen::Ref<const VectorXd>& reference,
                                     bool has_intercept, int n_failed) {
  const Index B = boot_mles.rows();
  const Index p = boot_mles.cols();
  if (B < 2) throw Error(ErrorKind::insufficient_samples, "bootstrap summary needs at least 2 replicates");
  BootstrapSummary s;
  s.has_intercept = has_intercept;
  s.n_failed = n_failed;
  s.beta_bar = boot_mles.colwise().mean().transpose();
  s.sigma_hat.resize(p);
  for (Index j = 0; j < p; ++j)
    s.sigma_hat[j] = std::sqrt((boot_mles.col(j).array() - s.beta_bar[j]).square().sum() / static_cast<double>(B - 1));
  if (!(s.sigma_hat.array() > 0.0).all())
    throw Error(ErrorKind::insufficient_samples, "bootstrap coordinate with zero spread");

  double num = 0.0, den = 0.0;
  for (Index j = has_intercept ? 1 : 0; j < p; ++j) {
    const double w = 1.0 / (s.sigma_hat[j] * s.sigma_hat[j]);
    num += w * s.beta_bar[j] * reference[j];
    den += w * reference[j] * reference[j];
  }
  s.alpha_hat = den > 0.0 ? num / den : 1.0;
  s.boot_mles = std::move(boot_mles);
  return s;
}

BootstrapSummary run_bootstrap(const Dataset& data, const ResizedCoefficients& resized, const BootOptions& opts) {
  if (opts.B < 2) throw Error(ErrorKind::invalid_input, "run_bootstrap needs B >= 2");
  const Index p = data.p();
  const VectorXd eta = data.X * resized.beta_star;
  MatrixXd draws(opts.B, p);
  std::vector<char> ok(static_cast<std::size_t>(opts.B), 0);

  parallel_for(static_cast<std::size_t>(opts.B), opts.threads, [&](std::size_t b) {
    Rng rng = make_rng(opts.seed, Stream::bootstrap, b);
    const VectorXd y = simulate_response(eta, data.family, rng);
    FitOptions fo = opts.fit;
    fo.start = resized.beta_star;
    const FitResult fit = fit_mle(data.X, y, data.family, fo);
    if (!fit.converged()) return;
    draws.row(static_cast<Index>(b)) = fit.beta_hat.transpose();
    ok[b] = 1;
  });

  int failed = 0;
  MatrixXd kept(opts.B, p);
  Index row = 0;
  for (int b = 0; b < opts.B; ++b) {
    if (!ok[static_cast<std::size_t>(b)]) {
      ++failed;
      continue;
    }
    kept.row(row++) = draws.row(b);
  }
  if (failed > opts.max_failure_fraction * opts.B) {
    std::ostringstream msg;
    msg << failed << " of " << opts.B << " bootstrap refits failed (scale_s = " << resized.scale_s
        << ", gamma = " << resized.gamma_target << "); the design is likely near the separability boundary";
    throw Error(ErrorKind::too_many_failures, msg.str());
  }
  kept.conservativeResize(row, p);
  return summarize_bootstrap(std::move(kept), resized.beta_star, data.has_intercept, failed);
}

}  // namespace rboot
