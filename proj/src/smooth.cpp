#include "rboot/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rboot/error.hpp"

namespace rboot {

using Eigen::Index;
using Eigen::VectorXd;

namespace {

double tricube(double u) {
  if (u >= 1.0) return 0.0;
  const double c = 1.0 - u * u * u;
  return c * c * c;
}

}  // namespace

VectorXd loess_local_linear(const Eigen::Ref<const VectorXd>& x, const Eigen::Ref<const VectorXd>& y,
                            const Eigen::Ref<const VectorXd>& at, double span) {
  const Index m = x.size();
  if (m == 0 || y.size() != m) throw Error(ErrorKind::invalid_input, "loess: empty or mismatched samples");
  if (!(span > 0.0 && span <= 1.0)) throw Error(ErrorKind::invalid_input, "loess: span must lie in (0, 1]");
  const Index q = std::clamp<Index>(static_cast<Index>(std::ceil(span * static_cast<double>(m))), 1, m);

  VectorXd out(at.size());
  std::vector<double> dist(static_cast<std::size_t>(m));
  for (Index k = 0; k < at.size(); ++k) {
    const double x0 = at[k];
    for (Index i = 0; i < m; ++i) dist[static_cast<std::size_t>(i)] = std::abs(x[i] - x0);
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + (q - 1), sorted.end());
    const double h = sorted[static_cast<std::size_t>(q - 1)] * (1.0 + 1e-10);

    // h == 0: the neighbourhood collapsed onto tied samples at x0; average them.
    VectorXd w(m);
    for (Index i = 0; i < m; ++i) {
      const double d = dist[static_cast<std::size_t>(i)];
      w[i] = h > 0.0 ? tricube(d / h) : (d == 0.0 ? 1.0 : 0.0);
    }
    const double sw = w.sum();
    const double xbar = w.dot(x) / sw;
    const double ybar = w.dot(y) / sw;
    const VectorXd dx = x.array() - xbar;
    const double sxx = w.dot(dx.cwiseProduct(dx));
    const double sxy = w.dot(dx.cwiseProduct(y));
    const double range = x.maxCoeff() - x.minCoeff();
    const bool flat = !(sxx > 1e-12 * sw * range * range);
    out[k] = flat ? ybar : ybar + (sxy / sxx) * (x0 - xbar);
  }
  return out;
}

VectorXd isotonic_increasing(const Eigen::Ref<const VectorXd>& values, const Eigen::Ref<const VectorXd>& weights) {
  const Index m = values.size();
  struct Block {
    double mean;
    double weight;
    Index count;
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
      prev.weight = w;
      prev.count += top.count;
    }
  }
  VectorXd out(m);
  Index pos = 0;
  for (const Block& b : blocks) {
    out.segment(pos, b.count).setConstant(b.mean);
    pos += b.count;
  }
  return out;
}

}  // namespace rboot
