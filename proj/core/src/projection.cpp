#include "invfrac/projection.hpp"

#include <algorithm>
#include <cmath>

#include "invfrac/errors.hpp"

namespace invfrac {

std::vector<double> project_weighted_simplex(std::span<const double> raw,
                                             std::span<const double> weights, double mass) {
  if (raw.size() != weights.size() || raw.empty()) {
    throw Infeasible("project_weighted_simplex: size mismatch");
  }
  if (!(mass > 0.0)) throw Infeasible("project_weighted_simplex: mass must be positive");
  for (double w : weights) {
    if (!(w > 0.0)) throw Infeasible("project_weighted_simplex: weights must be positive");
  }
  const std::size_t n = raw.size();

  // Entry j is active (positive) exactly when theta < raw_j / w_j. Sorting the
  // ratios in decreasing order, the active set for theta in
  // [ratio_(k+1), ratio_(k)) is the first k+1 entries, and the clipped mass is
  // S_k(theta) = sum_{i<=k} w_i raw_i - theta sum_{i<=k} w_i^2, nonincreasing in
  // theta. Bisection over k finds the bracket holding S = mass.
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::vector<double> ratio(n);
  for (std::size_t j = 0; j < n; ++j) ratio[j] = raw[j] / weights[j];
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ratio[a] > ratio[b] || (ratio[a] == ratio[b] && a < b);
  });
  std::vector<double> cum_wr(n);
  std::vector<double> cum_ww(n);
  double wr = 0.0;
  double ww = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    wr += weights[j] * raw[j];
    ww += weights[j] * weights[j];
    cum_wr[k] = wr;
    cum_ww[k] = ww;
  }
  // Mass when theta sits at the k-th largest ratio: entries 0..k-1 active.
  auto mass_at_breakpoint = [&](std::size_t k) {
    if (k == 0) return 0.0;
    return cum_wr[k - 1] - ratio[order[k]] * cum_ww[k - 1];
  };
  // Smallest k with mass_at_breakpoint(k) >= mass, or n if none.
  std::size_t lo = 0;
  std::size_t hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (mass_at_breakpoint(mid) >= mass) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  // Active set is the first `lo` entries (all of them when lo == n).
  const std::size_t active = std::max<std::size_t>(lo, 1);
  const double theta = (cum_wr[active - 1] - mass) / cum_ww[active - 1];

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = std::max(0.0, raw[j] - theta * weights[j]);
  return x;
}

DiscreteField project_H(std::span<const double> raw, double lambda) {
  if (!(lambda > 0.0)) throw Infeasible("project_H: lambda must be positive");
  if (raw.size() < 2) throw Infeasible("project_H: need at least 2 nodes");
  const auto w = trapezoid_weights(lambda, raw.size() - 1);
  return DiscreteField{FieldKind::InverseStretch, lambda, project_weighted_simplex(raw, w, 1.0)};
}

std::vector<double> isotonic_regression(std::span<const double> values,
                                        std::span<const double> weights) {
  struct Block {
    double weight;
    double mean;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    Block b{weights[i], values[i], 1};
    while (!blocks.empty() && blocks.back().mean >= b.mean) {
      const Block& top = blocks.back();
      const double w = top.weight + b.weight;
      b.mean = (top.weight * top.mean + b.weight * b.mean) / w;
      b.weight = w;
      b.count += top.count;
      blocks.pop_back();
    }
    blocks.push_back(b);
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

DiscreteField project_h(std::span<const double> raw, double lambda) {
  if (raw.size() < 2) throw Infeasible("project_h: need at least 2 nodes");
  DiscreteField h{FieldKind::InverseDeformation, lambda, std::vector<double>(raw.size())};
  const auto interior = raw.subspan(1, raw.size() - 2);
  const std::vector<double> ones(interior.size(), 1.0);
  const auto fitted = isotonic_regression(interior, ones);
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    h.values[i + 1] = std::clamp(fitted[i], 0.0, 1.0);
  }
  h.values.front() = 0.0;
  h.values.back() = 1.0;
  return h;
}

}  // namespace invfrac
