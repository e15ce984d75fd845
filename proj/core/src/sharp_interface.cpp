#include "invfrac/sharp_interface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invfrac/errors.hpp"

namespace invfrac {
namespace {

void require_load(double lambda, const char* where) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << where << ": lambda must be > 1 (got " << lambda << ")";
    throw DomainError(msg.str());
  }
}

// Slope of each piece rounded to {0, 1}; -1 marks a slope outside the set.
std::vector<int> classify_slopes(const PiecewiseLinearField& field, double tol) {
  std::vector<int> kinds(field.knots.size() - 1);
  for (std::size_t i = 0; i + 1 < field.knots.size(); ++i) {
    const double dy = field.knots[i + 1] - field.knots[i];
    const double dv = field.values[i + 1] - field.values[i];
    if (std::abs(dv) <= tol) {
      kinds[i] = 0;
    } else if (std::abs(dv - dy) <= tol) {
      kinds[i] = 1;
    } else {
      kinds[i] = -1;
    }
  }
  return kinds;
}

bool boundary_values_hold(const PiecewiseLinearField& field, double tol) {
  return std::abs(field.values.front()) <= tol &&
         std::abs(field.values.back() - field.length() / field.load) <= tol;
}

}  // namespace

void PiecewiseConstantField::validate() const {
  if (!(lambda > 0.0)) throw DomainError("PiecewiseConstantField: lambda must be positive");
  if (values.size() != breakpoints.size() + 1) {
    throw DomainError("PiecewiseConstantField: need exactly one value per subinterval");
  }
  double prev = 0.0;
  for (double b : breakpoints) {
    if (!(b > prev) || !(b < lambda)) {
      throw DomainError("PiecewiseConstantField: breakpoints must increase strictly inside (0, lambda)");
    }
    prev = b;
  }
}

double PiecewiseConstantField::value_at(double y) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), y);
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

double PiecewiseConstantField::measure_where(double value, double tol) const {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double left = i == 0 ? 0.0 : breakpoints[i - 1];
    const double right = i == breakpoints.size() ? lambda : breakpoints[i];
    if (std::abs(values[i] - value) <= tol) total += right - left;
  }
  return total;
}

std::size_t PiecewiseConstantField::jump_count(double tol) const {
  std::size_t jumps = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (std::abs(values[i + 1] - values[i]) > tol) ++jumps;
  }
  return jumps;
}

void PiecewiseLinearField::validate() const {
  if (!(load > 0.0)) throw DomainError("PiecewiseLinearField: load must be positive");
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw DomainError("PiecewiseLinearField: need >= 2 knots with one value each");
  }
  if (knots.front() != 0.0) throw DomainError("PiecewiseLinearField: first knot must be 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw DomainError("PiecewiseLinearField: knots must increase strictly");
    }
  }
}

double PiecewiseLinearField::value_at(double y) const {
  if (y <= knots.front()) return values.front();
  if (y >= knots.back()) return values.back();
  const auto it = std::upper_bound(knots.begin(), knots.end(), y);
  const auto i = static_cast<std::size_t>(it - knots.begin()) - 1;
  const double t = (y - knots[i]) / (knots[i + 1] - knots[i]);
  return values[i] + t * (values[i + 1] - values[i]);
}

std::vector<double> PiecewiseLinearField::slopes() const {
  std::vector<double> s(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    s[i] = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
  }
  return s;
}

std::size_t PiecewiseLinearField::kink_count(double tol) const {
  const auto kinds = classify_slopes(*this, tol);
  const auto raw = slopes();
  std::size_t kinks = 0;
  for (std::size_t i = 0; i + 1 < kinds.size(); ++i) {
    const bool differ = (kinds[i] >= 0 && kinds[i + 1] >= 0) ? kinds[i] != kinds[i + 1]
                                                             : std::abs(raw[i] - raw[i + 1]) > tol;
    if (differ) ++kinks;
  }
  return kinks;
}

PiecewiseLinearField PiecewiseLinearField::simplified(double tol) const {
  PiecewiseLinearField out;
  out.load = load;
  out.knots.push_back(knots.front());
  out.values.push_back(values.front());
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i] - out.knots.back() <= tol) {
      // zero-length piece: keep the later value only if nothing else moved
      out.values.back() = values[i];
      continue;
    }
    if (out.knots.size() >= 2) {
      const std::size_t m = out.knots.size();
      const double prev_dy = out.knots[m - 1] - out.knots[m - 2];
      const double prev_dv = out.values[m - 1] - out.values[m - 2];
      const double dy = knots[i] - out.knots[m - 1];
      const double dv = values[i] - out.values[m - 1];
      // collinear if the slopes agree: compare cross-multiplied increments
      if (std::abs(prev_dv * dy - dv * prev_dy) <= tol * std::max(dy, prev_dy)) {
        out.knots.back() = knots[i];
        out.values.back() = values[i];
        continue;
      }
    }
    out.knots.push_back(knots[i]);
    out.values.push_back(values[i]);
  }
  return out;
}

PiecewiseLinearField PiecewiseLinearField::concatenated(const PiecewiseLinearField& next) const {
  PiecewiseLinearField out = *this;
  const double dy = length() - next.knots.front();
  const double dv = values.back() - next.values.front();
  for (std::size_t i = 1; i < next.knots.size(); ++i) {
    out.knots.push_back(next.knots[i] + dy);
    out.values.push_back(next.values[i] + dv);
  }
  return out;
}

double eval_I(const PiecewiseConstantField& field, double c_wstar) {
  if (!(c_wstar > 0.0)) throw DomainError("eval_I: c_wstar must be positive");
  field.validate();
  for (double v : field.values) {
    if (std::abs(v) > kFeasibilityTol && std::abs(v - 1.0) > kFeasibilityTol) {
      return kInfeasibleEnergy;
    }
  }
  if (std::abs(field.measure_where(1.0) - 1.0) > kFeasibilityTol) return kInfeasibleEnergy;
  return c_wstar * static_cast<double>(field.jump_count(0.5));
}

double eval_V(const PiecewiseLinearField& field, double c_wstar, double mu) {
  if (!(c_wstar > 0.0)) throw DomainError("eval_V: c_wstar must be positive");
  if (!(mu >= 0.0)) throw DomainError("eval_V: mu must be non-negative");
  field.validate();
  const auto kinds = classify_slopes(field, kFeasibilityTol);
  if (std::find(kinds.begin(), kinds.end(), -1) != kinds.end()) return kInfeasibleEnergy;
  if (!boundary_values_hold(field, kFeasibilityTol)) return kInfeasibleEnergy;

  std::size_t kinks = 0;
  for (std::size_t i = 0; i + 1 < kinds.size(); ++i) {
    if (kinds[i] != kinds[i + 1]) ++kinks;
  }

  const double lambda = field.load;
  double misfit = 0.0;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] != 1) continue;
    const double ga = field.knots[i] - lambda * field.values[i];
    const double gb = field.knots[i + 1] - lambda * field.values[i + 1];
    misfit += (field.knots[i + 1] - field.knots[i]) * (ga * ga + ga * gb + gb * gb) / 3.0;
  }
  return c_wstar * static_cast<double>(kinks) + 0.5 * mu * misfit;
}

PiecewiseLinearField segment_h1(double ell, double lambda) {
  require_load(lambda, "segment_h1");
  if (!(ell > 0.0) || ell > lambda) throw DomainError("segment_h1: need 0 < l <= lambda");
  const double top = ell / lambda;
  return PiecewiseLinearField{lambda, {0.0, top, ell}, {0.0, top, top}};
}

PiecewiseLinearField segment_h2(double ell, double lambda) {
  require_load(lambda, "segment_h2");
  if (!(ell > 0.0) || ell > lambda) throw DomainError("segment_h2: need 0 < l <= lambda");
  const double top = ell / lambda;
  return PiecewiseLinearField{lambda, {0.0, ell - top, ell}, {0.0, 0.0, top}};
}

double segment_energy(double ell, double lambda, double c_wstar, double mu) {
  const double stretch = lambda - 1.0;
  return c_wstar + mu * stretch * stretch * ell * ell * ell / (6.0 * lambda * lambda * lambda);
}

double v_n(long n, double c_wstar, double mu, double lambda) {
  if (n < 1) throw DomainError("v_n: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double stretch = lambda - 1.0;
  return nn * c_wstar + mu * stretch * stretch / (6.0 * nn * nn);
}

double crack_count_estimate(double c_wstar, double mu, double lambda) {
  const double stretch = lambda - 1.0;
  return std::cbrt(mu * stretch * stretch / (3.0 * c_wstar));
}

long crack_count(double c_wstar, double mu, double lambda) {
  require_load(lambda, "crack_count");
  if (!(mu >= 0.0)) throw DomainError("crack_count: mu must be non-negative");
  if (!(c_wstar > 0.0)) throw DomainError("crack_count: c_wstar must be positive");
  const double x = crack_count_estimate(c_wstar, mu, lambda);
  if (x < 1.0) return 1;
  const auto m = static_cast<long>(std::floor(x));
  return v_n(m, c_wstar, mu, lambda) <= v_n(m + 1, c_wstar, mu, lambda) ? m : m + 1;
}

const char* variant_name(Variant v) noexcept { return v == Variant::A ? "A" : "B"; }

std::vector<Crack> find_cracks(const PiecewiseLinearField& field) {
  field.validate();
  const auto kinds = classify_slopes(field, kFeasibilityTol);
  std::vector<Crack> cracks;
  std::size_t i = 0;
  while (i < kinds.size()) {
    if (kinds[i] < 0) throw DomainError("find_cracks: slope outside {0, 1}");
    if (kinds[i] == 1) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < kinds.size() && kinds[j] == 0) ++j;
    Crack c;
    c.y_start = field.knots[i];
    c.y_end = field.knots[j];
    c.opening = c.y_end - c.y_start;
    c.material_position = field.values[i];
    cracks.push_back(c);
    i = j;
  }
  return cracks;
}

SharpMinimizer build_sharp_minimizer(long n, double lambda, Variant variant, double c_wstar,
                                     double mu) {
  require_load(lambda, "build_sharp_minimizer");
  if (n < 1) throw DomainError("build_sharp_minimizer: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double ell = lambda / nn;
  const double rise = 1.0 / nn;  // l / lambda

  PiecewiseLinearField raw;
  raw.load = lambda;
  raw.knots.push_back(0.0);
  raw.values.push_back(0.0);
  for (long j = 0; j < n; ++j) {
    const double y0 = lambda * static_cast<double>(j) / nn;
    const double y1 = j + 1 == n ? lambda : lambda * static_cast<double>(j + 1) / nn;
    const double h0 = static_cast<double>(j) / nn;
    const double h1 = j + 1 == n ? 1.0 : static_cast<double>(j + 1) / nn;
    const bool elastic_first = (j % 2 == 0) == (variant == Variant::A);
    if (elastic_first) {
      raw.knots.push_back(y0 + rise);
      raw.values.push_back(h1);
    } else {
      raw.knots.push_back(y1 - rise);
      raw.values.push_back(h0);
    }
    raw.knots.push_back(y1);
    raw.values.push_back(h1);
  }

  SharpMinimizer result;
  result.n = n;
  result.segment_length = ell;
  result.variant = variant;
  result.energy = v_n(n, c_wstar, mu, lambda);
  result.field = raw.simplified();
  result.cracks = find_cracks(result.field);
  return result;
}

namespace {

struct GridSearch {
  long free_count;
  double lambda;
  std::vector<double> lo;
  std::vector<double> step;
  std::size_t resolution;
  std::vector<double> current;
  std::vector<double> best;
  double best_value;
  std::size_t evaluations = 0;

  // Recursion over the free lengths with running sums; prunes once the used
  // length exceeds lambda since grid values only grow along each axis.
  void scan(long depth, double used, double cubes) {
    if (depth == free_count) {
      const double rest = lambda - used;
      const double value = cubes + rest * rest * rest;
      ++evaluations;
      if (value < best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    const auto d = static_cast<std::size_t>(depth);
    for (std::size_t k = 0; k < resolution; ++k) {
      const double len = lo[d] + step[d] * static_cast<double>(k);
      if (used + len > lambda) break;
      current[d] = len;
      scan(depth + 1, used + len, cubes + len * len * len);
    }
  }
};

}  // namespace

SegmentSearchResult brute_force_segments(long n, double lambda, double c_wstar, double mu,
                                         const SegmentSearchOptions& options) {
  if (n < 2 || n > 6) throw DomainError("brute_force_segments: n must lie in [2, 6]");
  if (!(lambda > 0.0)) throw DomainError("brute_force_segments: lambda must be positive");
  if (options.resolution < 100) throw DomainError("brute_force_segments: resolution must be >= 100");
  if (!(mu >= 0.0)) throw DomainError("brute_force_segments: mu must be non-negative");

  const long free_count = n - 1;
  const auto fc = static_cast<std::size_t>(free_count);
  const double stretch = lambda - 1.0;
  const double scale = mu * stretch * stretch / (6.0 * lambda * lambda * lambda);

  GridSearch search{free_count, lambda, std::vector<double>(fc, 0.0), std::vector<double>(fc),
                    options.resolution, std::vector<double>(fc, 0.0), std::vector<double>(fc, 0.0),
                    0.0};
  std::vector<double> hi(fc, lambda);

  double per_level = 1.0;
  for (long i = 0; i < free_count; ++i) per_level *= static_cast<double>(options.resolution);

  SegmentSearchResult result;
  double width = lambda;
  while (width > options.length_tol) {
    if (result.levels >= options.max_levels) {
      throw BudgetExceeded("brute_force_segments: refinement levels exhausted");
    }
    if (static_cast<double>(search.evaluations) + per_level >
        static_cast<double>(options.max_evaluations)) {
      throw BudgetExceeded("brute_force_segments: evaluation budget exhausted");
    }
    for (std::size_t d = 0; d < fc; ++d) {
      search.step[d] = (hi[d] - search.lo[d]) / static_cast<double>(options.resolution - 1);
    }
    // With mu = 0 every split ties; the energy, not the shape term, decides.
    search.best_value = std::numeric_limits<double>::infinity();
    search.scan(0, 0.0, 0.0);
    ++result.levels;

    width = 0.0;
    for (std::size_t d = 0; d < fc; ++d) {
      const double centre = search.best[d];
      const double reach = 2.0 * search.step[d];
      search.lo[d] = std::max(0.0, centre - reach);
      hi[d] = std::min(lambda, centre + reach);
      width = std::max(width, hi[d] - search.lo[d]);
    }
    if (scale == 0.0) break;
  }

  result.lengths = search.best;
  double used = 0.0;
  for (double len : search.best) used += len;
  result.lengths.push_back(lambda - used);
  result.energy = static_cast<double>(n) * c_wstar + scale * search.best_value;
  result.evaluations = search.evaluations;
  return result;
}

DeformationGraph reconstruct_deformation(const PiecewiseLinearField& field) {
  field.validate();
  const auto kinds = classify_slopes(field, kFeasibilityTol);
  if (std::find(kinds.begin(), kinds.end(), -1) != kinds.end()) {
    throw DomainError("reconstruct_deformation: slope outside {0, 1}");
  }
  if (!boundary_values_hold(field, kFeasibilityTol)) {
    throw DomainError("reconstruct_deformation: boundary values violated");
  }
  DeformationGraph graph;
  std::size_t i = 0;
  while (i < kinds.size()) {
    std::size_t j = i;
    while (j < kinds.size() && kinds[j] == kinds[i]) ++j;
    if (kinds[i] == 1) {
      graph.pieces.push_back({field.values[i], field.values[j], field.knots[i], field.knots[j]});
    } else {
      graph.jumps.push_back({field.values[i], field.knots[i], field.knots[j]});
    }
    i = j;
  }
  return graph;
}

}  // namespace invfrac
