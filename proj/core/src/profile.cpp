#include "invfrac/profile.hpp"

#include <algorithm>
#include <cmath>

#include "invfrac/errors.hpp"

namespace invfrac {

TransitionProfile::TransitionProfile(const MaterialModel& model, double delta, double step) {
  if (!(delta > 0.0 && delta < 0.5) || !(step > 0.0)) {
    throw DomainError("TransitionProfile: need 0 < delta < 1/2 and step > 0");
  }
  auto rate = [&model](double q) { return std::sqrt(std::max(0.0, 2.0 * model.wstar(q))); };
  const double target = 1.0 - delta;
  const std::size_t max_steps = static_cast<std::size_t>(1e3 / step);

  double s = 0.0;
  double q = delta;
  s_.push_back(s);
  q_.push_back(q);
  while (q < target) {
    if (s_.size() > max_steps) {
      throw NonConvergence("TransitionProfile: profile does not reach the upper well");
    }
    const double k1 = rate(q);
    const double k2 = rate(q + 0.5 * step * k1);
    const double k3 = rate(q + 0.5 * step * k2);
    const double k4 = rate(q + step * k3);
    const double next = q + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (!(next > q)) throw NonConvergence("TransitionProfile: profile stalled");
    q = std::min(next, 1.0);
    s += step;
    s_.push_back(s);
    q_.push_back(q);
  }

  // Equal-area centring: integral of (q - step function at c) vanishes.
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < s_.size(); ++k) {
    area += 0.5 * (q_[k] + q_[k + 1]) * (s_[k + 1] - s_[k]);
  }
  const double centre = s_.back() - area;
  for (double& x : s_) x -= centre;
}

double TransitionProfile::operator()(double s) const {
  if (s <= s_.front()) return 0.0;
  if (s >= s_.back()) return 1.0;
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const auto k = static_cast<std::size_t>(it - s_.begin()) - 1;
  const double t = (s - s_[k]) / (s_[k + 1] - s_[k]);
  return q_[k] + t * (q_[k + 1] - q_[k]);
}

namespace {

struct Jump {
  double position;
  double before;
  double after;
};

std::vector<Jump> jumps_of(const PiecewiseConstantField& field) {
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i < field.breakpoints.size(); ++i) {
    if (std::abs(field.values[i + 1] - field.values[i]) > kFeasibilityTol) {
      jumps.push_back({field.breakpoints[i], field.values[i], field.values[i + 1]});
    }
  }
  return jumps;
}

bool overlapping(const std::vector<Jump>& jumps, double epsilon) {
  for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
    if (jumps[i + 1].position - jumps[i].position < 10.0 * epsilon) return true;
  }
  return false;
}

double smoothed_value(const PiecewiseConstantField& field, const std::vector<Jump>& jumps,
                      double y, double epsilon, const TransitionProfile& profile) {
  if (jumps.empty()) return field.value_at(y);
  // Jumps are sorted; find the nearest one.
  auto it = std::lower_bound(jumps.begin(), jumps.end(), y,
                             [](const Jump& j, double v) { return j.position < v; });
  const Jump* best = nullptr;
  if (it != jumps.end()) best = &*it;
  if (it != jumps.begin()) {
    const Jump* left = &*(it - 1);
    if (!best || y - left->position <= best->position - y) best = left;
  }
  const double s = (y - best->position) / epsilon;
  const bool rising = best->after > best->before;
  const double p = rising ? profile(s) : profile(-s);
  const double lo = std::min(best->before, best->after);
  const double hi = std::max(best->before, best->after);
  return lo + (hi - lo) * p;
}

}  // namespace

MollifiedField mollify_sharp_candidate(const PiecewiseConstantField& field, double epsilon,
                                       const TransitionProfile& profile, std::size_t intervals) {
  if (!(epsilon > 0.0)) throw DomainError("mollify_sharp_candidate: epsilon must be positive");
  field.validate();
  const auto jumps = jumps_of(field);
  MollifiedField out;
  out.overlap_warning = overlapping(jumps, epsilon);
  out.field = DiscreteField{FieldKind::InverseStretch, field.lambda,
                            std::vector<double>(intervals + 1)};
  for (std::size_t j = 0; j <= intervals; ++j) {
    out.field.values[j] = smoothed_value(field, jumps, out.field.node(j), epsilon, profile);
  }
  if (!jumps.empty()) {
    const double mass = trapezoid_integral(out.field);
    if (mass > 0.0) {
      for (double& v : out.field.values) v /= mass;
    }
  }
  return out;
}

PiecewiseConstantField slope_field(const PiecewiseLinearField& field) {
  field.validate();
  PiecewiseConstantField pc;
  pc.lambda = field.length();
  const auto s = field.slopes();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = std::abs(s[i]) <= 0.5 ? 0.0 : 1.0;
    if (std::abs(s[i] - v) > 1e-9) {
      throw DomainError("slope_field: slope outside {0, 1}");
    }
    if (i == 0) {
      pc.values.push_back(v);
    } else if (v != pc.values.back()) {
      pc.breakpoints.push_back(field.knots[i]);
      pc.values.push_back(v);
    }
  }
  return pc;
}

MollifiedField mollify_sharp_candidate(const PiecewiseLinearField& field, double epsilon,
                                       const TransitionProfile& profile, std::size_t intervals) {
  if (!(epsilon > 0.0)) throw DomainError("mollify_sharp_candidate: epsilon must be positive");
  const PiecewiseConstantField pc = slope_field(field);
  const auto jumps = jumps_of(pc);
  MollifiedField out;
  out.overlap_warning = overlapping(jumps, epsilon);
  const double lambda = field.length();
  if (jumps.empty()) {
    out.field = DiscreteField{FieldKind::InverseDeformation, lambda,
                              std::vector<double>(intervals + 1)};
    for (std::size_t j = 0; j <= intervals; ++j) {
      out.field.values[j] = field.value_at(out.field.node(j));
    }
    return out;
  }
  const double dy = lambda / static_cast<double>(intervals);
  std::vector<double> slope(intervals);
  for (std::size_t j = 0; j < intervals; ++j) {
    slope[j] = smoothed_value(pc, jumps, (static_cast<double>(j) + 0.5) * dy, epsilon, profile);
  }
  out.field = integrate_slopes(slope, lambda);
  const double end = out.field.values.back();
  const double target = field.values.back();
  if (end > 0.0) {
    for (double& v : out.field.values) v *= target / end;
  }
  return out;
}

}  // namespace invfrac
