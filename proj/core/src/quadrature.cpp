#include "invfrac/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "invfrac/errors.hpp"

namespace invfrac {
namespace {

// Kronrod abscissae on [0, 1] for the half interval (symmetric), xgk[7] = 0.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for xgk[1], xgk[3], xgk[5], xgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    std::size_t max_intervals) {
  if (!(abs_tol > 0.0)) throw DomainError("integrate_adaptive: abs_tol must be positive");
  if (a == b) return {};

  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  std::size_t evaluations = 15;

  while (error > abs_tol) {
    if (heap.size() >= max_intervals) {
      std::ostringstream msg;
      msg << "integrate_adaptive: " << max_intervals
          << " intervals exhausted with error estimate " << error << " > " << abs_tol;
      throw NonConvergence(msg.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergence("integrate_adaptive: interval collapsed below machine resolution");
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to drop the rounding drift of the running totals.
  QuadratureResult result;
  result.intervals = heap.size();
  result.evaluations = evaluations;
  std::vector<Segment> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  double v = 0.0;
  double e = 0.0;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    v += it->value;
    e += it->error;
  }
  result.value = v;
  result.error_estimate = e;
  return result;
}

}  // namespace invfrac
