#include "invfrac/discrete.hpp"

#include <cmath>
#include <sstream>

#include "invfrac/errors.hpp"

namespace invfrac {

DiscreteField DiscreteField::constant(FieldKind kind, double lambda, std::size_t intervals,
                                      double value) {
  return DiscreteField{kind, lambda, std::vector<double>(intervals + 1, value)};
}

DiscreteField DiscreteField::homogeneous_deformation(double lambda, std::size_t intervals) {
  DiscreteField h{FieldKind::InverseDeformation, lambda, std::vector<double>(intervals + 1)};
  for (std::size_t j = 0; j <= intervals; ++j) {
    h.values[j] = static_cast<double>(j) / static_cast<double>(intervals);
  }
  return h;
}

void validate_field(const DiscreteField& field) {
  if (!(field.lambda > 0.0)) throw DomainError("DiscreteField: lambda must be positive");
  if (field.intervals() < kMinIntervals) {
    std::ostringstream msg;
    msg << "DiscreteField: need at least " << kMinIntervals << " intervals";
    throw DomainError(msg.str());
  }
  for (double v : field.values) {
    if (!std::isfinite(v)) throw DomainError("DiscreteField: non-finite sample");
  }
}

std::vector<double> trapezoid_weights(double lambda, std::size_t intervals) {
  const double dy = lambda / static_cast<double>(intervals);
  std::vector<double> w(intervals + 1, dy);
  w.front() = 0.5 * dy;
  w.back() = 0.5 * dy;
  return w;
}

double trapezoid_integral(const DiscreteField& field) {
  const auto w = trapezoid_weights(field.lambda, field.intervals());
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * field.values[j];
  return sum;
}

std::vector<double> slopes(const DiscreteField& h) {
  const double dy = h.spacing();
  std::vector<double> s(h.intervals());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = (h.values[j + 1] - h.values[j]) / dy;
  return s;
}

DiscreteField integrate_slopes(std::span<const double> slope, double lambda) {
  const std::size_t n = slope.size();
  const double dy = lambda / static_cast<double>(n);
  DiscreteField h{FieldKind::InverseDeformation, lambda, std::vector<double>(n + 1, 0.0)};
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += slope[j];
    h.values[j + 1] = dy * acc;
  }
  return h;
}

double eval_E_eps(const DiscreteField& H, double epsilon, const MaterialModel& model) {
  const double dy = H.spacing();
  const auto& v = H.values;
  const double half_eps2 = 0.5 * epsilon * epsilon;
  double total = 0.0;
  double w_left = model.wstar(v[0]);
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    const double w_right = model.wstar(v[j + 1]);
    const double q = (v[j + 1] - v[j]) / dy;
    total += dy * (half_eps2 * q * q + 0.5 * (w_left + w_right));
    w_left = w_right;
  }
  return total;
}

std::vector<double> grad_E_eps(const DiscreteField& H, double epsilon, const MaterialModel& model) {
  const double dy = H.spacing();
  const auto& v = H.values;
  const std::size_t n = v.size();
  const double eps2 = epsilon * epsilon;
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double weight = (j == 0 || j + 1 == n) ? 0.5 * dy : dy;
    g[j] = weight * model.wstar_prime(v[j]);
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double flux = eps2 * (v[j + 1] - v[j]) / dy;
    g[j] -= flux;
    g[j + 1] += flux;
  }
  return g;
}

namespace {

// Unscaled foundation energy and optional gradient with respect to h.
double foundation_energy(const std::vector<double>& h, double lambda, double epsilon, double k,
                         const MaterialModel& model, std::vector<double>* grad) {
  const std::size_t n = h.size();
  const std::size_t cells = n - 1;
  const double dy = lambda / static_cast<double>(cells);
  const double half_eps2 = 0.5 * epsilon * epsilon;
  if (grad) grad->assign(n, 0.0);

  double total = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    const double s = (h[j + 1] - h[j]) / dy;
    const double ym = (static_cast<double>(j) + 0.5) * dy;
    const double g = ym - 0.5 * lambda * (h[j] + h[j + 1]);
    total += dy * (model.wstar(s) + 0.5 * k * s * g * g);
    if (grad) {
      const double d_slope = model.wstar_prime(s) + 0.5 * k * g * g;  // d(cell)/ds / dy
      const double d_mid = -0.5 * lambda * dy * k * s * g;            // via g
      (*grad)[j] += -d_slope + d_mid;
      (*grad)[j + 1] += d_slope + d_mid;
    }
  }
  const double dy3 = dy * dy * dy;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = h[i + 1] - 2.0 * h[i] + h[i - 1];
    total += half_eps2 * d * d / dy3;
    if (grad) {
      const double c = epsilon * epsilon * d / dy3;
      (*grad)[i - 1] += c;
      (*grad)[i] -= 2.0 * c;
      (*grad)[i + 1] += c;
    }
  }
  return total;
}

}  // namespace

FoundationEnergy eval_V_eps(const DiscreteField& h, double epsilon, double mu,
                            const MaterialModel& model) {
  if (h.values.size() < 3) throw DomainError("eval_V_eps: need at least 3 nodes");
  const double u = foundation_energy(h.values, h.lambda, epsilon, epsilon * mu, model, nullptr);
  return {u, u / epsilon};
}

std::vector<double> grad_V_eps(const DiscreteField& h, double epsilon, double mu,
                               const MaterialModel& model) {
  if (h.values.size() < 3) throw DomainError("grad_V_eps: need at least 3 nodes");
  std::vector<double> g;
  foundation_energy(h.values, h.lambda, epsilon, epsilon * mu, model, &g);
  for (double& x : g) x /= epsilon;
  return g;
}

double eval_V_eps_slopes(std::span<const double> slope, double lambda, double epsilon, double mu,
                         const MaterialModel& model, std::vector<double>* gradient) {
  const DiscreteField h = integrate_slopes(slope, lambda);
  if (!gradient) {
    return foundation_energy(h.values, lambda, epsilon, epsilon * mu, model, nullptr) / epsilon;
  }
  std::vector<double> gh;
  const double u = foundation_energy(h.values, lambda, epsilon, epsilon * mu, model, &gh);
  // h_j depends on slope_i for every i < j with weight dy.
  const std::size_t cells = slope.size();
  const double dy = lambda / static_cast<double>(cells);
  gradient->assign(cells, 0.0);
  double tail = 0.0;
  for (std::size_t i = cells; i-- > 0;) {
    tail += gh[i + 1];
    (*gradient)[i] = dy * tail / epsilon;
  }
  return u / epsilon;
}

namespace {

// W*(b) - W*(a). Simpson on W*' is exact for densities up to degree four and
// keeps its accuracy when b - a is tiny.
double wstar_change(const MaterialModel& model, double a, double b) {
  const double d = b - a;
  if (std::abs(d) > 1e-3) return model.wstar(b) - model.wstar(a);
  return d / 6.0 *
         (model.wstar_prime(a) + 4.0 * model.wstar_prime(0.5 * (a + b)) + model.wstar_prime(b));
}

}  // namespace

double delta_E_eps(std::span<const double> x, std::span<const double> y, double dy, double eps,
                   const MaterialModel& model) {
  const std::size_t n = x.size();
  const double half_eps2 = 0.5 * eps * eps;
  double total = 0.0;
  double dw_left = wstar_change(model, x[0], y[0]);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dw_right = wstar_change(model, x[j + 1], y[j + 1]);
    const double q_old = (x[j + 1] - x[j]) / dy;
    const double q_new = (y[j + 1] - y[j]) / dy;
    const double dq = ((y[j + 1] - x[j + 1]) - (y[j] - x[j])) / dy;
    total += dy * (half_eps2 * dq * (q_new + q_old) + 0.5 * (dw_left + dw_right));
    dw_left = dw_right;
  }
  return total / eps;
}

double delta_V_eps_slopes(std::span<const double> x, std::span<const double> y, double lambda,
                          double eps, double mu, const MaterialModel& model) {
  const std::size_t cells = x.size();
  const double dy = lambda / static_cast<double>(cells);
  const double k = eps * mu;
  const double half_eps2 = 0.5 * eps * eps;
  double total = 0.0;
  double h_old = 0.0;
  double dh = 0.0;  // h_new - h_old at the left node
  for (std::size_t j = 0; j < cells; ++j) {
    const double ds = y[j] - x[j];
    const double h_old_next = h_old + dy * x[j];
    const double dh_next = dh + dy * ds;
    const double ym = (static_cast<double>(j) + 0.5) * dy;
    const double g_old = ym - 0.5 * lambda * (h_old + h_old_next);
    const double dg = -0.5 * lambda * (dh + dh_next);
    const double g_new = g_old + dg;
    total += dy * (wstar_change(model, x[j], y[j]) +
                   0.5 * k * (ds * g_new * g_new + x[j] * dg * (g_new + g_old)));
    if (j > 0) {
      const double d_old = dy * (x[j] - x[j - 1]);
      const double dd = dy * (ds - (y[j - 1] - x[j - 1]));
      total += half_eps2 * dd * (2.0 * d_old + dd) / (dy * dy * dy);
    }
    h_old = h_old_next;
    dh = dh_next;
  }
  return total / eps;
}

std::size_t count_transitions(std::span<const double> values, double level) {
  if (values.empty()) return 0;
  std::size_t count = 0;
  bool above = values[0] >= level;
  for (double v : values.subspan(1)) {
    const bool now = v >= level;
    if (now != above) ++count;
    above = now;
  }
  return count;
}

std::size_t transition_count(const DiscreteField& field) {
  if (field.kind == FieldKind::InverseStretch) return count_transitions(field.values);
  const auto s = slopes(field);
  return count_transitions(s);
}

double modica_mortola_bound(const DiscreteField& field, const InterfacePotential& phi) {
  const std::vector<double> u =
      field.kind == FieldKind::InverseStretch ? field.values : slopes(field);
  double total = 0.0;
  double prev = phi(u[0]);
  for (std::size_t j = 1; j < u.size(); ++j) {
    const double cur = phi(u[j]);
    total += std::abs(cur - prev);
    prev = cur;
  }
  return total;
}

}  // namespace invfrac
