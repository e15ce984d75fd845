#include "invfrac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <random>
#include <sstream>

#include "invfrac/errors.hpp"
#include "invfrac/profile.hpp"
#include "invfrac/projection.hpp"
#include "invfrac/sharp_interface.hpp"

namespace invfrac {

const char* functional_name(Functional f) noexcept { return f == Functional::E ? "E" : "V"; }

void SolveSettings::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("SolveSettings: " + what); };
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be positive");
  if (!(mu >= 0.0) || !std::isfinite(mu)) fail("mu must be non-negative");
  if (grid < kMinIntervals) fail("grid must have at least 16 intervals");
  if (!(tolerance > 0.0)) fail("tolerance must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) fail("armijo constant must lie in (0, 1)");
  if (!(step_min > 0.0) || !(step_max >= step_min)) fail("step bounds must satisfy 0 < min <= max");
  if (memory < 1) fail("line-search memory must be at least 1");
  if (!(random_amplitude >= 0.0)) fail("random amplitude must be non-negative");
  if (sharp_window < 0) fail("sharp window must be non-negative");
}

DiscreteField resample(const DiscreteField& field, std::size_t intervals) {
  if (field.intervals() == intervals) return field;
  DiscreteField out{field.kind, field.lambda, std::vector<double>(intervals + 1)};
  const std::size_t n = field.intervals();
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double t = static_cast<double>(j) * static_cast<double>(n) / static_cast<double>(intervals);
    const auto i = std::min(static_cast<std::size_t>(t), n - 1);
    const double frac = t - static_cast<double>(i);
    out.values[j] = field.values[i] + frac * (field.values[i + 1] - field.values[i]);
  }
  return out;
}

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

PiecewiseConstantField pc_field(double lambda, std::vector<double> breaks, std::vector<double> vals) {
  return PiecewiseConstantField{lambda, std::move(breaks), std::move(vals)};
}

// Sharp minimisers of I with one jump (end cracks) and two jumps.
std::vector<std::pair<std::string, PiecewiseConstantField>> sharp_I_candidates(double lambda,
                                                                               long window) {
  std::vector<std::pair<std::string, PiecewiseConstantField>> out;
  const double gap = lambda - 1.0;
  out.emplace_back("sharp-n1-A", pc_field(lambda, {1.0}, {1.0, 0.0}));
  out.emplace_back("sharp-n1-B", pc_field(lambda, {gap}, {0.0, 1.0}));
  if (window >= 1) {
    out.emplace_back("sharp-n2-C", pc_field(lambda, {0.5 * gap, 0.5 * gap + 1.0}, {0.0, 1.0, 0.0}));
    out.emplace_back("sharp-n2-D", pc_field(lambda, {0.5, 0.5 + gap}, {1.0, 0.0, 1.0}));
  }
  return out;
}

using Vec = std::vector<double>;

// Symmetric tridiagonal matrix; off[j] couples j and j + 1.
struct Tridiagonal {
  Vec diag;
  Vec off;
};

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Solves the principal submatrix on `free` (Thomas algorithm); other entries of out are 0.
void solve_restricted(const Tridiagonal& m, const std::vector<char>& free, const Vec& rhs,
                      Vec& out) {
  const std::size_t n = m.diag.size();
  Vec c(n, 0.0);
  out.assign(n, 0.0);
  double prev_c = 0.0;
  double prev_d = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!free[j]) {
      prev_c = 0.0;
      prev_d = 0.0;
      continue;
    }
    const double lower = (j > 0 && free[j - 1]) ? m.off[j - 1] : 0.0;
    const double upper = (j + 1 < n && free[j + 1]) ? m.off[j] : 0.0;
    const double denom = m.diag[j] - lower * prev_c;
    c[j] = upper / denom;
    out[j] = (rhs[j] - lower * prev_d) / denom;
    prev_c = c[j];
    prev_d = out[j];
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    if (free[j] && free[j + 1]) out[j] -= c[j] * out[j + 1];
  }
}

double wstar_second(const MaterialModel& model, double s) {
  const double h = 1e-5;
  return (model.wstar_prime(s + h) - model.wstar_prime(s - h)) / (2.0 * h);
}

struct Problem {
  std::vector<double> weights;
  double spacing;
  std::function<double(const Vec&, Vec&)> objective;
  // f(y) - f(x) assembled from local differences. Near stationarity the
  // decrease per step falls far below the rounding error of f itself, so the
  // line search must not compare two separately evaluated totals.
  std::function<double(const Vec&, const Vec&)> change;
  // Positive definite tridiagonal approximation of the Hessian: the gradient
  // penalty exactly, the well term through |W*''| + 1.
  std::function<Tridiagonal(const Vec&)> preconditioner;
};

Problem make_problem(const MaterialModel& model, const SolveSettings& s) {
  Problem p;
  const double lambda = s.lambda;
  const double eps = s.epsilon;
  p.spacing = lambda / static_cast<double>(s.grid);
  if (s.functional == Functional::E) {
    p.weights = trapezoid_weights(lambda, s.grid);
    p.objective = [&model, lambda, eps](const std::vector<double>& x, std::vector<double>& g) {
      const DiscreteField H{FieldKind::InverseStretch, lambda, x};
      g = grad_E_eps(H, eps, model);
      for (double& v : g) v /= eps;
      return eval_E_eps(H, eps, model) / eps;
    };
    p.change = [&model, dy = p.spacing, eps](const Vec& x, const Vec& y) {
      return delta_E_eps(x, y, dy, eps, model);
    };
    p.preconditioner = [&model, dy = p.spacing, eps, w = p.weights](const Vec& x) {
      const std::size_t n = x.size();
      Tridiagonal m{Vec(n), Vec(n - 1, -eps / dy)};
      for (std::size_t j = 0; j < n; ++j) {
        const double links = (j == 0 || j + 1 == n) ? 1.0 : 2.0;
        m.diag[j] = links * eps / dy + w[j] * (std::abs(wstar_second(model, x[j])) + 1.0) / eps;
      }
      return m;
    };
  } else {
    p.weights.assign(s.grid, p.spacing);
    const double mu = s.mu;
    p.objective = [&model, lambda, eps, mu](const std::vector<double>& x, std::vector<double>& g) {
      return eval_V_eps_slopes(x, lambda, eps, mu, model, &g);
    };
    p.change = [&model, lambda, eps, mu](const Vec& x, const Vec& y) {
      return delta_V_eps_slopes(x, y, lambda, eps, mu, model);
    };
    p.preconditioner = [&model, dy = p.spacing, eps](const Vec& x) {
      const std::size_t n = x.size();
      Tridiagonal m{Vec(n), Vec(n - 1, -eps / dy)};
      for (std::size_t j = 0; j < n; ++j) {
        const double links = (j == 0 || j + 1 == n) ? 1.0 : 2.0;
        m.diag[j] = links * eps / dy + dy * (std::abs(wstar_second(model, x[j])) + 1.0) / eps;
      }
      return m;
    };
  }
  return p;
}

double sup_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

std::vector<NamedStart> make_starts(const MaterialModel& model, const SolveSettings& settings) {
  settings.validate();
  const double lambda = settings.lambda;
  const std::size_t n = settings.grid;
  const bool is_e = settings.functional == Functional::E;
  auto wants = [&](StartStrategy s) {
    return std::find(settings.strategies.begin(), settings.strategies.end(), s) !=
           settings.strategies.end();
  };

  std::vector<NamedStart> starts;
  if (wants(StartStrategy::Homogeneous)) {
    starts.push_back({"homogeneous",
                      is_e ? DiscreteField::constant(FieldKind::InverseStretch, lambda, n, 1.0 / lambda)
                           : DiscreteField::homogeneous_deformation(lambda, n)});
  }

  if (wants(StartStrategy::MollifiedSharp) && lambda > 1.0) {
    const double c = c_wstar(model, 1e-10).value;
    if (c > 0.0) {
      const TransitionProfile profile(model);
      if (is_e) {
        for (const auto& [label, field] : sharp_I_candidates(lambda, settings.sharp_window)) {
          starts.push_back({label, mollify_sharp_candidate(field, settings.epsilon, profile, n).field});
        }
      } else {
        const long centre = crack_count(c, settings.mu, lambda);
        const long first = std::max(1L, centre - settings.sharp_window);
        for (long k = first; k <= centre + settings.sharp_window; ++k) {
          for (Variant v : {Variant::A, Variant::B}) {
            const auto sharp = build_sharp_minimizer(k, lambda, v, c, settings.mu);
            std::ostringstream label;
            label << "sharp-n" << k << "-" << variant_name(v);
            starts.push_back(
                {label.str(), mollify_sharp_candidate(sharp.field, settings.epsilon, profile, n).field});
          }
        }
      }
    }
  }

  if (wants(StartStrategy::Random)) {
    for (std::size_t r = 0; r < settings.random_starts; ++r) {
      std::mt19937_64 rng(settings.seed * 0x9E3779B97F4A7C15ULL + r);
      std::ostringstream label;
      label << "random-" << r;
      if (is_e) {
        std::vector<double> raw(n + 1);
        for (double& v : raw) v = 1.0 / lambda + settings.random_amplitude * uniform_pm1(rng);
        starts.push_back({label.str(), project_H(raw, lambda)});
      } else {
        std::vector<double> slope(n);
        for (double& v : slope) {
          v = std::max(0.0, (1.0 + settings.random_amplitude * uniform_pm1(rng)) / lambda);
        }
        DiscreteField h = integrate_slopes(slope, lambda);
        const double end = h.values.back();
        for (double& v : h.values) v /= end;
        starts.push_back({label.str(), project_h(h.values, lambda)});
      }
    }
  }
  return starts;
}

SolveResult descend(const MaterialModel& model, const SolveSettings& settings,
                    const DiscreteField& init, std::string label) {
  settings.validate();
  const bool is_e = settings.functional == Functional::E;
  const double lambda = settings.lambda;
  const DiscreteField start = resample(init, settings.grid);
  if (std::abs(start.lambda - lambda) > 1e-12 * lambda) {
    throw DomainError("descend: initial field has a different domain length");
  }

  const Problem problem = make_problem(model, settings);
  const auto& w = problem.weights;
  const double dy = problem.spacing;
  auto project = [&](const Vec& raw) { return project_weighted_simplex(raw, w, 1.0); };

  Vec x = is_e ? project(start.values) : project(slopes(project_h(start.values, lambda)));
  const std::size_t n = x.size();

  SolveResult result;
  result.start = std::move(label);

  // Shifting the gradient along the constraint normal w leaves every projected
  // step unchanged. Removing the multiplier part, estimated on the free
  // coordinates, keeps the rounding error of the mass constraint from leaking
  // into the line search.
  auto remove_multiplier = [&](Vec& gg, const Vec& at) {
    double gw = 0.0;
    double ww = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (at[j] > 0.0) {
        gw += gg[j] * w[j];
        ww += w[j] * w[j];
      }
    }
    const double nu = ww > 0.0 ? gw / ww : 0.0;
    for (std::size_t j = 0; j < n; ++j) gg[j] -= nu * w[j];
    return nu;
  };

  Vec g_raw;
  double f = problem.objective(x, g_raw);
  Vec g = g_raw;
  double nu = remove_multiplier(g, x);
  if (settings.record_history) result.history.push_back(f);

  Vec trial(n);
  auto projected_gradient = [&]() {
    for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] - g[j] / dy;
    return sup_norm_diff(project(trial), x);
  };

  // Accepts `candidate` if it passes the Armijo test against `reference_gap`
  // (0 for a monotone test) and moves the iterate there.
  auto try_accept = [&](const Vec& candidate, double reference_gap, double* delta_out) {
    double decrease = 0.0;
    double mass_drift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      decrease += g[j] * (candidate[j] - x[j]);
      mass_drift += w[j] * (candidate[j] - x[j]);
    }
    if (!(decrease < 0.0)) return false;
    const double delta = problem.change(x, candidate) - nu * mass_drift;
    if (!(delta <= reference_gap + settings.armijo * decrease)) return false;
    if (delta_out) *delta_out = delta;
    return true;
  };
  auto move_to = [&](Vec candidate) {
    x = std::move(candidate);
    f = problem.objective(x, g_raw);
    g = g_raw;
    nu = remove_multiplier(g, x);
    if (settings.record_history) result.history.push_back(f);
  };

  // Nonmonotone reference: gaps to the last `memory` iterates are suffix sums
  // of the recorded changes.
  std::deque<double> recent;
  auto reference_gap = [&]() {
    double acc = 0.0;
    double gap = 0.0;
    for (auto r = recent.rbegin(); r != recent.rend(); ++r) {
      acc -= *r;
      gap = std::max(gap, acc);
    }
    return gap;
  };

  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v / dy));
  double alpha = std::clamp(gmax > 0.0 ? 0.1 / gmax : 1.0, settings.step_min, settings.step_max);

  std::vector<char> free_set(n);
  Vec hv(n), u(n), z(n), d(n), r(n), p(n), probe(n), g_probe;
  const bool use_newton = settings.newton_cg_iterations > 0;

  // Preconditioned conjugate gradients on the quadratic model restricted to
  // the free coordinates and to w.d = 0. Returns false if no descent
  // direction was produced.
  auto subspace_direction = [&]() {
    for (std::size_t j = 0; j < n; ++j) free_set[j] = x[j] > 0.0 ? 1 : 0;
    const Tridiagonal m = problem.preconditioner(x);
    Vec wf(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) wf[j] = free_set[j] ? w[j] : 0.0;
    solve_restricted(m, free_set, wf, u);
    const double wu = dot(wf, u);
    if (!(wu > 0.0)) return false;
    auto precondition = [&](const Vec& rr, Vec& out) {
      solve_restricted(m, free_set, rr, out);
      const double c = dot(wf, out) / wu;
      for (std::size_t j = 0; j < n; ++j) out[j] -= c * u[j];
    };
    auto hessian_times = [&](const Vec& v, Vec& out) {
      double vmax = 0.0;
      double xmax = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        vmax = std::max(vmax, std::abs(v[j]));
        xmax = std::max(xmax, std::abs(x[j]));
      }
      const double h = 1e-7 * xmax / vmax;
      for (std::size_t j = 0; j < n; ++j) probe[j] = x[j] + h * v[j];
      problem.objective(probe, g_probe);
      for (std::size_t j = 0; j < n; ++j) {
        out[j] = free_set[j] ? (g_probe[j] - g_raw[j]) / h : 0.0;
      }
    };

    std::fill(d.begin(), d.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) r[j] = free_set[j] ? -g[j] : 0.0;
    precondition(r, z);
    p = z;
    double rz = dot(r, z);
    if (!(rz > 0.0)) return false;
    const double rz0 = rz;
    for (std::size_t k = 0; k < settings.newton_cg_iterations; ++k) {
      hessian_times(p, hv);
      const double curvature = dot(p, hv);
      if (!(curvature > 0.0)) {
        if (k == 0) d = p;
        break;
      }
      const double a = rz / curvature;
      for (std::size_t j = 0; j < n; ++j) {
        d[j] += a * p[j];
        r[j] -= a * hv[j];
      }
      precondition(r, z);
      const double rz_next = dot(r, z);
      if (rz_next <= 1e-6 * rz0) break;
      const double beta = rz_next / rz;
      for (std::size_t j = 0; j < n; ++j) p[j] = z[j] + beta * p[j];
      rz = rz_next;
    }
    return true;
  };

  std::size_t it = 0;
  for (; it < settings.max_iterations; ++it) {
    result.projected_gradient_norm = projected_gradient();
    if (result.projected_gradient_norm <= settings.tolerance) {
      result.converged = true;
      break;
    }

    // Spectral projected-gradient step.
    const Vec x_old = x;
    const Vec density_old = [&] {
      Vec out(n);
      for (std::size_t j = 0; j < n; ++j) out[j] = g[j] / dy;
      return out;
    }();
    bool accepted = false;
    const double gap = reference_gap();
    for (std::size_t bt = 0; bt <= settings.max_backtracks; ++bt) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] - alpha * g[j] / dy;
      Vec candidate = project(trial);
      double delta = 0.0;
      if (try_accept(candidate, gap, &delta)) {
        recent.push_back(delta);
        if (recent.size() >= settings.memory) recent.pop_front();
        move_to(std::move(candidate));
        accepted = true;
        break;
      }
      alpha = std::max(0.5 * alpha, settings.step_min);
    }
    if (!accepted) break;

    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double sj = x[j] - x_old[j];
      const double yj = g[j] / dy - density_old[j];
      ss += sj * sj;
      sy += sj * yj;
    }
    if (ss == 0.0) break;
    alpha = sy > 0.0 ? std::clamp(ss / sy, settings.step_min, settings.step_max) : settings.step_max;

    // Newton-CG step on the face the projected step landed on.
    if (use_newton && subspace_direction()) {
      double t = 1.0;
      for (std::size_t bt = 0; bt < 30; ++bt, t *= 0.5) {
        for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + t * d[j];
        Vec candidate = project(trial);
        double delta = 0.0;
        if (try_accept(candidate, 0.0, &delta)) {
          recent.push_back(delta);
          if (recent.size() >= settings.memory) recent.pop_front();
          move_to(std::move(candidate));
          break;
        }
      }
    }
  }
  if (!result.converged) {
    result.projected_gradient_norm = projected_gradient();
    result.converged = result.projected_gradient_norm <= settings.tolerance;
  }
  result.iterations = it;

  if (is_e) {
    result.field = DiscreteField{FieldKind::InverseStretch, lambda, x};
    result.energy = eval_E_eps(result.field, settings.epsilon, model);
    result.rescaled_energy = result.energy / settings.epsilon;
  } else {
    result.field = integrate_slopes(x, lambda);
    const auto e = eval_V_eps(result.field, settings.epsilon, settings.mu, model);
    result.energy = e.unscaled;
    result.rescaled_energy = e.rescaled;
  }
  result.transition_count = transition_count(result.field);
  return result;
}

SolveResult minimize(const MaterialModel& model, const SolveSettings& settings,
                     std::span<const NamedStart> extra_starts) {
  std::vector<NamedStart> starts(extra_starts.begin(), extra_starts.end());
  for (auto& s : make_starts(model, settings)) starts.push_back(std::move(s));
  if (starts.empty()) throw DomainError("minimize: no starting fields requested");

  SolveResult best;
  bool have = false;
  for (const auto& start : starts) {
    SolveResult r = descend(model, settings, start.field, start.label);
    // Energies equal to rounding count as a tie, which a converged run wins.
    const double tie = 1e-12 * std::max(1.0, std::abs(best.rescaled_energy));
    const bool better = !have || r.rescaled_energy < best.rescaled_energy - tie ||
                        (r.rescaled_energy <= best.rescaled_energy + tie && r.converged && !best.converged);
    if (better) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace invfrac
