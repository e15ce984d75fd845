#include "invfrac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "invfrac/errors.hpp"
#include "invfrac/profile.hpp"

namespace invfrac {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_epsilons(std::span<const double> epsilons) {
  if (epsilons.empty()) throw DomainError("sweep: epsilon list is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw DomainError("sweep: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw DomainError("sweep: epsilons must be strictly decreasing");
    }
  }
}

double trapezoid_l1(const std::vector<double>& a, const std::vector<double>& b, double lambda) {
  const auto w = trapezoid_weights(lambda, a.size() - 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += w[j] * std::abs(a[j] - b[j]);
  return sum;
}

struct ReferenceI {
  std::string label;
  std::vector<double> samples;  // H at nodes
};

struct ReferenceV {
  std::string label;
  std::vector<double> slopes;  // at cell midpoints
  std::vector<double> nodes;   // h at nodes
};

// Shared row loop: continuation from the largest epsilon with warm starts.
template <class Measure>
void run_rows(SweepReport& report, const MaterialModel& model, std::span<const double> epsilons,
              SolveSettings settings, const InterfacePotential& phi, Measure&& measure) {
  for (double eps : epsilons) {
    settings.epsilon = eps;
    std::vector<NamedStart> extra;
    if (!report.minimizers.empty()) extra.push_back({"warm-start", report.minimizers.back()});
    SolveResult best = minimize(model, settings, extra);

    // Upper end of the sandwich: the mollified sharp candidates on their own.
    double upper = kInf;
    if (report.sharp_energy < kInf) {
      SolveSettings probe = settings;
      probe.strategies = {StartStrategy::MollifiedSharp};
      probe.sharp_window = 0;
      for (const auto& start : make_starts(model, probe)) {
        if (settings.functional == Functional::E) {
          upper = std::min(upper, eval_E_eps(start.field, eps, model) / eps);
        } else {
          upper = std::min(upper, eval_V_eps(start.field, eps, settings.mu, model).rescaled);
        }
      }
    }

    SweepRow row;
    row.epsilon = eps;
    row.energy = best.energy;
    row.rescaled_energy = best.rescaled_energy;
    row.transition_count = best.transition_count;
    row.iterations = best.iterations;
    row.converged = best.converged;
    row.start = best.start;
    row.lower_bound = modica_mortola_bound(best.field, phi);
    row.upper_bound = upper;
    measure(best.field, row);
    row.suspect = row.rescaled_energy < (1.0 - kLowerBoundSlack) * row.lower_bound ||
                  row.rescaled_energy > upper * (1.0 + 1e-12);
    report.rows.push_back(row);
    report.minimizers.push_back(best.field);
  }
}

void fill_metadata(SweepReport& report, const MaterialModel& model, const SolveSettings& s) {
  report.model = model.name();
  report.grid = s.grid;
  report.seed = s.seed;
  report.tolerance = s.tolerance;
  report.max_iterations = s.max_iterations;
}

}  // namespace

bool SweepReport::distances_settle() const {
  if (rows.size() < 2) return true;
  const double prev = rows[rows.size() - 2].l1_distance_to_sharp;
  const double last = rows.back().l1_distance_to_sharp;
  return last <= prev * 1.05;
}

bool SweepReport::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
}

SweepReport gamma_sweep_I(const MaterialModel& model, double lambda, std::span<const double> epsilons,
                          std::size_t grid, const SolveSettings& base) {
  if (!(lambda > 0.0)) throw DomainError("gamma_sweep_I: lambda must be positive");
  check_epsilons(epsilons);
  SolveSettings settings = base;
  settings.functional = Functional::E;
  settings.lambda = lambda;
  settings.grid = grid;
  settings.epsilon = epsilons.front();
  settings.validate();

  SweepReport report;
  report.functional = Functional::E;
  report.lambda = lambda;
  report.mu = 0.0;
  fill_metadata(report, model, settings);
  report.c_wstar = c_wstar(model, 1e-10).value;

  std::vector<ReferenceI> refs;
  auto sample = [&](const PiecewiseConstantField& f) {
    std::vector<double> v(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) {
      v[j] = f.value_at(lambda * static_cast<double>(j) / static_cast<double>(grid));
    }
    return v;
  };
  if (lambda > 1.0) {
    const PiecewiseConstantField a{lambda, {1.0}, {1.0, 0.0}};
    const PiecewiseConstantField b{lambda, {lambda - 1.0}, {0.0, 1.0}};
    refs.push_back({"sharp-n1-A", sample(a)});
    refs.push_back({"sharp-n1-B", sample(b)});
    report.sharp_energy = report.c_wstar > 0.0 ? eval_I(a, report.c_wstar) : kInf;
    report.sharp_crack_count = 1;
  } else {
    refs.push_back({"homogeneous", std::vector<double>(grid + 1, 1.0 / lambda)});
    report.sharp_energy = lambda == 1.0 ? 0.0 : kInf;
    report.sharp_crack_count = 0;
  }
  for (const auto& r : refs) report.candidates.push_back(r.label);

  const InterfacePotential phi(model);
  run_rows(report, model, epsilons, settings, phi, [&](const DiscreteField& H, SweepRow& row) {
    row.l1_distance_to_sharp = kInf;
    for (const auto& ref : refs) {
      const double d = trapezoid_l1(H.values, ref.samples, lambda);
      if (d < row.l1_distance_to_sharp) {
        row.l1_distance_to_sharp = d;
        row.nearest_candidate = ref.label;
      }
    }
    row.h1_seminorm_distance = kNaN;
    row.sup_distance = kNaN;
  });
  return report;
}

SweepReport gamma_sweep_V(const MaterialModel& model, double lambda, double mu,
                          std::span<const double> epsilons, std::size_t grid,
                          const SolveSettings& base) {
  if (!(lambda > 0.0)) throw DomainError("gamma_sweep_V: lambda must be positive");
  check_epsilons(epsilons);
  SolveSettings settings = base;
  settings.functional = Functional::V;
  settings.lambda = lambda;
  settings.mu = mu;
  settings.grid = grid;
  settings.epsilon = epsilons.front();
  settings.validate();

  SweepReport report;
  report.functional = Functional::V;
  report.lambda = lambda;
  report.mu = mu;
  fill_metadata(report, model, settings);
  report.c_wstar = c_wstar(model, 1e-10).value;

  const double dy = lambda / static_cast<double>(grid);
  std::vector<ReferenceV> refs;
  auto sample = [&](const std::string& label, const PiecewiseLinearField& f) {
    ReferenceV ref{label, std::vector<double>(grid), std::vector<double>(grid + 1)};
    const PiecewiseConstantField slope = slope_field(f);
    for (std::size_t j = 0; j <= grid; ++j) ref.nodes[j] = f.value_at(static_cast<double>(j) * dy);
    for (std::size_t j = 0; j < grid; ++j) {
      ref.slopes[j] = slope.value_at((static_cast<double>(j) + 0.5) * dy);
    }
    return ref;
  };
  if (lambda > 1.0 && report.c_wstar > 0.0) {
    const long n = crack_count(report.c_wstar, mu, lambda);
    report.sharp_crack_count = n;
    report.sharp_energy = v_n(n, report.c_wstar, mu, lambda);
    for (Variant v : {Variant::A, Variant::B}) {
      const auto sharp = build_sharp_minimizer(n, lambda, v, report.c_wstar, mu);
      refs.push_back(sample(std::string("sharp-n") + std::to_string(n) + "-" + variant_name(v),
                            sharp.field));
    }
  } else {
    ReferenceV ref{"homogeneous", std::vector<double>(grid, 1.0 / lambda), std::vector<double>(grid + 1)};
    for (std::size_t j = 0; j <= grid; ++j) {
      ref.nodes[j] = static_cast<double>(j) / static_cast<double>(grid);
    }
    refs.push_back(ref);
    report.sharp_energy = lambda == 1.0 ? 0.0 : kInf;
    report.sharp_crack_count = 0;
  }
  for (const auto& r : refs) report.candidates.push_back(r.label);

  const InterfacePotential phi(model);
  run_rows(report, model, epsilons, settings, phi, [&](const DiscreteField& h, SweepRow& row) {
    const auto s = slopes(h);
    row.l1_distance_to_sharp = kInf;
    for (const auto& ref : refs) {
      double l1 = 0.0;
      double l2 = 0.0;
      double sup = 0.0;
      for (std::size_t j = 0; j < grid; ++j) {
        const double d = std::abs(s[j] - ref.slopes[j]);
        l1 += dy * d;
        l2 += dy * d * d;
      }
      for (std::size_t j = 0; j <= grid; ++j) sup = std::max(sup, std::abs(h.values[j] - ref.nodes[j]));
      if (l1 < row.l1_distance_to_sharp) {
        row.l1_distance_to_sharp = l1;
        row.h1_seminorm_distance = std::sqrt(l2);
        row.sup_distance = sup;
        row.nearest_candidate = ref.label;
      }
    }
  });
  return report;
}

ScanReport crack_scan(double c_wstar_value, double lambda_lo, double lambda_hi, double step,
                      double mu, std::string model_name) {
  if (!(lambda_lo >= 1.0) || !(lambda_hi > lambda_lo) || !std::isfinite(lambda_hi)) {
    throw DomainError("crack_scan: need 1 <= lambda_lo < lambda_hi");
  }
  if (!(step > 0.0)) throw DomainError("crack_scan: step must be positive");
  if (!(mu >= 0.0)) throw DomainError("crack_scan: mu must be non-negative");
  if (!(c_wstar_value > 0.0)) throw DomainError("crack_scan: c_wstar must be positive");

  ScanReport report;
  report.mu = mu;
  report.model = std::move(model_name);
  report.c_wstar = c_wstar_value;
  for (long k = 1;; ++k) {
    const double lambda = lambda_lo + static_cast<double>(k) * step;
    if (lambda >= lambda_hi - 1e-9 * step) break;
    ScanRow row;
    row.lambda = lambda;
    row.x = crack_count_estimate(c_wstar_value, mu, lambda);
    row.n = crack_count(c_wstar_value, mu, lambda);
    row.energy = v_n(row.n, c_wstar_value, mu, lambda);
    for (const auto& c : build_sharp_minimizer(row.n, lambda, Variant::A, c_wstar_value, mu).cracks) {
      row.crack_positions.push_back(c.material_position);
    }
    if (!report.rows.empty() && row.n < report.rows.back().n) {
      throw std::logic_error("crack_scan: crack count decreased with load");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

ScanReport crack_scan(const MaterialModel& model, double lambda_lo, double lambda_hi, double step,
                      double mu) {
  return crack_scan(c_wstar(model, 1e-10).value, lambda_lo, lambda_hi, step, mu, model.name());
}

}  // namespace invfrac
