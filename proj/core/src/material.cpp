#include "invfrac/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "invfrac/errors.hpp"

namespace invfrac {

MaterialModel::MaterialModel(std::string name, Density wstar, Density wstar_prime,
                             GrowthConstants growth)
    : name_(std::move(name)),
      wstar_(std::move(wstar)),
      wstar_prime_(std::move(wstar_prime)),
      growth_(growth) {
  if (!wstar_ || !wstar_prime_) throw DomainError("MaterialModel: density callbacks must be set");
  if (!(growth_.c > 0.0) || !(growth_.m > 1.0)) {
    throw DomainError("MaterialModel '" + name_ + "': growth constants need C > 0 and M > 1");
  }
  if (wstar_(0.0) != 0.0) {
    throw DomainError("MaterialModel '" + name_ + "': wstar(0) must be 0");
  }
  const double top = 10.0 * growth_.m;
  for (int i = 0; i <= 200; ++i) {
    const double h = top * i / 200.0;
    if (!std::isfinite(wstar_(h)) || !std::isfinite(wstar_prime_(h))) {
      std::ostringstream msg;
      msg << "MaterialModel '" << name_ << "': non-finite density at H = " << h;
      throw DomainError(msg.str());
    }
  }
}

MaterialModel builtin_lj() {
  MaterialModel model(
      "lj", [](double h) { return h * (1.0 - h) * (1.0 - h); },
      [](double h) { return (1.0 - h) * (1.0 - 3.0 * h); }, GrowthConstants{0.25, 2.0});
  if (!check_growth(model).pass) throw std::logic_error("builtin_lj: growth bound violated");
  return model;
}

MaterialModel builtin_quartic() {
  MaterialModel model(
      "quartic", [](double h) { return 2.0 * h * h * (1.0 - h) * (1.0 - h); },
      [](double h) { return 4.0 * h * (1.0 - h) * (1.0 - 2.0 * h); }, GrowthConstants{1.0, 2.0});
  if (!check_growth(model).pass) throw std::logic_error("builtin_quartic: growth bound violated");
  return model;
}

MaterialModel builtin_zero() {
  return MaterialModel(
      "zero", [](double) { return 0.0; }, [](double) { return 0.0; }, GrowthConstants{});
}

MaterialModel polynomial_model(std::string name, std::vector<double> coeffs,
                               GrowthConstants growth) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (coeffs.front() != 0.0) throw DomainError("polynomial_model: constant coefficient must be 0");
  auto value = [coeffs](double h) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * h + *it;
    return acc;
  };
  auto slope = [coeffs](double h) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
      acc = acc * h + static_cast<double>(k) * coeffs[k];
    }
    return acc;
  };
  return MaterialModel(std::move(name), value, slope, growth);
}

MaterialModel model_by_name(const std::string& name) {
  if (name == "lj") return builtin_lj();
  if (name == "quartic") return builtin_quartic();
  if (name == "zero") return builtin_zero();
  throw DomainError("unknown model '" + name + "' (expected lj, quartic or zero)");
}

std::vector<std::string> builtin_model_names() { return {"lj", "quartic", "zero"}; }

double DirectDensityView::w(double stretch) const {
  if (!(stretch > 0.0)) throw DomainError("DirectDensityView::w: stretch must be positive");
  return stretch * model_->wstar(1.0 / stretch);
}

QuadratureResult c_wstar(const MaterialModel& model, double abs_tol) {
  if (!(abs_tol > 0.0)) throw DomainError("c_wstar: abs_tol must be positive");
  auto integrand = [&model](double t) { return std::sqrt(std::max(0.0, 2.0 * model.wstar(t))); };
  return integrate_adaptive(integrand, 0.0, 1.0, abs_tol);
}

GrowthReport check_growth(const MaterialModel& model, std::size_t samples) {
  return check_growth(model, model.growth(), samples);
}

GrowthReport check_growth(const MaterialModel& model, GrowthConstants growth,
                          std::size_t samples) {
  if (samples < 100) throw DomainError("check_growth: need at least 100 samples");
  GrowthReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const double lo = growth.m;
  const double hi = 10.0 * growth.m;
  for (std::size_t i = 0; i < samples; ++i) {
    const double h = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double margin = model.wstar(h) - growth.c * h * h;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_at = h;
    }
  }
  report.pass = report.worst_margin >= 0.0;
  return report;
}

TwoWellReport check_two_well(const MaterialModel& model, std::size_t samples) {
  TwoWellReport report;
  report.wstar_at_0 = model.wstar(0.0);
  report.wstar_at_1 = model.wstar(1.0);
  report.interior_min = std::numeric_limits<double>::infinity();
  const std::size_t count = std::max<std::size_t>(samples, 2);
  for (std::size_t i = 0; i < count; ++i) {
    const double h = 0.01 + 0.98 * static_cast<double>(i) / static_cast<double>(count - 1);
    report.interior_min = std::min(report.interior_min, model.wstar(h));
  }
  report.pass = report.wstar_at_0 == 0.0 && report.wstar_at_1 == 0.0 && report.interior_min > 0.0;
  return report;
}

InterfacePotential::InterfacePotential(const MaterialModel& model, double s_max,
                                       std::size_t cells)
    : model_(model), s_max_(s_max), cell_(s_max / static_cast<double>(cells)) {
  if (!(s_max > 0.0) || cells == 0) throw DomainError("InterfacePotential: bad table size");
  auto integrand = [this](double t) { return std::sqrt(std::max(0.0, 2.0 * model_.wstar(t))); };
  table_.assign(cells + 1, 0.0);
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = cell_ * static_cast<double>(k);
    table_[k + 1] = table_[k] + integrate_adaptive(integrand, a, a + cell_, 1e-14).value;
  }
}

double InterfacePotential::operator()(double s) const {
  auto integrand = [this](double t) { return std::sqrt(std::max(0.0, 2.0 * model_.wstar(t))); };
  if (s <= 0.0) return -integrate_adaptive(integrand, s, 0.0, 1e-12).value;
  if (s >= s_max_) return table_.back() + integrate_adaptive(integrand, s_max_, s, 1e-12).value;
  const auto k = static_cast<std::size_t>(s / cell_);
  const double base = cell_ * static_cast<double>(k);
  return table_[k] + integrate_adaptive(integrand, base, s, 1e-14).value;
}

}  // namespace invfrac
