#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "invfrac/quadrature.hpp"

namespace invfrac {

/// Constants (C, M) of the quadratic growth bound wstar(H) >= C H^2 for H >= M.
struct GrowthConstants {
  double c = 0.25;
  double m = 2.0;
};

/// Inverse stored-energy density W*(H) = H W(1/H), extended to H = 0.
///
/// The two wells sit at H = 0 (broken phase) and H = 1 (unstretched). The
/// constructor enforces wstar(0) = 0 and finiteness on a sample grid of
/// [0, 10 M]; it does not require the growth bound to hold (see check_growth).
class MaterialModel {
 public:
  using Density = std::function<double(double)>;

  MaterialModel(std::string name, Density wstar, Density wstar_prime, GrowthConstants growth);

  const std::string& name() const noexcept { return name_; }
  double wstar(double h) const { return wstar_(h); }
  double wstar_prime(double h) const { return wstar_prime_(h); }
  const GrowthConstants& growth() const noexcept { return growth_; }

 private:
  std::string name_;
  Density wstar_;
  Density wstar_prime_;
  GrowthConstants growth_;
};

/// W*(H) = H (1 - H)^2, the inverse of W(F) = (1 - 1/F)^2. Growth (1/4, 2).
MaterialModel builtin_lj();

/// W*(H) = 2 H^2 (1 - H)^2. Growth (1, 2).
MaterialModel builtin_quartic();

/// W* == 0. Degenerate; useful only as a quadrature and validation fixture.
MaterialModel builtin_zero();

/// W*(H) = sum_k coeffs[k] H^k. coeffs[0] must be 0.
MaterialModel polynomial_model(std::string name, std::vector<double> coeffs,
                               GrowthConstants growth = {});

/// Looks up "lj", "quartic" or "zero". Throws DomainError otherwise.
MaterialModel model_by_name(const std::string& name);

/// Names accepted by model_by_name.
std::vector<std::string> builtin_model_names();

/// Stretch-based view of a model: w(F) = F wstar(1/F), F > 0.
class DirectDensityView {
 public:
  explicit DirectDensityView(const MaterialModel& model) : model_(&model) {}
  double w(double stretch) const;

 private:
  const MaterialModel* model_;
};

/// Surface-energy constant: integral of sqrt(2 wstar) over [0, 1].
/// Throws NonConvergence if the interval budget runs out before abs_tol.
QuadratureResult c_wstar(const MaterialModel& model, double abs_tol = 1e-10);

struct GrowthReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of wstar(H) - C H^2
  double worst_at = 0.0;
};

/// Samples H uniformly on [M, 10 M] (samples >= 100) and checks wstar(H) >= C H^2.
GrowthReport check_growth(const MaterialModel& model, std::size_t samples = 1000);

/// Same check with explicit constants instead of the ones stored in the model.
GrowthReport check_growth(const MaterialModel& model, GrowthConstants growth,
                          std::size_t samples = 1000);

struct TwoWellReport {
  bool pass = false;
  double wstar_at_0 = 0.0;
  double wstar_at_1 = 0.0;
  double interior_min = 0.0;  // min of wstar over a grid of [0.01, 0.99]
};

TwoWellReport check_two_well(const MaterialModel& model, std::size_t samples = 99);

/// Phi(s) = integral_0^s sqrt(2 wstar(t)) dt, the Modica-Mortola potential.
///
/// Cumulative values are tabulated on [0, s_max]; a query adds one
/// Gauss-Kronrod panel from the nearest table node.
class InterfacePotential {
 public:
  explicit InterfacePotential(const MaterialModel& model, double s_max = 4.0,
                              std::size_t cells = 2048);
  double operator()(double s) const;

 private:
  MaterialModel model_;
  double s_max_;
  double cell_;
  std::vector<double> table_;
};

}  // namespace invfrac
