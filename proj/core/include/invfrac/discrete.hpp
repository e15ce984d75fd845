#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "invfrac/material.hpp"

namespace invfrac {

enum class FieldKind {
  InverseStretch,      // H sampled at nodes
  InverseDeformation,  // h sampled at nodes
};

/// Samples on the uniform grid y_j = j lambda / N, j = 0..N.
struct DiscreteField {
  FieldKind kind = FieldKind::InverseStretch;
  double lambda = 1.0;
  std::vector<double> values;

  static DiscreteField constant(FieldKind kind, double lambda, std::size_t intervals, double value);
  /// h_j = y_j / lambda.
  static DiscreteField homogeneous_deformation(double lambda, std::size_t intervals);

  std::size_t intervals() const { return values.empty() ? 0 : values.size() - 1; }
  double spacing() const { return lambda / static_cast<double>(intervals()); }
  double node(std::size_t j) const {
    return lambda * static_cast<double>(j) / static_cast<double>(intervals());
  }
};

inline constexpr std::size_t kMinIntervals = 16;

/// Throws DomainError unless lambda > 0, N >= 16 and all values are finite.
void validate_field(const DiscreteField& field);

/// Composite trapezoid weights: spacing * (1/2, 1, ..., 1, 1/2).
std::vector<double> trapezoid_weights(double lambda, std::size_t intervals);

double trapezoid_integral(const DiscreteField& field);

/// Forward-difference slopes (h_{j+1} - h_j) / spacing, j = 0..N-1.
std::vector<double> slopes(const DiscreteField& h);

/// h_0 = 0, h_j = spacing * sum_{i<j} slope_i.
DiscreteField integrate_slopes(std::span<const double> slope, double lambda);

/// Unscaled E_eps: sum_j spacing [ eps^2/2 ((H_{j+1}-H_j)/spacing)^2 + (W(H_j) + W(H_{j+1}))/2 ].
/// Free (natural) boundary conditions; the unit-mass constraint is not part of the value.
double eval_E_eps(const DiscreteField& H, double epsilon, const MaterialModel& model);

/// Gradient of eval_E_eps with respect to the nodal values.
std::vector<double> grad_E_eps(const DiscreteField& H, double epsilon, const MaterialModel& model);

/// Foundation-coupled energy in both scalings, with k = eps * mu:
///   unscaled  U_eps = sum_{interior} spacing eps^2/2 (second difference / spacing^2)^2
///                   + sum_cells spacing [ W(s_j) + k s_j / 2 (y_{j+1/2} - lambda h_{j+1/2})^2 ]
///   rescaled  V_eps = U_eps / eps
struct FoundationEnergy {
  double unscaled = 0.0;
  double rescaled = 0.0;
};

FoundationEnergy eval_V_eps(const DiscreteField& h, double epsilon, double mu,
                            const MaterialModel& model);

/// Gradient of the rescaled V_eps with respect to the nodal values of h.
std::vector<double> grad_V_eps(const DiscreteField& h, double epsilon, double mu,
                               const MaterialModel& model);

/// V_eps and its gradient with respect to the slopes, h = integrate_slopes(slope).
double eval_V_eps_slopes(std::span<const double> slope, double lambda, double epsilon, double mu,
                         const MaterialModel& model, std::vector<double>* gradient = nullptr);

/// Rescaled change E_eps(y)/eps - E_eps(x)/eps between nodal H vectors with
/// spacing dy, assembled from local differences. It stays accurate when the
/// change is far below the rounding error of either total.
double delta_E_eps(std::span<const double> x, std::span<const double> y, double dy, double eps,
                   const MaterialModel& model);

/// Same for the slope form of the rescaled V_eps.
double delta_V_eps_slopes(std::span<const double> x, std::span<const double> y, double lambda,
                          double eps, double mu, const MaterialModel& model);

/// Number of crossings of the level 1/2 along the sequence.
std::size_t count_transitions(std::span<const double> values, double level = 0.5);

/// Crossings by H itself, or by the slopes of h.
std::size_t transition_count(const DiscreteField& field);

/// Discrete Modica-Mortola bound: sum |Phi(u_{j+1}) - Phi(u_j)|, with u = H or the slopes of h.
double modica_mortola_bound(const DiscreteField& field, const InterfacePotential& phi);

}  // namespace invfrac
