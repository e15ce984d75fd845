#pragma once

#include <span>
#include <vector>

#include "invfrac/discrete.hpp"

namespace invfrac {

/// Euclidean projection onto {x >= 0, sum_j weights_j x_j = mass}.
///
/// The solution has the clipped-affine form x_j = max(0, raw_j - theta w_j).
/// theta is located by bisection over the sorted breakpoints raw_j / w_j and
/// then computed in closed form on the bracketed support, so the constraint
/// holds to rounding.
/// Throws Infeasible unless all weights and the mass are positive.
std::vector<double> project_weighted_simplex(std::span<const double> raw,
                                             std::span<const double> weights, double mass);

/// Projection onto admissible inverse stretches: H >= 0, trapezoid integral = 1.
/// Throws Infeasible if lambda <= 0.
DiscreteField project_H(std::span<const double> raw, double lambda);

/// Weighted least-squares nondecreasing fit (pool adjacent violators).
std::vector<double> isotonic_regression(std::span<const double> values,
                                        std::span<const double> weights);

/// Projection onto admissible inverse deformations: nondecreasing, h_0 = 0, h_N = 1.
///
/// The interior is fitted by PAV and clamped to [0, 1], which is the exact
/// projection with pinned endpoints; the endpoints are then set exactly.
DiscreteField project_h(std::span<const double> raw, double lambda);

}  // namespace invfrac
