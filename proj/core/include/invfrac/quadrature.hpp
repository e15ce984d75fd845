#pragma once

#include <cstddef>
#include <functional>

namespace invfrac {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The interval with the largest local error estimate |K15 - G7| is bisected
/// until the summed estimate drops to abs_tol. Only interior nodes are
/// sampled, so integrands with integrable endpoint singularities
/// (sqrt-type vanishing, 1/sqrt blow-up) are handled by refinement toward
/// the endpoint. The refinement sequence is deterministic, so tightening
/// abs_tol continues the same sequence of bisections.
///
/// Throws NonConvergence when max_intervals is reached first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    std::size_t max_intervals = 20000);

}  // namespace invfrac
