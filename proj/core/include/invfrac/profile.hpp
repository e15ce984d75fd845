#pragma once

#include <cstddef>
#include <vector>

#include "invfrac/discrete.hpp"
#include "invfrac/material.hpp"
#include "invfrac/sharp_interface.hpp"

namespace invfrac {

/// Optimal one-dimensional transition between the wells, in units of eps.
///
/// Tabulates the solution of q' = sqrt(2 wstar(q)) from q = delta to
/// q = 1 - delta (RK4), then shifts the abscissa so the profile has the same
/// mass as the unit step at s = 0. Outside the table the profile takes the
/// well values 0 and 1. Throws NonConvergence if 1 - delta is never reached
/// (e.g. a model with a flat interior).
class TransitionProfile {
 public:
  explicit TransitionProfile(const MaterialModel& model, double delta = 1e-4, double step = 1e-3);

  /// Ascending profile value at s = (y - centre) / eps.
  double operator()(double s) const;
  double left_end() const { return s_.front(); }
  double right_end() const { return s_.back(); }
  double width() const { return s_.back() - s_.front(); }

 private:
  std::vector<double> s_;
  std::vector<double> q_;
};

struct MollifiedField {
  DiscreteField field;
  bool overlap_warning = false;  // two transitions closer than 10 eps
};

/// Smooths a {0,1} inverse stretch: each jump is replaced by the profile
/// oriented along the jump, the nearest jump governing each node. When the
/// field has jumps the samples are rescaled to unit trapezoid mass.
MollifiedField mollify_sharp_candidate(const PiecewiseConstantField& field, double epsilon,
                                       const TransitionProfile& profile, std::size_t intervals);

/// Smooths a {0,1}-slope inverse deformation: the slope field is mollified at
/// cell midpoints, integrated from h(0) = 0 and rescaled so h(lambda) = 1.
/// Fields without kinks are sampled directly.
MollifiedField mollify_sharp_candidate(const PiecewiseLinearField& field, double epsilon,
                                       const TransitionProfile& profile, std::size_t intervals);

/// Slopes of a {0,1}-slope field as a piecewise-constant field on [0, length].
PiecewiseConstantField slope_field(const PiecewiseLinearField& field);

}  // namespace invfrac
