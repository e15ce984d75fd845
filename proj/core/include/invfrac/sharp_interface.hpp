#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace invfrac {

/// Absolute tolerance for the {0,1} value/slope and measure constraints.
inline constexpr double kFeasibilityTol = 1e-12;

/// Energy assigned to fields outside the admissible set.
inline constexpr double kInfeasibleEnergy = std::numeric_limits<double>::infinity();

/// Piecewise-constant inverse stretch H on (0, lambda).
///
/// values[i] holds on (breakpoints[i-1], breakpoints[i]) with the convention
/// breakpoints[-1] = 0 and breakpoints[size] = lambda, so
/// values.size() == breakpoints.size() + 1.
struct PiecewiseConstantField {
  double lambda = 1.0;
  std::vector<double> breakpoints;
  std::vector<double> values;

  /// Throws DomainError unless breakpoints are strictly increasing inside (0, lambda).
  void validate() const;
  double value_at(double y) const;
  double measure_where(double value, double tol = kFeasibilityTol) const;
  std::size_t jump_count(double tol = kFeasibilityTol) const;
};

/// Continuous piecewise-linear inverse deformation h.
///
/// The domain is [0, knots.back()]; `load` is the applied stretch lambda that
/// enters the foundation misfit y - lambda h. A full specimen has
/// knots.back() == load; a partial segment of length l has knots.back() == l
/// and end value l / load.
struct PiecewiseLinearField {
  double load = 1.0;
  std::vector<double> knots;
  std::vector<double> values;

  void validate() const;
  double length() const { return knots.empty() ? 0.0 : knots.back(); }
  double value_at(double y) const;
  std::vector<double> slopes() const;
  /// Interior knots across which the slope changes.
  std::size_t kink_count(double tol = kFeasibilityTol) const;
  /// Merges collinear neighbours and zero-length pieces.
  PiecewiseLinearField simplified(double tol = kFeasibilityTol) const;
  /// Appends `next` shifted to start at this field's end point.
  PiecewiseLinearField concatenated(const PiecewiseLinearField& next) const;
};

/// Sharp energy I[H] = c_wstar * #D(H) on {0,1}-valued fields with unit mass, else +inf.
double eval_I(const PiecewiseConstantField& field, double c_wstar);

/// Sharp energy V[h] = c_wstar * #D(h') + mu/2 * int h' (y - lambda h)^2 dy, else +inf.
///
/// Admissible fields have slopes in {0,1}, h(0) = 0 and h(L) = L / load at
/// the right end L of the domain. The foundation integral is exact: on a
/// slope-one piece the misfit is affine in y and its square integrates in
/// closed form.
double eval_V(const PiecewiseLinearField& field, double c_wstar, double mu);

/// Elastic-then-plateau segment on [0, l]: slope 1 up to l/lambda, then flat.
PiecewiseLinearField segment_h1(double ell, double lambda);

/// Plateau-then-elastic segment on [0, l]: flat up to l - l/lambda, then slope 1.
PiecewiseLinearField segment_h2(double ell, double lambda);

/// Energy of either segment: c_wstar + mu (lambda-1)^2 l^3 / (6 lambda^3).
double segment_energy(double ell, double lambda, double c_wstar, double mu);

/// V_n = n c_wstar + mu (lambda - 1)^2 / (6 n^2). Throws DomainError if n < 1.
double v_n(long n, double c_wstar, double mu, double lambda);

/// Real-valued optimum of V_n over n: (mu (lambda-1)^2 / (3 c_wstar))^(1/3).
double crack_count_estimate(double c_wstar, double mu, double lambda);

/// Optimal number of kinks. For x = crack_count_estimate(...), returns 1 when
/// x < 1, else whichever of floor(x), floor(x)+1 has the lower V_n, the
/// smaller one on ties. Throws DomainError if lambda <= 1, mu < 0 or c_wstar <= 0.
long crack_count(double c_wstar, double mu, double lambda);

enum class Variant { A, B };  // A starts with segment_h1, B with segment_h2

const char* variant_name(Variant v) noexcept;

/// A crack is a maximal plateau of h: located at material point h(plateau),
/// opened by the plateau length in the deformed configuration.
struct Crack {
  double material_position = 0.0;
  double opening = 0.0;
  double y_start = 0.0;
  double y_end = 0.0;
};

struct SharpMinimizer {
  long n = 0;
  double segment_length = 0.0;
  Variant variant = Variant::A;
  double energy = 0.0;  // V_n
  PiecewiseLinearField field;
  std::vector<Crack> cracks;
};

/// Maximal zero-slope pieces of an admissible field, in order of y.
std::vector<Crack> find_cracks(const PiecewiseLinearField& field);

/// n alternating segments of length lambda / n.
SharpMinimizer build_sharp_minimizer(long n, double lambda, Variant variant, double c_wstar,
                                     double mu);

struct SegmentSearchResult {
  std::vector<double> lengths;  // all n lengths, the last one implied by the total
  double energy = 0.0;
  std::size_t levels = 0;
  std::size_t evaluations = 0;
};

struct SegmentSearchOptions {
  std::size_t resolution = 100;        // grid points per free length, >= 100
  double length_tol = 1e-9;            // stop once the search box is this narrow
  std::size_t max_levels = 60;
  std::size_t max_evaluations = 4'000'000'000;
};

/// Exhaustive nested-grid minimisation of the n-segment energy
///   n c_wstar + mu (lambda-1)^2 / (6 lambda^3) * sum_j l_j^3
/// over l_1..l_{n-1} >= 0 with sum <= lambda (2 <= n <= 6). Each level scans
/// the full tensor grid of the current box, then shrinks the box around the
/// best point. Throws BudgetExceeded if levels or evaluations run out.
SegmentSearchResult brute_force_segments(long n, double lambda, double c_wstar, double mu,
                                         const SegmentSearchOptions& options = {});

/// Slope-one piece of the deformation f: f(x) = y_start + (x - x_start) on [x_start, x_end].
struct DeformationPiece {
  double x_start = 0.0;
  double x_end = 0.0;
  double y_start = 0.0;
  double y_end = 0.0;
};

struct DeformationJump {
  double material_position = 0.0;
  double lower = 0.0;  // f just before the crack (or at x = 0)
  double upper = 0.0;  // f just after the crack (or at x = 1)
};

struct DeformationGraph {
  std::vector<DeformationPiece> pieces;
  std::vector<DeformationJump> jumps;
};

/// Inverts h on its slope-one pieces. Every maximal plateau of h becomes a
/// jump of f. Throws DomainError on slopes outside {0,1} or broken boundary values.
DeformationGraph reconstruct_deformation(const PiecewiseLinearField& field);

}  // namespace invfrac
