#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "invfrac/discrete.hpp"
#include "invfrac/material.hpp"
#include "invfrac/sharp_interface.hpp"
#include "invfrac/solver.hpp"

namespace invfrac {

struct SweepRow {
  double epsilon = 0.0;
  double energy = 0.0;           // E_eps or U_eps
  double rescaled_energy = 0.0;  // I_eps or V_eps
  std::size_t transition_count = 0;
  /// I: trapezoid L1 distance of H; V: L1 distance of the slopes.
  double l1_distance_to_sharp = 0.0;
  /// V only: L2 distance of the slopes (discrete H1 seminorm). NaN for I.
  double h1_seminorm_distance = 0.0;
  /// V only: sup-norm distance of h. NaN for I.
  double sup_distance = 0.0;
  std::string nearest_candidate;
  double lower_bound = 0.0;  // discrete Modica-Mortola bound
  double upper_bound = 0.0;  // best rescaled energy among mollified sharp candidates (inf if none)
  std::size_t iterations = 0;
  bool converged = false;
  bool suspect = false;  // sandwich violated
  std::string start;
};

struct SweepReport {
  Functional functional = Functional::E;
  double lambda = 1.0;
  double mu = 0.0;
  std::string model;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::size_t max_iterations = 0;
  double c_wstar = 0.0;
  double sharp_energy = 0.0;  // I or V of the reference sharp fields (inf if none is admissible)
  long sharp_crack_count = 0;
  std::vector<std::string> candidates;
  std::vector<SweepRow> rows;
  std::vector<DiscreteField> minimizers;  // one per row

  /// Last two rows have non-increasing distance, allowing one inversion of <= 5 %.
  bool distances_settle() const;
  bool all_converged() const;
};

inline constexpr double kLowerBoundSlack = 0.02;

/// Epsilon sweep for the inverse-stretch functional. Epsilons must be positive
/// and strictly decreasing; each row is warm-started from the previous
/// minimiser on top of the usual multistart set.
SweepReport gamma_sweep_I(const MaterialModel& model, double lambda, std::span<const double> epsilons,
                          std::size_t grid, const SolveSettings& base = {});

/// Epsilon sweep for the foundation-coupled functional, measured against the
/// two sharp minimisers with crack_count(c_wstar, mu, lambda) kinks.
SweepReport gamma_sweep_V(const MaterialModel& model, double lambda, double mu,
                          std::span<const double> epsilons, std::size_t grid,
                          const SolveSettings& base = {});

struct ScanRow {
  double lambda = 0.0;
  double x = 0.0;  // real-valued optimum of V_n over n
  long n = 0;
  double energy = 0.0;                 // V_n
  std::vector<double> crack_positions;  // material positions, variant A
};

struct ScanReport {
  double mu = 0.0;
  std::string model;
  double c_wstar = 0.0;
  std::vector<ScanRow> rows;
};

/// Crack count and V_n for lambda = lo + k step strictly inside (lo, hi), lo >= 1.
/// Throws DomainError on an invalid range; throws std::logic_error if the
/// computed staircase ever decreases.
ScanReport crack_scan(double c_wstar, double lambda_lo, double lambda_hi, double step, double mu,
                      std::string model_name = "custom");

ScanReport crack_scan(const MaterialModel& model, double lambda_lo, double lambda_hi, double step,
                      double mu);

}  // namespace invfrac
