#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "invfrac/discrete.hpp"
#include "invfrac/material.hpp"

namespace invfrac {

enum class Functional {
  E,  // inverse-stretch energy with unit-mass constraint, reported as I_eps = E_eps / eps
  V,  // foundation-coupled energy with h(0) = 0, h(lambda) = 1, reported as V_eps = U_eps / eps
};

const char* functional_name(Functional f) noexcept;

enum class StartStrategy { Homogeneous, MollifiedSharp, Random };

struct SolveSettings {
  Functional functional = Functional::E;
  double lambda = 1.0;
  double epsilon = 0.05;
  double mu = 0.0;
  std::size_t grid = 1000;  // intervals N
  std::size_t max_iterations = 20000;
  double tolerance = 1e-6;  // sup-norm of the projected gradient density
  double armijo = 1e-4;
  double step_min = 1e-12;
  double step_max = 1e6;
  std::size_t max_backtracks = 60;
  std::size_t memory = 1;  // nonmonotone line-search window; 1 is plain Armijo
  std::size_t newton_cg_iterations = 50;  // per subspace step; 0 disables the Newton-CG phase
  std::vector<StartStrategy> strategies = {StartStrategy::Homogeneous,
                                           StartStrategy::MollifiedSharp, StartStrategy::Random};
  std::size_t random_starts = 2;
  double random_amplitude = 0.25;
  long sharp_window = 1;  // sharp candidates with crack counts n* - w .. n* + w
  std::uint64_t seed = 1;
  bool record_history = false;

  /// Throws DomainError on non-positive lambda, epsilon, tolerance or grid < 16, or mu < 0.
  void validate() const;
};

struct SolveResult {
  DiscreteField field;           // H for E, h for V
  double energy = 0.0;           // E_eps or U_eps
  double rescaled_energy = 0.0;  // I_eps or V_eps
  std::size_t iterations = 0;
  std::size_t transition_count = 0;
  bool converged = false;
  double projected_gradient_norm = 0.0;
  std::string start;
  std::vector<double> history;  // rescaled energy of every accepted iterate
};

struct NamedStart {
  std::string label;
  DiscreteField field;
};

/// Starting fields for the requested strategies: the homogeneous state,
/// mollified sharp minimisers around the predicted crack count, and seeded
/// random perturbations of the homogeneous state.
std::vector<NamedStart> make_starts(const MaterialModel& model, const SolveSettings& settings);

/// Linear interpolation of a field onto `intervals` uniform intervals.
DiscreteField resample(const DiscreteField& field, std::size_t intervals);

/// Single projected-gradient run from `init`.
///
/// E is descended in the nodal values of H; V in the cell slopes of h, where
/// the constraints become the same weighted simplex-like set as for H. Steps
/// are Barzilai-Borwein, safeguarded by Armijo backtracking along the
/// projection arc, so every accepted iterate lowers the energy.
SolveResult descend(const MaterialModel& model, const SolveSettings& settings,
                    const DiscreteField& init, std::string label = "init");

/// Multistart minimisation: runs `descend` from every start in make_starts
/// plus `extra_starts`, returning the lowest rescaled energy. Energies within
/// 1e-12 relative are ties: a converged run beats one that is not, else the first wins.
SolveResult minimize(const MaterialModel& model, const SolveSettings& settings,
                     std::span<const NamedStart> extra_starts = {});

}  // namespace invfrac
