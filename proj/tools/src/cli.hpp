#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace invfrac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNotConverged = 3;

struct RunConfig {
  std::string command;
  std::string model = "lj";
  std::vector<double> coeffs;  // custom W* polynomial, overrides `model`
  double growth_c = 0.25;
  double growth_m = 2.0;
  double lambda = 1.5;
  double mu = 0.0;
  double k = -1.0;  // unrescaled foundation stiffness; mu = k / eps when set
  std::vector<double> epsilons;
  std::string functional = "E";
  long grid = 1000;
  double tolerance = 1e-6;
  long max_iterations = 20000;
  long random_starts = 2;
  std::uint64_t seed = 1;
  double quad_tol = 1e-10;
  double lambda_min = 1.0;
  double lambda_max = 2.0;
  double step = 0.01;
  std::string output_dir = ".";
  std::vector<std::string> formats = {"csv", "json"};
  std::string input;
  bool strict = false;

  /// Throws DomainError on the first invalid field.
  void validate() const;
};

/// Runs one command. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invfrac::cli
