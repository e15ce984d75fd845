#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "invfrac/discrete.hpp"
#include "invfrac/harness.hpp"
#include "invfrac/sharp_interface.hpp"
#include "invfrac/solver.hpp"

namespace invfrac {

// Field files are line oriented:
//
//   # comment lines are ignored
//   lambda <load>
//   kind <piecewise_constant | piecewise_linear | discrete_H | discrete_h>
//   <y> <value>
//   ...
//
// piecewise_constant lists the left end and value of every subinterval,
// piecewise_linear lists knots, discrete kinds list every grid node.
// Numbers are written with 17 significant digits so files round-trip exactly.

using AnyField = std::variant<PiecewiseConstantField, PiecewiseLinearField, DiscreteField>;

void write_field(std::ostream& os, const PiecewiseConstantField& field);
void write_field(std::ostream& os, const PiecewiseLinearField& field);
void write_field(std::ostream& os, const DiscreteField& field);

/// Throws ParseError on malformed input.
AnyField read_field(std::istream& is);

/// 12 significant digits; NaN becomes an empty cell, infinities "inf"/"-inf".
std::string format_number(double v);

/// RFC 4180 quoting: fields holding commas, quotes or line breaks are quoted.
std::string csv_escape(std::string_view field);

void write_csv(std::ostream& os, std::span<const std::string> header,
               std::span<const std::vector<std::string>> rows);

void write_discrete_csv(std::ostream& os, const DiscreteField& field);

/// Columns lambda, mu, n, V_n, x, variant; one row per minimiser.
void write_sharp_csv(std::ostream& os, std::span<const SharpMinimizer> minimizers, double mu,
                     double x);
void write_cracks_csv(std::ostream& os, std::span<const SharpMinimizer> minimizers);
void write_deformation_csv(std::ostream& os, const DeformationGraph& graph);
void write_scan_csv(std::ostream& os, const ScanReport& report);
void write_sweep_csv(std::ostream& os, const SweepReport& report);

std::string sharp_json(std::span<const SharpMinimizer> minimizers, double lambda, double mu,
                       double c_wstar, double x, const std::string& model);
std::string solve_json(const SolveResult& result, const SolveSettings& settings,
                       const std::string& model);
std::string sweep_json(const SweepReport& report);
std::string scan_json(const ScanReport& report);
std::string deformation_json(const DeformationGraph& graph);

/// Short number for file names: 6 significant digits, e.g. "1.5", "200", "0.01".
std::string file_number(double v);

/// "sweep_I_lambda1.4_mu0" style stem for sweep outputs.
std::string sweep_file_stem(const SweepReport& report);

}  // namespace invfrac
