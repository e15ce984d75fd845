#include "invfrac/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "invfrac/errors.hpp"

namespace invfrac {
namespace {

using nlohmann::json;

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_pairs(std::ostream& os, double lambda, const char* kind, const std::vector<double>& ys,
                 const std::vector<double>& vs) {
  os << "# invfrac field\n";
  os << "lambda " << exact(lambda) << "\n";
  os << "kind " << kind << "\n";
  for (std::size_t i = 0; i < ys.size(); ++i) os << exact(ys[i]) << " " << exact(vs[i]) << "\n";
}

}  // namespace

void write_field(std::ostream& os, const PiecewiseConstantField& field) {
  std::vector<double> lefts{0.0};
  lefts.insert(lefts.end(), field.breakpoints.begin(), field.breakpoints.end());
  write_pairs(os, field.lambda, "piecewise_constant", lefts, field.values);
}

void write_field(std::ostream& os, const PiecewiseLinearField& field) {
  write_pairs(os, field.load, "piecewise_linear", field.knots, field.values);
}

void write_field(std::ostream& os, const DiscreteField& field) {
  std::vector<double> ys(field.values.size());
  for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = field.node(j);
  write_pairs(os, field.lambda,
              field.kind == FieldKind::InverseStretch ? "discrete_H" : "discrete_h", ys,
              field.values);
}

AnyField read_field(std::istream& is) {
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::string kind;
  std::vector<double> ys;
  std::vector<double> vs;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("field file line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "lambda") {
      if (!(ls >> lambda)) fail("bad lambda");
    } else if (head == "kind") {
      if (!(ls >> kind)) fail("bad kind");
    } else {
      std::istringstream pair(line);
      double y = 0.0;
      double v = 0.0;
      if (!(pair >> y >> v)) fail("expected '<y> <value>'");
      std::string rest;
      if (pair >> rest) fail("trailing data");
      ys.push_back(y);
      vs.push_back(v);
    }
  }
  if (!std::isfinite(lambda)) throw ParseError("field file: missing lambda header");
  if (ys.empty()) throw ParseError("field file: no samples");

  if (kind == "piecewise_constant") {
    if (ys.front() != 0.0) throw ParseError("field file: first subinterval must start at 0");
    PiecewiseConstantField f{lambda, std::vector<double>(ys.begin() + 1, ys.end()), vs};
    f.validate();
    return f;
  }
  if (kind == "piecewise_linear") {
    PiecewiseLinearField f{lambda, ys, vs};
    f.validate();
    return f;
  }
  if (kind == "discrete_H" || kind == "discrete_h") {
    DiscreteField f{kind == "discrete_H" ? FieldKind::InverseStretch : FieldKind::InverseDeformation,
                    lambda, vs};
    if (vs.size() < 2) throw ParseError("field file: a discrete field needs at least two samples");
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (std::abs(ys[j] - f.node(j)) > 1e-9 * lambda) {
        throw ParseError("field file: discrete samples must sit on the uniform grid");
      }
    }
    return f;
  }
  throw ParseError("field file: unknown kind '" + kind + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& os, std::span<const std::string> header,
               std::span<const std::vector<std::string>> rows) {
  auto line = [&os](std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << csv_escape(cells[i]);
    }
    os << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_discrete_csv(std::ostream& os, const DiscreteField& field) {
  const std::vector<std::string> header{"y", "value"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(field.values.size());
  for (std::size_t j = 0; j < field.values.size(); ++j) {
    rows.push_back({format_number(field.node(j)), format_number(field.values[j])});
  }
  write_csv(os, header, rows);
}

void write_sharp_csv(std::ostream& os, std::span<const SharpMinimizer> minimizers, double mu,
                     double x) {
  const std::vector<std::string> header{"lambda", "mu", "n", "V_n", "x", "variant"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : minimizers) {
    rows.push_back({format_number(m.field.load), format_number(mu), std::to_string(m.n),
                    format_number(m.energy), format_number(x), variant_name(m.variant)});
  }
  write_csv(os, header, rows);
}

void write_cracks_csv(std::ostream& os, std::span<const SharpMinimizer> minimizers) {
  const std::vector<std::string> header{"variant", "material_position", "opening", "y_start",
                                        "y_end"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : minimizers) {
    for (const auto& c : m.cracks) {
      rows.push_back({variant_name(m.variant), format_number(c.material_position),
                      format_number(c.opening), format_number(c.y_start), format_number(c.y_end)});
    }
  }
  write_csv(os, header, rows);
}

void write_deformation_csv(std::ostream& os, const DeformationGraph& graph) {
  const std::vector<std::string> header{"type", "x_start", "x_end", "y_start", "y_end"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : graph.pieces) {
    rows.push_back({"piece", format_number(p.x_start), format_number(p.x_end),
                    format_number(p.y_start), format_number(p.y_end)});
  }
  for (const auto& j : graph.jumps) {
    rows.push_back({"jump", format_number(j.material_position), format_number(j.material_position),
                    format_number(j.lower), format_number(j.upper)});
  }
  write_csv(os, header, rows);
}

void write_scan_csv(std::ostream& os, const ScanReport& report) {
  const std::vector<std::string> header{"lambda", "mu", "n", "V_n", "x", "crack_positions"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows) {
    std::string positions;
    for (std::size_t i = 0; i < r.crack_positions.size(); ++i) {
      if (i) positions += ';';
      positions += format_number(r.crack_positions[i]);
    }
    rows.push_back({format_number(r.lambda), format_number(report.mu), std::to_string(r.n),
                    format_number(r.energy), format_number(r.x), positions});
  }
  write_csv(os, header, rows);
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  const std::vector<std::string> header{
      "epsilon",          "energy",     "rescaled_energy", "transition_count",
      "l1_distance",      "h1_distance", "sup_distance",   "lower_bound",
      "upper_bound",      "nearest",    "start",           "iterations",
      "converged",        "suspect"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows) {
    rows.push_back({format_number(r.epsilon), format_number(r.energy),
                    format_number(r.rescaled_energy), std::to_string(r.transition_count),
                    format_number(r.l1_distance_to_sharp), format_number(r.h1_seminorm_distance),
                    format_number(r.sup_distance), format_number(r.lower_bound),
                    format_number(r.upper_bound), r.nearest_candidate, r.start,
                    std::to_string(r.iterations), r.converged ? "true" : "false",
                    r.suspect ? "true" : "false"});
  }
  write_csv(os, header, rows);
}

std::string sharp_json(std::span<const SharpMinimizer> minimizers, double lambda, double mu,
                       double c_wstar, double x, const std::string& model) {
  json out;
  out["command"] = "sharp";
  out["metadata"] = {{"model", model}, {"lambda", lambda}, {"mu", mu}, {"c_wstar", c_wstar}};
  out["x"] = x;
  json list = json::array();
  for (const auto& m : minimizers) {
    json cracks = json::array();
    for (const auto& c : m.cracks) {
      cracks.push_back({{"material_position", c.material_position},
                        {"opening", c.opening},
                        {"y_start", c.y_start},
                        {"y_end", c.y_end}});
    }
    list.push_back({{"variant", variant_name(m.variant)},
                    {"n", m.n},
                    {"segment_length", m.segment_length},
                    {"V_n", m.energy},
                    {"kinks", m.field.kink_count()},
                    {"knots", m.field.knots},
                    {"values", m.field.values},
                    {"cracks", cracks}});
  }
  out["minimizers"] = list;
  return out.dump(2);
}

std::string solve_json(const SolveResult& result, const SolveSettings& settings,
                       const std::string& model) {
  json out;
  out["command"] = "minimize";
  out["metadata"] = {{"model", model},
                     {"functional", functional_name(settings.functional)},
                     {"lambda", settings.lambda},
                     {"mu", settings.mu},
                     {"epsilon", settings.epsilon},
                     {"grid", settings.grid},
                     {"tolerance", settings.tolerance},
                     {"max_iterations", settings.max_iterations},
                     {"random_starts", settings.random_starts},
                     {"seed", settings.seed}};
  out["energy"] = number_or_null(result.energy);
  out["rescaled_energy"] = number_or_null(result.rescaled_energy);
  out["transitions"] = result.transition_count;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["projected_gradient_norm"] = number_or_null(result.projected_gradient_norm);
  out["start"] = result.start;
  return out.dump(2);
}

std::string sweep_json(const SweepReport& report) {
  json out;
  out["command"] = "sweep";
  out["metadata"] = {{"functional", report.functional == Functional::E ? "I" : "V"},
                     {"model", report.model},
                     {"lambda", report.lambda},
                     {"mu", report.mu},
                     {"grid", report.grid},
                     {"seed", report.seed},
                     {"tolerance", report.tolerance},
                     {"max_iterations", report.max_iterations},
                     {"c_wstar", report.c_wstar},
                     {"sharp_energy", number_or_null(report.sharp_energy)},
                     {"sharp_crack_count", report.sharp_crack_count},
                     {"candidates", report.candidates}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"energy", number_or_null(r.energy)},
                    {"rescaled_energy", number_or_null(r.rescaled_energy)},
                    {"transition_count", r.transition_count},
                    {"l1_distance", number_or_null(r.l1_distance_to_sharp)},
                    {"h1_distance", number_or_null(r.h1_seminorm_distance)},
                    {"sup_distance", number_or_null(r.sup_distance)},
                    {"lower_bound", number_or_null(r.lower_bound)},
                    {"upper_bound", number_or_null(r.upper_bound)},
                    {"nearest", r.nearest_candidate},
                    {"start", r.start},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"suspect", r.suspect}});
  }
  out["rows"] = rows;
  out["distances_settle"] = report.distances_settle();
  return out.dump(2);
}

std::string scan_json(const ScanReport& report) {
  json out;
  out["command"] = "scan";
  out["metadata"] = {{"model", report.model}, {"mu", report.mu}, {"c_wstar", report.c_wstar}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"lambda", r.lambda},
                    {"mu", report.mu},
                    {"n", r.n},
                    {"V_n", r.energy},
                    {"x", r.x},
                    {"crack_positions", r.crack_positions}});
  }
  out["rows"] = rows;
  return out.dump(2);
}

std::string deformation_json(const DeformationGraph& graph) {
  json out;
  json pieces = json::array();
  for (const auto& p : graph.pieces) {
    pieces.push_back(
        {{"x_start", p.x_start}, {"x_end", p.x_end}, {"y_start", p.y_start}, {"y_end", p.y_end}});
  }
  json jumps = json::array();
  for (const auto& j : graph.jumps) {
    jumps.push_back(
        {{"material_position", j.material_position}, {"lower", j.lower}, {"upper", j.upper}});
  }
  out["pieces"] = pieces;
  out["jumps"] = jumps;
  return out.dump(2);
}

std::string file_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string sweep_file_stem(const SweepReport& report) {
  return std::string("sweep_") + (report.functional == Functional::E ? "I" : "V") + "_lambda" +
         file_number(report.lambda) + "_mu" + file_number(report.mu);
}

}  // namespace invfrac
