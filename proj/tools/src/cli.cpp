#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "invfrac/errors.hpp"
#include "invfrac/harness.hpp"
#include "invfrac/io.hpp"
#include "invfrac/material.hpp"
#include "invfrac/sharp_interface.hpp"
#include "invfrac/solver.hpp"

namespace invfrac::cli {
namespace {

namespace fs = std::filesystem;

struct StrictFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MaterialModel build_model(const RunConfig& cfg) {
  if (!cfg.coeffs.empty()) {
    return polynomial_model("custom", cfg.coeffs, GrowthConstants{cfg.growth_c, cfg.growth_m});
  }
  return model_by_name(cfg.model);
}

bool wants(const RunConfig& cfg, const std::string& format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

class Writer {
 public:
  Writer(const RunConfig& cfg, std::ostream& out) : dir_(cfg.output_dir), out_(out) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(file);
    if (!file) throw std::runtime_error("write failed: " + path.string());
    out_ << "wrote " << path.string() << "\n";
  }

  void write_text(const std::string& name, const std::string& text) {
    write(name, [&](std::ostream& os) { os << text << "\n"; });
  }

 private:
  fs::path dir_;
  std::ostream& out_;
};

SolveSettings solve_settings(const RunConfig& cfg) {
  SolveSettings s;
  s.lambda = cfg.lambda;
  s.mu = cfg.mu;
  s.grid = static_cast<std::size_t>(cfg.grid);
  s.tolerance = cfg.tolerance;
  s.max_iterations = static_cast<std::size_t>(cfg.max_iterations);
  s.random_starts = static_cast<std::size_t>(cfg.random_starts);
  s.seed = cfg.seed;
  return s;
}

Functional parse_functional(const std::string& name) {
  if (name == "E" || name == "I") return Functional::E;
  if (name == "V") return Functional::V;
  throw DomainError("functional must be E (alias I) or V, got '" + name + "'");
}

int cmd_cwstar(const RunConfig& cfg, std::ostream& out) {
  const auto model = build_model(cfg);
  const auto q = c_wstar(model, cfg.quad_tol);
  char line[128];
  out << "model " << model.name() << "\n";
  std::snprintf(line, sizeof line, "c_wstar %.15g\n", q.value);
  out << line;
  std::snprintf(line, sizeof line, "error_estimate %.3g\n", q.error_estimate);
  out << line;
  return kExitOk;
}

int cmd_sharp(const RunConfig& cfg, std::ostream& out) {
  const auto model = build_model(cfg);
  const double c = c_wstar(model, cfg.quad_tol).value;
  const long n = crack_count(c, cfg.mu, cfg.lambda);
  const double x = crack_count_estimate(c, cfg.mu, cfg.lambda);
  std::vector<SharpMinimizer> minimizers;
  for (Variant v : {Variant::A, Variant::B}) {
    minimizers.push_back(build_sharp_minimizer(n, cfg.lambda, v, c, cfg.mu));
  }

  out << "n " << n << "\n"
      << "x " << format_number(x) << "\n"
      << "energy " << format_number(minimizers.front().energy) << "\n";

  const std::string stem =
      "sharp_lambda" + file_number(cfg.lambda) + "_mu" + file_number(cfg.mu);
  Writer w(cfg, out);
  if (wants(cfg, "csv")) {
    w.write(stem + ".csv", [&](std::ostream& os) { write_sharp_csv(os, minimizers, cfg.mu, x); });
    w.write(stem + "_cracks.csv", [&](std::ostream& os) { write_cracks_csv(os, minimizers); });
  }
  if (wants(cfg, "json")) {
    w.write_text(stem + ".json", sharp_json(minimizers, cfg.lambda, cfg.mu, c, x, model.name()));
  }
  for (const auto& m : minimizers) {
    const std::string tag = stem + "_" + variant_name(m.variant);
    w.write(tag + ".field", [&](std::ostream& os) { write_field(os, m.field); });
    const auto graph = reconstruct_deformation(m.field);
    if (wants(cfg, "csv")) {
      w.write(tag + "_deformation.csv", [&](std::ostream& os) { write_deformation_csv(os, graph); });
    }
    if (wants(cfg, "json")) w.write_text(tag + "_deformation.json", deformation_json(graph));
  }
  return kExitOk;
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out) {
  if (cfg.epsilons.size() != 1) throw DomainError("minimize takes exactly one epsilon");
  const auto model = build_model(cfg);
  SolveSettings s = solve_settings(cfg);
  s.functional = parse_functional(cfg.functional);
  s.epsilon = cfg.epsilons.front();
  if (cfg.k >= 0.0) s.mu = cfg.k / s.epsilon;

  const SolveResult r = minimize(model, s);
  out << "functional " << functional_name(s.functional) << "\n"
      << "energy " << format_number(r.energy) << "\n"
      << "rescaled_energy " << format_number(r.rescaled_energy) << "\n"
      << "transitions " << r.transition_count << "\n"
      << "iterations " << r.iterations << "\n"
      << "converged " << (r.converged ? "true" : "false") << "\n"
      << "start " << r.start << "\n";

  const std::string stem = std::string("minimize_") + functional_name(s.functional) + "_lambda" +
                           file_number(s.lambda) + "_mu" + file_number(s.mu) + "_eps" +
                           file_number(s.epsilon);
  Writer w(cfg, out);
  if (wants(cfg, "csv")) {
    w.write(stem + ".csv", [&](std::ostream& os) { write_discrete_csv(os, r.field); });
  }
  if (wants(cfg, "json")) w.write_text(stem + ".json", solve_json(r, s, model.name()));
  w.write(stem + ".field", [&](std::ostream& os) { write_field(os, r.field); });

  if (cfg.strict && !r.converged) throw StrictFailure("minimize: solver did not converge");
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const auto model = build_model(cfg);
  const auto report = crack_scan(model, cfg.lambda_min, cfg.lambda_max, cfg.step, cfg.mu);
  long n_min = 0;
  long n_max = 0;
  if (!report.rows.empty()) {
    n_min = report.rows.front().n;
    n_max = report.rows.back().n;
  }
  out << "points " << report.rows.size() << "\n"
      << "n_range " << n_min << " " << n_max << "\n";
  const std::string stem = "scan_mu" + file_number(cfg.mu);
  Writer w(cfg, out);
  if (wants(cfg, "csv")) w.write(stem + ".csv", [&](std::ostream& os) { write_scan_csv(os, report); });
  if (wants(cfg, "json")) w.write_text(stem + ".json", scan_json(report));
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto model = build_model(cfg);
  const Functional f = parse_functional(cfg.functional);
  const SolveSettings base = solve_settings(cfg);
  const auto grid = static_cast<std::size_t>(cfg.grid);
  const SweepReport report =
      f == Functional::E ? gamma_sweep_I(model, cfg.lambda, cfg.epsilons, grid, base)
                         : gamma_sweep_V(model, cfg.lambda, cfg.mu, cfg.epsilons, grid, base);
  for (const auto& row : report.rows) {
    out << "eps " << format_number(row.epsilon) << " rescaled " << format_number(row.rescaled_energy)
        << " transitions " << row.transition_count << " l1 "
        << format_number(row.l1_distance_to_sharp) << (row.converged ? "" : " not-converged")
        << (row.suspect ? " suspect" : "") << "\n";
  }
  const std::string stem = sweep_file_stem(report);
  Writer w(cfg, out);
  if (wants(cfg, "csv")) w.write(stem + ".csv", [&](std::ostream& os) { write_sweep_csv(os, report); });
  if (wants(cfg, "json")) w.write_text(stem + ".json", sweep_json(report));

  if (cfg.strict) {
    for (const auto& row : report.rows) {
      if (!row.converged || row.suspect) {
        throw StrictFailure("sweep: row at eps " + format_number(row.epsilon) +
                            (row.converged ? " is suspect" : " did not converge"));
      }
    }
  }
  return kExitOk;
}

PiecewiseLinearField as_inverse_deformation(const AnyField& field) {
  if (const auto* pl = std::get_if<PiecewiseLinearField>(&field)) return *pl;
  if (const auto* d = std::get_if<DiscreteField>(&field)) {
    if (d->kind == FieldKind::InverseDeformation) {
      PiecewiseLinearField pl{d->lambda, {}, d->values};
      for (std::size_t j = 0; j < d->values.size(); ++j) pl.knots.push_back(d->node(j));
      return pl.simplified();
    }
  }
  throw DomainError("reconstruct needs an inverse deformation (piecewise_linear or discrete_h)");
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw DomainError("reconstruct: --input is required");
  std::ifstream in(cfg.input);
  if (!in) throw DomainError("reconstruct: cannot open " + cfg.input);
  const auto field = as_inverse_deformation(read_field(in));
  const auto graph = reconstruct_deformation(field);
  out << "pieces " << graph.pieces.size() << "\n"
      << "jumps " << graph.jumps.size() << "\n";
  const std::string stem = fs::path(cfg.input).stem().string() + "_deformation";
  Writer w(cfg, out);
  if (wants(cfg, "csv")) {
    w.write(stem + ".csv", [&](std::ostream& os) { write_deformation_csv(os, graph); });
  }
  if (wants(cfg, "json")) w.write_text(stem + ".json", deformation_json(graph));
  return kExitOk;
}

void add_model_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--model", cfg.model, "Built-in W* model: lj, quartic or zero");
  app->add_option("--coeffs", cfg.coeffs, "Custom W* polynomial coefficients c0,c1,... (c0 = 0)")
      ->delimiter(',');
  app->add_option("--growth-c", cfg.growth_c, "Growth constant C of a custom model");
  app->add_option("--growth-m", cfg.growth_m, "Growth threshold M of a custom model");
  app->add_option("--quad-tol", cfg.quad_tol, "Absolute tolerance for the C_W* quadrature");
}

void add_output_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.output_dir, "Output directory");
  app->add_option("--format", cfg.formats, "Output formats: csv, json")->delimiter(',');
}

void add_solver_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--functional", cfg.functional, "E (alias I) or V");
  app->add_option("--grid", cfg.grid, "Grid intervals N");
  app->add_option("--tolerance", cfg.tolerance, "Projected-gradient tolerance");
  app->add_option("--max-iterations", cfg.max_iterations, "Iteration budget per start");
  app->add_option("--random-starts", cfg.random_starts, "Random multistart count");
  app->add_option("--seed", cfg.seed, "Random seed");
  app->add_flag("--strict", cfg.strict, "Exit 3 when a solve does not converge");
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("config: " + what); };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be positive");
  };
  positive(lambda, "lambda");
  if (!(mu >= 0.0) || !std::isfinite(mu)) fail("mu must be non-negative");
  for (double e : epsilons) positive(e, "eps");
  if (grid < 16) fail("grid must be at least 16");
  positive(tolerance, "tolerance");
  positive(quad_tol, "quad-tol");
  if (max_iterations < 1) fail("max-iterations must be at least 1");
  if (random_starts < 0) fail("random-starts must be non-negative");
  positive(step, "step");
  positive(growth_c, "growth-c");
  if (!(growth_m > 1.0)) fail("growth-m must exceed 1");
  if (formats.empty()) fail("at least one output format is required");
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") fail("unknown output format '" + f + "'");
  }
  parse_functional(functional);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Inverse-deformation brittle fracture: sharp-interface minimisers, "
               "regularised solves and epsilon sweeps"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Key-value config file with one [section] per command");
  app.fallthrough();  // subcommands inherit it, so --config may follow the command name

  auto* cwstar = app.add_subcommand("cwstar", "Print the surface-energy constant C_W*");
  add_model_options(cwstar, cfg);

  auto* sharp = app.add_subcommand("sharp", "Exact sharp-interface minimisers for given load");
  add_model_options(sharp, cfg);
  add_output_options(sharp, cfg);
  sharp->add_option("--lambda", cfg.lambda, "Applied stretch (> 1)");
  sharp->add_option("--mu", cfg.mu, "Foundation stiffness");

  bool k_given = false;
  auto* minimize_cmd = app.add_subcommand("minimize", "Minimise a regularised functional");
  add_model_options(minimize_cmd, cfg);
  add_output_options(minimize_cmd, cfg);
  add_solver_options(minimize_cmd, cfg);
  minimize_cmd->add_option("--lambda", cfg.lambda, "Applied stretch");
  auto* mu_opt = minimize_cmd->add_option("--mu", cfg.mu, "Rescaled foundation stiffness");
  minimize_cmd->add_option("--k", cfg.k, "Unrescaled stiffness k = eps mu")->excludes(mu_opt);
  minimize_cmd->add_option("--eps", cfg.epsilons, "Regularisation length")->delimiter(',');

  auto* scan = app.add_subcommand("scan", "Crack count and energy across a load range");
  add_model_options(scan, cfg);
  add_output_options(scan, cfg);
  scan->add_option("--mu", cfg.mu, "Foundation stiffness");
  scan->add_option("--lambda-min", cfg.lambda_min, "Open lower end of the load range (>= 1)");
  scan->add_option("--lambda-max", cfg.lambda_max, "Open upper end of the load range");
  scan->add_option("--step", cfg.step, "Load increment");

  auto* sweep = app.add_subcommand("sweep", "Epsilon sweep towards the sharp-interface limit");
  add_model_options(sweep, cfg);
  add_output_options(sweep, cfg);
  add_solver_options(sweep, cfg);
  sweep->add_option("--lambda", cfg.lambda, "Applied stretch");
  sweep->add_option("--mu", cfg.mu, "Foundation stiffness (V only)");
  sweep->add_option("--eps", cfg.epsilons, "Strictly decreasing epsilon list")->delimiter(',');

  auto* reconstruct = app.add_subcommand("reconstruct", "Deformation graph from an h field file");
  add_output_options(reconstruct, cfg);
  reconstruct->add_option("--input", cfg.input, "Field file (piecewise_linear or discrete_h)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }

  try {
    k_given = minimize_cmd->count("--k") > 0;
    if (!k_given) cfg.k = -1.0;
    const auto* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (cfg.epsilons.empty()) {
      cfg.epsilons = cfg.command == "sweep" ? std::vector<double>{0.08, 0.04, 0.02, 0.01}
                                            : std::vector<double>{0.05};
    }
    if (k_given && !(cfg.k >= 0.0)) throw DomainError("config: k must be non-negative");
    cfg.validate();

    if (cfg.command == "cwstar") return cmd_cwstar(cfg, out);
    if (cfg.command == "sharp") return cmd_sharp(cfg, out);
    if (cfg.command == "minimize") return cmd_minimize(cfg, out);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    return cmd_reconstruct(cfg, out);
  } catch (const StrictFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace invfrac::cli
