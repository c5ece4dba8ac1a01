#include "pickpeak/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <span>
#include <sstream>

#include <CLI11.hpp>

#include "pickpeak/expr_json.hpp"

namespace pickpeak::cli {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& message) { throw Error(ErrorKind::schema, message); }

std::vector<Complex> complex_list(const json& doc, const char* key) {
  const json& arr = doc[key];
  if (!arr.is_array()) schema_error(std::string(key) + ": expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(complex_from_json(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> angle_list(const json& doc) {
  const json& arr = doc["boundary_set"];
  if (!arr.is_array()) schema_error("boundary_set: expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "boundary_set[" + std::to_string(i) + "]";
    if (!arr[i].is_object() || !arr[i].contains("angle_turns") || !arr[i]["angle_turns"].is_number())
      schema_error(where + ".angle_turns: expected a number");
    out.push_back(arr[i]["angle_turns"].get<double>());
  }
  return out;
}

json certificate_json(const NormCertificate& cert) {
  json history = json::array();
  for (const auto& [size, sup] : cert.refinement_history) history.push_back({{"grid_size", size}, {"sup", sup}});
  return {{"grid_size", cert.grid_size},
          {"boundary_sup", cert.boundary_sup},
          {"converged", cert.converged},
          {"tolerance", cert.tolerance},
          {"focus_sup", cert.focus_sup},
          {"refinement_history", std::move(history)}};
}

json complex_array(const std::vector<Complex>& values) {
  json arr = json::array();
  for (const Complex& c : values) arr.push_back(complex_to_json(c));
  return arr;
}

std::vector<double> residuals_at(const AnalyticExpr& f, std::span<const Complex> points,
                                 std::span<const Complex> values) {
  std::vector<double> out;
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back(std::abs(eval(f, points[i]) - values[i]));
  return out;
}

json budget_json(const BudgetReport& b) {
  return {{"epsilon_internal", b.epsilon_internal},
          {"measured_m", b.measured_m},
          {"predicted_bound", b.predicted_bound},
          {"step1_sup", b.step1_sup},
          {"correction_sum", b.correction_sum},
          {"sequence_index", b.sequence_index},
          {"primitive_sharpness_level", b.primitive_level},
          {"primitive_power_log2", b.primitive_power_log2}};
}

void fill_combined(json& report, const CombinedSolution& s, const ProblemDocument& doc) {
  report["solution"] = expr_to_json(s.F);
  report["certificate"] = certificate_json(s.certificate);
  report["grid_sup"] = {{"grid", doc.grid}, {"sup", grid_sup(s.F, doc.grid)}};
  report["residuals"] = {{"boundary", s.boundary_residuals}, {"interior", s.interior_residuals}};
  report["sigma"] = complex_array(s.sigma);
  report["budget_report"] = budget_json(s.budget_report);
}

void write_plot(std::ostream& out, const AnalyticExpr& f, std::size_t grid) {
  out << "theta_turns,abs_F,re_F,im_F\n" << std::setprecision(17);
  for (std::size_t j = 0; j < grid; ++j) {
    const double theta = static_cast<double>(j) / grid;
    const Complex v = eval(f, circle_point(theta));
    out << theta << ',' << std::abs(v) << ',' << v.real() << ',' << v.imag() << '\n';
  }
}

}  // namespace

PickData ProblemDocument::interior() const {
  if (!interior_nodes || !interior_targets) schema_error("interior_nodes and interior_targets are required");
  try {
    return PickData(*interior_nodes, *interior_targets);
  } catch (const Error& e) {
    schema_error(std::string("interior data: ") + e.what());
  }
}

BoundaryData ProblemDocument::boundary() const {
  if (!boundary_set || !boundary_values) schema_error("boundary_set and boundary_values are required");
  try {
    return BoundaryData(FiniteBoundarySet(*boundary_set), *boundary_values);
  } catch (const Error& e) {
    schema_error(std::string("boundary data: ") + e.what());
  }
}

ProblemDocument parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(e.what());
  }
  if (!doc.is_object()) schema_error("problem document must be a JSON object");
  ProblemDocument out;
  if (doc.contains("boundary_set")) out.boundary_set = angle_list(doc);
  if (doc.contains("boundary_values")) out.boundary_values = complex_list(doc, "boundary_values");
  if (doc.contains("interior_nodes")) out.interior_nodes = complex_list(doc, "interior_nodes");
  if (doc.contains("interior_targets")) out.interior_targets = complex_list(doc, "interior_targets");
  if (out.boundary_set.has_value() != out.boundary_values.has_value())
    schema_error("boundary_set and boundary_values must appear together");
  if (out.interior_nodes.has_value() != out.interior_targets.has_value())
    schema_error("interior_nodes and interior_targets must appear together");
  if (out.boundary_set && out.boundary_set->size() != out.boundary_values->size())
    schema_error("boundary_values: length differs from boundary_set");
  if (out.interior_nodes && out.interior_nodes->size() != out.interior_targets->size())
    schema_error("interior_targets: length differs from interior_nodes");
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number() || !(doc["epsilon"].get<double>() > 0.0))
      schema_error("epsilon: expected a positive number");
    out.epsilon = doc["epsilon"].get<double>();
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0.0)) schema_error("tol: expected a positive number");
    out.tol = doc["tol"].get<double>();
  }
  if (doc.contains("grid")) {
    if (!doc["grid"].is_number_unsigned() || doc["grid"].get<std::size_t>() == 0)
      schema_error("grid: expected a positive integer");
    out.grid = doc["grid"].get<std::size_t>();
  }
  return out;
}

json cmd_pick_check(const ProblemDocument& doc) {
  const auto matrix = build_pick_matrix(doc.interior());
  const auto psd = is_psd(matrix, doc.tol);
  return {{"command", "pick-check"},
          {"verdict", to_string(psd.verdict)},
          {"min_eigenvalue", psd.min_eigenvalue},
          {"order", matrix.order()}};
}

json cmd_pick_solve(const ProblemDocument& doc) {
  const PickData data = doc.interior();
  const auto result = solve_pick(data, doc.tol);
  return {{"command", "pick-solve"},
          {"verdict", "solved"},
          {"marginal", result.marginal},
          {"solution", expr_to_json(result.solution)},
          {"residuals", {{"interior", result.residuals}}},
          {"certificate", certificate_json(result.norm_certificate)}};
}

json cmd_pick_minnorm(const ProblemDocument& doc) {
  const PickData data = doc.interior();
  return {{"command", "pick-minnorm"},
          {"verdict", "solved"},
          {"minimal_norm", data.empty() ? 0.0 : minimal_norm(data, doc.tol)}};
}

json cmd_combined(const ProblemDocument& doc, std::ostream* plot) {
  if (!doc.epsilon) schema_error("epsilon is required for combined problems");
  const CombinedProblem problem(doc.boundary(), doc.interior(), *doc.epsilon);
  const auto solution = solve_combined(problem, doc.tol, {doc.grid});
  json report{{"command", "combined"}, {"verdict", "solved"}};
  fill_combined(report, solution, doc);
  if (plot != nullptr) write_plot(*plot, solution.F, doc.grid);
  return report;
}

json cmd_certify(const ProblemDocument& doc, const AnalyticExpr& expr, int& exit_code) {
  json report{{"command", "certify"}};
  std::vector<Complex> focus;
  std::vector<double> boundary_res;
  std::vector<double> interior_res;
  if (doc.has_boundary()) {
    const BoundaryData b = doc.boundary();
    focus = b.set().focus_points();
    boundary_res = residuals_at(expr, b.set().points(), b.values());
  }
  if (doc.has_interior()) {
    const PickData p = doc.interior();
    interior_res = residuals_at(expr, p.nodes(), p.targets());
  }
  const auto cert = boundary_sup(expr, doc.tol, focus);
  report["certificate"] = certificate_json(cert);
  report["grid_sup"] = {{"grid", doc.grid}, {"sup", std::max(grid_sup(expr, doc.grid), cert.focus_sup)}};
  report["residuals"] = {{"boundary", boundary_res}, {"interior", interior_res}};

  std::vector<std::string> mismatches;
  for (const auto* list : {&boundary_res, &interior_res}) {
    for (double r : *list) {
      if (r > doc.tol) {
        mismatches.push_back("residual " + std::to_string(r) + " exceeds tol");
        break;
      }
    }
  }
  if (doc.epsilon && cert.boundary_sup > 1.0 + *doc.epsilon + doc.tol)
    mismatches.push_back("sup norm exceeds 1 + epsilon");
  report["verdict"] = mismatches.empty() ? "certified" : "mismatch";
  if (!mismatches.empty()) report["mismatches"] = mismatches;
  exit_code = mismatches.empty() ? kExitOk : kExitCertificationFailed;
  return report;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::schema:
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
      return kExitSchema;
    case ErrorKind::infeasible:
    case ErrorKind::unsolvable:
      return kExitInfeasible;
    case ErrorKind::search_exhausted:
      return kExitSearchExhausted;
    case ErrorKind::certification_failed:
      return kExitCertificationFailed;
    default:
      return kExitFailure;
  }
}

CommandOutcome execute(std::string_view command, std::string_view input_text, const CommandOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutcome outcome;
  try {
    ProblemDocument doc = parse_problem(input_text);
    if (options.grid) doc.grid = *options.grid;
    if (options.tol) doc.tol = *options.tol;
    if (command == "pick-check") {
      outcome.report = cmd_pick_check(doc);
    } else if (command == "pick-solve") {
      outcome.report = cmd_pick_solve(doc);
    } else if (command == "pick-minnorm") {
      outcome.report = cmd_pick_minnorm(doc);
    } else if (command == "combined") {
      outcome.report = cmd_combined(doc, options.plot);
    } else if (command == "certify") {
      if (!options.expression_text) schema_error("certify needs an expression document");
      json expr_doc;
      try {
        expr_doc = json::parse(*options.expression_text);
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, e.what());
      }
      const json& node = expr_doc.contains("solution") ? expr_doc["solution"] : expr_doc;
      outcome.report = cmd_certify(doc, expr_from_json(node), outcome.exit_code);
    } else {
      schema_error("unknown command '" + std::string(command) + "'");
    }
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.kind());
    outcome.report = {{"command", std::string(command)},
                      {"verdict", to_string(e.kind())},
                      {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    if (const auto* infeasible = dynamic_cast<const InfeasibleError*>(&e)) {
      outcome.report["min_eigenvalue"] = infeasible->psd().min_eigenvalue;
      outcome.report["psd_verdict"] = to_string(infeasible->psd().verdict);
    } else if (const auto* unsolvable = dynamic_cast<const UnsolvableError*>(&e)) {
      outcome.report["failing_depth"] = unsolvable->depth();
    } else if (const auto* failed = dynamic_cast<const CertificationError*>(&e)) {
      try {
        fill_combined(outcome.report, failed->solution(), parse_problem(input_text));
      } catch (const Error&) {
      }
    }
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  outcome.report["timing"] = {{"seconds", elapsed.count()}};
  return outcome;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::schema, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Pick and peak interpolation in the disc algebra"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string plot;
  std::string expr_path;
  std::size_t grid = 0;
  double tol = 0.0;

  for (const char* name : {"pick-check", "pick-solve", "pick-minnorm", "combined", "certify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--input", input, "Problem document (JSON)")->required();
    sub->add_option("--output", output, "Report file (default: stdout)");
    sub->add_option("--grid", grid, "Boundary grid size");
    sub->add_option("--tol", tol, "Tolerance");
    if (std::string_view(name) == "combined") sub->add_option("--plot", plot, "CSV of F sampled on the grid");
    if (std::string_view(name) == "certify")
      sub->add_option("--expr", expr_path, "Expression or report document to certify")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  CommandOptions options;
  if (grid > 0) options.grid = grid;
  if (tol > 0.0) options.tol = tol;

  CommandOutcome outcome;
  std::ofstream plot_stream;
  try {
    const std::string text = read_file(input);
    if (!expr_path.empty()) options.expression_text = read_file(expr_path);
    if (!plot.empty()) {
      plot_stream.open(plot);
      if (!plot_stream) throw Error(ErrorKind::schema, "cannot write '" + plot + "'");
      options.plot = &plot_stream;
    }
    outcome = execute(command, text, options);
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.kind());
    outcome.report = {{"command", command},
                      {"verdict", to_string(e.kind())},
                      {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
  }

  const std::string text = outcome.report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "cannot write '" << output << "'\n";
      return kExitFailure;
    }
    out << text;
  }
  return outcome.exit_code;
}

}  // namespace pickpeak::cli
