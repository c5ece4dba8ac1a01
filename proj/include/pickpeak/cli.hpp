#pragma once

// Batch front end: JSON problem documents in, JSON reports out.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pickpeak/combine.hpp"

namespace pickpeak::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitSchema = 2,
  kExitInfeasible = 3,
  kExitSearchExhausted = 4,
  kExitCertificationFailed = 5,
};

struct ProblemDocument {
  std::optional<std::vector<double>> boundary_set;
  std::optional<std::vector<Complex>> boundary_values;
  std::optional<std::vector<Complex>> interior_nodes;
  std::optional<std::vector<Complex>> interior_targets;
  std::optional<double> epsilon;
  double tol = 1e-9;
  std::size_t grid = 16384;

  bool has_boundary() const { return boundary_set.has_value(); }
  bool has_interior() const { return interior_nodes.has_value(); }
  /// Throw Error(schema) when the block is absent or its data is invalid.
  PickData interior() const;
  BoundaryData boundary() const;
};

/// Parses and validates field types and presence pairs. Errors are
/// Error(schema) with the JSON parser position or the offending field path.
ProblemDocument parse_problem(std::string_view text);

struct CommandOptions {
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  /// Receives the "theta_turns,abs_F,re_F,im_F" CSV for `combined`.
  std::ostream* plot = nullptr;
  /// Expression document for `certify`: a bare expression or a report with "solution".
  std::optional<std::string> expression_text;
};

struct CommandOutcome {
  nlohmann::json report;
  int exit_code = kExitOk;
};

nlohmann::json cmd_pick_check(const ProblemDocument& doc);
nlohmann::json cmd_pick_solve(const ProblemDocument& doc);
nlohmann::json cmd_pick_minnorm(const ProblemDocument& doc);
nlohmann::json cmd_combined(const ProblemDocument& doc, std::ostream* plot);
/// Sets `exit_code` to kExitCertificationFailed on a mismatch.
nlohmann::json cmd_certify(const ProblemDocument& doc, const AnalyticExpr& expr, int& exit_code);

/// Parses `input_text`, applies option overrides, dispatches `command` and
/// converts failures into a report plus exit code. Adds the "timing" field.
CommandOutcome execute(std::string_view command, std::string_view input_text, const CommandOptions& options);

int exit_code_for(ErrorKind kind) noexcept;

/// Command-line entry point (pick-check, pick-solve, pick-minnorm, combined, certify).
int run(int argc, const char* const* argv);

}  // namespace pickpeak::cli
