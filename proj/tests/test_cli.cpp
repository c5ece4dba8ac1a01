#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "pickpeak/cli.hpp"
#include "pickpeak/expr_json.hpp"
#include "support.hpp"

using namespace pickpeak;
using namespace pickpeak::cli;
using nlohmann::json;

namespace {

const char* const kFixture = R"({
  "boundary_set": [{"angle_turns": 0}],
  "boundary_values": [{"re": 1, "im": 0}],
  "interior_nodes": [{"re": 0, "im": 0}],
  "interior_targets": [{"re": 0.3, "im": 0}],
  "epsilon": 0.1
})";

const char* const kInfeasible = R"({
  "boundary_set": [{"angle_turns": 0}],
  "boundary_values": [{"re": 1, "im": 0}],
  "interior_nodes": [{"re": 0, "im": 0}, {"re": 0.5, "im": 0}],
  "interior_targets": [{"re": 0, "im": 0}, {"re": 0.9, "im": 0}],
  "epsilon": 0.1
})";

const char* const kNoInterior = R"({
  "boundary_set": [{"angle_turns": 0}, {"angle_turns": 0.5}],
  "boundary_values": [{"re": 0.5, "im": 0}, {"re": 0, "im": 0.5}],
  "interior_nodes": [],
  "interior_targets": [],
  "epsilon": 0.1
})";

std::string pick_doc(const std::string& nodes, const std::string& targets) {
  return R"({"interior_nodes": )" + nodes + R"(, "interior_targets": )" + targets + "}";
}

json without_timing(json report) {
  report.erase("timing");
  return report;
}

std::string schema_message(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
    return e.what();
  }
  FAIL("expected a schema error");
  return {};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("pickpeak_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const auto p = path / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }
};

}  // namespace

TEST_CASE("parse_problem reads every field") {
  const ProblemDocument doc = parse_problem(R"({
    "boundary_set": [{"angle_turns": 0.25}], "boundary_values": [{"re": 0, "im": 1}],
    "interior_nodes": [{"re": 0.1, "im": 0.2}], "interior_targets": [{"re": 0.3, "im": -0.4}],
    "epsilon": 0.2, "tol": 1e-8, "grid": 1024})");
  CHECK(doc.boundary_set->at(0) == 0.25);
  CHECK(doc.boundary_values->at(0) == Complex(0, 1));
  CHECK(doc.interior_nodes->at(0) == Complex(0.1, 0.2));
  CHECK(doc.interior_targets->at(0) == Complex(0.3, -0.4));
  CHECK(*doc.epsilon == 0.2);
  CHECK(doc.tol == 1e-8);
  CHECK(doc.grid == 1024);
  const ProblemDocument defaults = parse_problem("{}");
  CHECK(defaults.tol == 1e-9);
  CHECK(defaults.grid == 16384);
  CHECK_FALSE(defaults.has_boundary());
  CHECK_FALSE(defaults.has_interior());
}

TEST_CASE("parse_problem diagnostics name the line or the field") {
  CHECK(schema_message("{\n  \"epsilon\": 0.1,\n  \"tol\": }").find("line 3") != std::string::npos);
  CHECK(schema_message(R"({"interior_nodes": [{"re": 0, "im": 0}, {"re": "a", "im": 0}], "interior_targets": []})")
            .find("interior_nodes[1].re") != std::string::npos);
  CHECK(schema_message(R"({"boundary_set": [{"angle": 0}], "boundary_values": [{"re": 1, "im": 0}]})")
            .find("boundary_set[0].angle_turns") != std::string::npos);
  CHECK(schema_message(R"({"interior_nodes": []})").find("together") != std::string::npos);
  CHECK(schema_message(R"({"interior_nodes": [{"re": 0, "im": 0}], "interior_targets": []})").find("length") !=
        std::string::npos);
  CHECK(schema_message(R"({"epsilon": -1})").find("epsilon") != std::string::npos);
  CHECK(schema_message(R"({"grid": 0})").find("grid") != std::string::npos);
  CHECK(schema_message("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("pick-check examples") {
  auto a = execute("pick-check", pick_doc(R"([{"re":0,"im":0}])", R"([{"re":0,"im":0}])"), {});
  CHECK(a.exit_code == kExitOk);
  CHECK(a.report["verdict"] == "psd");
  CHECK(a.report["min_eigenvalue"].get<double>() == doctest::Approx(1.0));

  auto b = execute("pick-check", pick_doc(R"([{"re":0,"im":0},{"re":0.5,"im":0}])", R"([{"re":0,"im":0},{"re":0.9,"im":0}])"), {});
  CHECK(b.report["verdict"] == "not-psd");

  auto c = execute("pick-check", pick_doc(R"([{"re":0,"im":0},{"re":0.5,"im":0}])", R"([{"re":0,"im":0},{"re":0.5,"im":0}])"), {});
  CHECK(c.report["verdict"] == "psd");
  CHECK(std::abs(c.report["min_eigenvalue"].get<double>()) < 1e-9);

  auto missing = execute("pick-check", "{}", {});
  CHECK(missing.exit_code == kExitSchema);
}

TEST_CASE("pick-solve and pick-minnorm examples") {
  auto mn = execute("pick-minnorm", pick_doc(R"([{"re":0,"im":0}])", R"([{"re":0.3,"im":0}])"), {});
  CHECK(mn.exit_code == kExitOk);
  CHECK(std::abs(mn.report["minimal_norm"].get<double>() - 0.3) <= 1e-9);

  auto zero = execute("pick-minnorm", pick_doc(R"([{"re":0,"im":0},{"re":0.4,"im":0}])", R"([{"re":0,"im":0},{"re":0,"im":0}])"), {});
  CHECK(zero.report["minimal_norm"].get<double>() == 0.0);

  auto solve = execute("pick-solve", pick_doc(R"([{"re":0,"im":0},{"re":0.5,"im":0}])", R"([{"re":0,"im":0},{"re":0.5,"im":0}])"), {});
  CHECK(solve.exit_code == kExitOk);
  const AnalyticExpr f = expr_from_json(solve.report["solution"]);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Complex z = testing_support::random_disc(rng);
    CHECK(std::abs(eval(f, z) - z) < 1e-12);
  }

  auto bad = execute("pick-solve", pick_doc(R"([{"re":0,"im":0},{"re":0.5,"im":0}])", R"([{"re":0,"im":0},{"re":0.9,"im":0}])"), {});
  CHECK(bad.exit_code == kExitInfeasible);
  CHECK(bad.report["failing_depth"].get<int>() >= 1);
}

TEST_CASE("combined command examples and exit codes") {
  auto ok = execute("combined", kFixture, {});
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.report["verdict"] == "solved");
  CHECK(ok.report["certificate"]["boundary_sup"].get<double>() <= 1.1 + 1e-9);
  CHECK(ok.report["residuals"]["interior"][0].get<double>() <= 1e-7);
  CHECK(ok.report.contains("budget_report"));

  auto infeasible = execute("combined", kInfeasible, {});
  CHECK(infeasible.exit_code == kExitInfeasible);
  CHECK(infeasible.report["min_eigenvalue"].get<double>() < 0.0);

  auto bare = execute("combined", kNoInterior, {});
  CHECK(bare.exit_code == kExitOk);
  CHECK(bare.report["residuals"]["interior"].empty());

  auto schema = execute("combined", pick_doc("[]", "[]"), {});
  CHECK(schema.exit_code == kExitSchema);
  CHECK(execute("combined", "{not json", {}).exit_code == kExitSchema);
  CHECK(execute("frobnicate", kFixture, {}).exit_code == kExitSchema);
}

TEST_CASE("exit codes for propagated error kinds") {
  CHECK(exit_code_for(ErrorKind::schema) == 2);
  CHECK(exit_code_for(ErrorKind::infeasible) == 3);
  CHECK(exit_code_for(ErrorKind::unsolvable) == 3);
  CHECK(exit_code_for(ErrorKind::search_exhausted) == 4);
  CHECK(exit_code_for(ErrorKind::certification_failed) == 5);
  CHECK(exit_code_for(ErrorKind::computation) == 1);
}

TEST_CASE("reports are deterministic apart from timing") {
  const auto a = execute("combined", kFixture, {});
  const auto b = execute("combined", kFixture, {});
  CHECK(a.report.contains("timing"));
  CHECK(without_timing(a.report).dump() == without_timing(b.report).dump());
}

TEST_CASE("plot CSV matches direct evaluation") {
  std::ostringstream csv;
  CommandOptions options;
  options.plot = &csv;
  options.grid = 1024;
  const auto out = execute("combined", kFixture, options);
  REQUIRE(out.exit_code == kExitOk);
  const AnalyticExpr F = expr_from_json(out.report["solution"]);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta_turns,abs_F,re_F,im_F");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double theta = 0, absf = 0, re = 0, im = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &theta, &absf, &re, &im) == 4);
    const Complex v = eval(F, circle_point(theta));
    CHECK(std::abs(absf - std::abs(v)) <= 1e-12);
    CHECK(std::abs(Complex(re, im) - v) <= 1e-12);
    ++rows;
  }
  CHECK(rows == 1024);
}

TEST_CASE("certify examples") {
  const auto solved = execute("combined", kFixture, {});
  REQUIRE(solved.exit_code == kExitOk);
  CommandOptions options;
  options.expression_text = solved.report.dump();
  options.grid = std::size_t{1} << 16;
  const auto again = execute("certify", kFixture, options);
  CHECK(again.exit_code == kExitOk);
  CHECK(again.report["verdict"] == "certified");
  CHECK(std::abs(again.report["certificate"]["boundary_sup"].get<double>() -
                 solved.report["certificate"]["boundary_sup"].get<double>()) <= 1e-6);
  CHECK(std::abs(again.report["grid_sup"]["sup"].get<double>() -
                 solved.report["certificate"]["boundary_sup"].get<double>()) <= 1e-6);

  const std::string one_point = R"({"boundary_set": [{"angle_turns": 0}], "boundary_values": [{"re": 1, "im": 0}]})";
  CommandOptions zero;
  zero.expression_text = serialize(constant(0.0));
  const auto mismatch = execute("certify", one_point, zero);
  CHECK(mismatch.exit_code == kExitCertificationFailed);
  CHECK(mismatch.report["verdict"] == "mismatch");
  CHECK(mismatch.report["residuals"]["boundary"][0].get<double>() == 1.0);

  CommandOptions unit;
  unit.expression_text = serialize(constant(1.0));
  const auto fine = execute("certify", one_point, unit);
  CHECK(fine.exit_code == kExitOk);
  CHECK(fine.report["certificate"]["boundary_sup"].get<double>() == 1.0);

  CommandOptions broken;
  broken.expression_text = "{\"op\": ";
  CHECK(execute("certify", one_point, broken).exit_code == kExitSchema);
}

TEST_CASE("run parses the command line and writes files") {
  TempDir dir;
  const std::string input = dir.file("fixture.json", kFixture);
  const std::string output = dir.file("report.json");
  const std::string plot = dir.file("plot.csv");
  const char* argv[] = {"pickpeak", "combined", "--input", input.c_str(), "--output", output.c_str(),
                        "--plot", plot.c_str(), "--grid", "2048", "--tol", "1e-9"};
  CHECK(run(12, argv) == kExitOk);
  std::ifstream report_in(output);
  const json report = json::parse(report_in);
  CHECK(report["verdict"] == "solved");
  std::ifstream plot_in(plot);
  std::size_t lines = 0;
  for (std::string line; std::getline(plot_in, line);) ++lines;
  CHECK(lines == 2049);

  const std::string bad = dir.file("bad.json", kInfeasible);
  const std::string bad_out = dir.file("bad_report.json");
  const char* argv_bad[] = {"pickpeak", "combined", "--input", bad.c_str(), "--output", bad_out.c_str()};
  CHECK(run(6, argv_bad) == kExitInfeasible);

  const char* argv_missing[] = {"pickpeak", "pick-check"};
  CHECK(run(2, argv_missing) == kExitSchema);
  const std::string nowhere = (dir.path / "absent.json").string();
  const char* argv_absent[] = {"pickpeak", "pick-check", "--input", nowhere.c_str(), "--output", bad_out.c_str()};
  CHECK(run(6, argv_absent) == kExitSchema);
}
