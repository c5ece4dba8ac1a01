#include "pickpeak/expr_json.hpp"

#include <cmath>
#include <map>

namespace pickpeak {

namespace {

const std::map<std::string, ExprKind>& kinds_by_name() {
  static const std::map<std::string, ExprKind> table = [] {
    std::map<std::string, ExprKind> t;
    for (ExprKind k : {ExprKind::constant, ExprKind::identity, ExprKind::sum, ExprKind::difference,
                       ExprKind::product, ExprKind::quotient, ExprKind::mobius, ExprKind::root,
                       ExprKind::affine, ExprKind::power, ExprKind::peak})
      t.emplace(to_string(k), k);
    return t;
  }();
  return table;
}

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::parse, message); }

const nlohmann::json& arg(const nlohmann::json& j, std::size_t index, std::size_t expected) {
  if (!j.contains("args") || !j["args"].is_array() || j["args"].size() != expected)
    fail(std::string("node '") + j.value("op", "?") + "' expects " + std::to_string(expected) + " args");
  return j["args"][index];
}

int order_param(const nlohmann::json& j) {
  if (!j.contains("param") || !j["param"].is_number_integer())
    fail("node '" + j["op"].get<std::string>() + "' expects an integer param");
  return j["param"].get<int>();
}

}  // namespace

nlohmann::json complex_to_json(Complex value) {
  return {{"re", value.real()}, {"im", value.imag()}};
}

Complex complex_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::schema, where + ": expected an object {re, im}");
  for (const char* key : {"re", "im"}) {
    if (!j.contains(key) || !j[key].is_number())
      throw Error(ErrorKind::schema, where + "." + key + ": expected a number");
  }
  const Complex c{j["re"].get<double>(), j["im"].get<double>()};
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw Error(ErrorKind::schema, where + ": value must be finite");
  return c;
}

nlohmann::json expr_to_json(const AnalyticExpr& expr) {
  nlohmann::json j;
  j["op"] = to_string(expr.kind());
  if (!expr.args().empty()) {
    nlohmann::json args = nlohmann::json::array();
    for (const auto& a : expr.args()) args.push_back(expr_to_json(a));
    j["args"] = std::move(args);
  }
  switch (expr.kind()) {
    case ExprKind::constant:
    case ExprKind::mobius:
      j["param"] = complex_to_json(expr.parameter());
      break;
    case ExprKind::root:
    case ExprKind::power:
      j["param"] = expr.order();
      break;
    case ExprKind::affine:
      j["param"] = {{"scale", complex_to_json(expr.parameter())},
                    {"shift", complex_to_json(expr.shift())}};
      break;
    case ExprKind::peak:
      j["param"] = {{"angle_turns", std::vector<double>(expr.angles().begin(), expr.angles().end())},
                    {"sharpness", expr.sharpness()}};
      break;
    default:
      break;
  }
  return j;
}

AnalyticExpr expr_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) fail("expression node needs a string 'op'");
  const auto& table = kinds_by_name();
  const auto it = table.find(j["op"].get<std::string>());
  if (it == table.end()) fail("unknown expression op '" + j["op"].get<std::string>() + "'");
  auto param_complex = [&](const nlohmann::json& p, const char* what) {
    try {
      return complex_from_json(p, what);
    } catch (const Error& e) {
      fail(e.what());
    }
  };
  switch (it->second) {
    case ExprKind::constant:
      if (!j.contains("param")) fail("const node needs a param");
      return constant(param_complex(j["param"], "const.param"));
    case ExprKind::identity:
      return identity();
    case ExprKind::sum:
      return expr_from_json(arg(j, 0, 2)) + expr_from_json(arg(j, 1, 2));
    case ExprKind::difference:
      return expr_from_json(arg(j, 0, 2)) - expr_from_json(arg(j, 1, 2));
    case ExprKind::product:
      return expr_from_json(arg(j, 0, 2)) * expr_from_json(arg(j, 1, 2));
    case ExprKind::quotient:
      return expr_from_json(arg(j, 0, 2)) / expr_from_json(arg(j, 1, 2));
    case ExprKind::mobius:
      if (!j.contains("param")) fail("mobius node needs a param");
      return mobius(param_complex(j["param"], "mobius.param"), expr_from_json(arg(j, 0, 1)));
    case ExprKind::root:
      return principal_root(expr_from_json(arg(j, 0, 1)), order_param(j));
    case ExprKind::power:
      return power(expr_from_json(arg(j, 0, 1)), order_param(j));
    case ExprKind::affine: {
      if (!j.contains("param") || !j["param"].is_object()) fail("affine node needs {scale, shift}");
      const auto& p = j["param"];
      if (!p.contains("scale") || !p.contains("shift")) fail("affine node needs {scale, shift}");
      return affine(expr_from_json(arg(j, 0, 1)), param_complex(p["scale"], "affine.scale"),
                    param_complex(p["shift"], "affine.shift"));
    }
    case ExprKind::peak: {
      if (!j.contains("param") || !j["param"].is_object() || !j["param"].contains("angle_turns") ||
          !j["param"]["angle_turns"].is_array())
        fail("peak node needs param.angle_turns");
      const auto& p = j["param"];
      std::vector<double> angles;
      for (const auto& a : p["angle_turns"]) {
        if (!a.is_number()) fail("peak angle_turns must be numbers");
        angles.push_back(a.get<double>());
      }
      const double sharpness = p.contains("sharpness") && p["sharpness"].is_number()
                                   ? p["sharpness"].get<double>()
                                   : 1.0;
      return herglotz_peak(std::move(angles), sharpness);
    }
  }
  fail("unhandled expression op");
}

std::string serialize(const AnalyticExpr& expr) { return expr_to_json(expr).dump(); }

AnalyticExpr parse_expr(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  return expr_from_json(j);
}

}  // namespace pickpeak
