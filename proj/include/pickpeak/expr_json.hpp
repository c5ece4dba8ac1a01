#pragma once

#include <json.hpp>

#include "pickpeak/expr.hpp"

namespace pickpeak {

/// {"re": x, "im": y}
nlohmann::json complex_to_json(Complex value);
/// Throws Error(schema) naming `where` on malformed or non-finite input.
Complex complex_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json expr_to_json(const AnalyticExpr& expr);
/// Rebuilds through the checked constructors.
AnalyticExpr expr_from_json(const nlohmann::json& j);

}  // namespace pickpeak
