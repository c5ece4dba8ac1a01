#include "pickpeak/expr.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace pickpeak {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::domain_violation: return "domain-violation";
    case ErrorKind::degenerate_expression: return "degenerate-expression";
    case ErrorKind::range_violation: return "range-violation";
    case ErrorKind::computation: return "computation";
    case ErrorKind::unsolvable: return "unsolvable";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::search_exhausted: return "search-exhausted";
    case ErrorKind::certification_failed: return "certification-failed";
    case ErrorKind::parse: return "parse";
    case ErrorKind::schema: return "schema";
  }
  return "unknown";
}

const char* to_string(ExprKind kind) noexcept {
  switch (kind) {
    case ExprKind::constant: return "const";
    case ExprKind::identity: return "z";
    case ExprKind::sum: return "add";
    case ExprKind::difference: return "sub";
    case ExprKind::product: return "mul";
    case ExprKind::quotient: return "div";
    case ExprKind::mobius: return "mobius";
    case ExprKind::root: return "root";
    case ExprKind::affine: return "affine";
    case ExprKind::power: return "pow";
    case ExprKind::peak: return "peak";
  }
  return "unknown";
}

struct AnalyticExpr::Node {
  ExprKind kind = ExprKind::constant;
  std::vector<AnalyticExpr> args;
  Complex param{};
  Complex shift{};
  int order = 0;
  std::vector<double> angles;
  std::vector<Complex> points;
  double sharpness = 1.0;
  double snap_radius = 0.0;
};

struct ExprAccess {
  static const AnalyticExpr::Node& node(const AnalyticExpr& e) { return *e.node_; }
  static AnalyticExpr make(AnalyticExpr::Node n) {
    return AnalyticExpr(std::make_shared<const AnalyticExpr::Node>(std::move(n)));
  }
};

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

Complex eval_peak(const AnalyticExpr::Node& n, Complex z) {
  Complex kernel_sum{};
  for (const Complex& zeta : n.points) {
    const Complex gap = zeta - z;
    if (std::abs(gap) <= n.snap_radius) return 1.0;
    kernel_sum += (zeta + z) / gap;
  }
  const Complex h = 1.0 + n.sharpness * kernel_sum;
  return h / (1.0 + h);
}

Complex eval_power(Complex base, int m) {
  Complex result = 1.0;
  while (m > 0) {
    if (m & 1) result *= base;
    m >>= 1;
    if (m > 0) base *= base;
  }
  return result;
}

Complex eval_root(Complex v, int m) {
  if (v == Complex{}) return {};
  if (m == 1) return v;
  return std::exp(std::log(v) / static_cast<double>(m));
}

Complex eval_unchecked(const AnalyticExpr& e, Complex z) {
  const auto& n = ExprAccess::node(e);
  switch (n.kind) {
    case ExprKind::constant:
      return n.param;
    case ExprKind::identity:
      return z;
    case ExprKind::sum:
      return eval_unchecked(n.args[0], z) + eval_unchecked(n.args[1], z);
    case ExprKind::difference:
      return eval_unchecked(n.args[0], z) - eval_unchecked(n.args[1], z);
    case ExprKind::product:
      return eval_unchecked(n.args[0], z) * eval_unchecked(n.args[1], z);
    case ExprKind::quotient: {
      const Complex den = eval_unchecked(n.args[1], z);
      if (std::abs(den) < kDegenerateFloor)
        throw Error(ErrorKind::degenerate_expression, "quotient denominator vanished during evaluation");
      return eval_unchecked(n.args[0], z) / den;
    }
    case ExprKind::mobius: {
      const Complex v = eval_unchecked(n.args[0], z);
      const Complex den = 1.0 - std::conj(n.param) * v;
      if (std::abs(den) < kDegenerateFloor)
        throw Error(ErrorKind::degenerate_expression, "Möbius denominator vanished during evaluation");
      return (v - n.param) / den;
    }
    case ExprKind::root:
      return eval_root(eval_unchecked(n.args[0], z), n.order);
    case ExprKind::affine:
      return n.param * eval_unchecked(n.args[0], z) + n.shift;
    case ExprKind::power:
      return eval_power(eval_unchecked(n.args[0], z), n.order);
    case ExprKind::peak:
      return eval_peak(n, z);
  }
  throw Error(ErrorKind::computation, "unknown expression node");
}

std::vector<Complex> build_certification_grid() {
  constexpr std::size_t boundary = 4096;
  constexpr std::size_t radial = 64;
  constexpr std::size_t angular = 64;
  std::vector<Complex> pts;
  pts.reserve(boundary + radial * angular);
  for (std::size_t j = 0; j < boundary; ++j)
    pts.push_back(circle_point(static_cast<double>(j) / boundary));
  for (std::size_t i = 0; i < radial; ++i) {
    const double rho = static_cast<double>(i) / radial;
    for (std::size_t j = 0; j < angular; ++j)
      pts.push_back(rho * circle_point(static_cast<double>(j) / angular));
  }
  return pts;
}

AnalyticExpr binary(ExprKind kind, const AnalyticExpr& lhs, const AnalyticExpr& rhs) {
  AnalyticExpr::Node n;
  n.kind = kind;
  n.args = {lhs, rhs};
  return ExprAccess::make(std::move(n));
}

void require_finite(Complex c, const char* what) {
  if (!finite(c))
    throw Error(ErrorKind::invalid_argument, std::string(what) + " must be finite");
}

}  // namespace

AnalyticExpr::AnalyticExpr() : AnalyticExpr(constant(0.0)) {}

ExprKind AnalyticExpr::kind() const noexcept { return node_->kind; }
std::span<const AnalyticExpr> AnalyticExpr::args() const noexcept { return node_->args; }
Complex AnalyticExpr::parameter() const noexcept { return node_->param; }
Complex AnalyticExpr::shift() const noexcept { return node_->shift; }
int AnalyticExpr::order() const noexcept { return node_->order; }
std::span<const double> AnalyticExpr::angles() const noexcept { return node_->angles; }
std::span<const Complex> AnalyticExpr::peak_points() const noexcept { return node_->points; }
double AnalyticExpr::sharpness() const noexcept { return node_->sharpness; }

std::size_t AnalyticExpr::size() const noexcept {
  std::size_t total = 1;
  for (const auto& a : node_->args) total += a.size();
  return total;
}

Complex circle_point(double turns) {
  const double quarters = 4.0 * turns;
  if (quarters == std::floor(quarters)) {
    switch (static_cast<long long>(std::fmod(std::fmod(quarters, 4.0) + 4.0, 4.0))) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double theta = 2.0 * std::numbers::pi * turns;
  return {std::cos(theta), std::sin(theta)};
}

std::span<const Complex> certification_grid() {
  static const std::vector<Complex> grid = build_certification_grid();
  return grid;
}

Complex eval(const AnalyticExpr& expr, Complex z) {
  if (!finite(z) || std::abs(z) > 1.0 + kDomainSlack) {
    std::ostringstream os;
    os << "evaluation point " << z << " lies outside the closed unit disc";
    throw Error(ErrorKind::domain_violation, os.str());
  }
  const Complex v = eval_unchecked(expr, z);
  if (!finite(v))
    throw Error(ErrorKind::degenerate_expression, "expression produced a non-finite value");
  return v;
}

AnalyticExpr constant(Complex value) {
  require_finite(value, "constant");
  AnalyticExpr::Node n;
  n.kind = ExprKind::constant;
  n.param = value;
  return ExprAccess::make(std::move(n));
}

AnalyticExpr identity() {
  AnalyticExpr::Node n;
  n.kind = ExprKind::identity;
  return ExprAccess::make(std::move(n));
}

AnalyticExpr operator+(const AnalyticExpr& lhs, const AnalyticExpr& rhs) {
  if (lhs.is_constant() && rhs.is_constant()) return constant(lhs.parameter() + rhs.parameter());
  if (lhs.is_constant() && lhs.parameter() == Complex{}) return rhs;
  if (rhs.is_constant() && rhs.parameter() == Complex{}) return lhs;
  return binary(ExprKind::sum, lhs, rhs);
}

AnalyticExpr operator-(const AnalyticExpr& lhs, const AnalyticExpr& rhs) {
  if (lhs.is_constant() && rhs.is_constant()) return constant(lhs.parameter() - rhs.parameter());
  if (rhs.is_constant() && rhs.parameter() == Complex{}) return lhs;
  return binary(ExprKind::difference, lhs, rhs);
}

AnalyticExpr operator*(const AnalyticExpr& lhs, const AnalyticExpr& rhs) {
  if (lhs.is_constant() && rhs.is_constant()) return constant(lhs.parameter() * rhs.parameter());
  for (const auto* side : {&lhs, &rhs}) {
    if (side->is_constant() && side->parameter() == Complex{}) return constant(0.0);
  }
  if (lhs.is_constant() && lhs.parameter() == 1.0) return rhs;
  if (rhs.is_constant() && rhs.parameter() == 1.0) return lhs;
  return binary(ExprKind::product, lhs, rhs);
}

AnalyticExpr operator/(const AnalyticExpr& numerator, const AnalyticExpr& denominator) {
  double min_modulus = std::numeric_limits<double>::infinity();
  for (const Complex& z : certification_grid())
    min_modulus = std::min(min_modulus, std::abs(eval(denominator, z)));
  if (!(min_modulus > kDenominatorFloor)) {
    std::ostringstream os;
    os << "quotient denominator reaches modulus " << min_modulus << " on the certification grid";
    throw Error(ErrorKind::degenerate_expression, os.str());
  }
  if (numerator.is_constant() && denominator.is_constant())
    return constant(numerator.parameter() / denominator.parameter());
  if (denominator.is_constant()) return affine(numerator, 1.0 / denominator.parameter(), 0.0);
  return binary(ExprKind::quotient, numerator, denominator);
}

AnalyticExpr mobius(Complex a, const AnalyticExpr& child) {
  require_finite(a, "Möbius parameter");
  if (!(std::abs(a) < 1.0))
    throw Error(ErrorKind::invalid_argument, "Möbius parameter must lie in the open unit disc");
  if (a == Complex{}) return child;
  if (child.is_constant()) {
    const Complex v = child.parameter();
    return constant((v - a) / (1.0 - std::conj(a) * v));
  }
  AnalyticExpr::Node n;
  n.kind = ExprKind::mobius;
  n.param = a;
  n.args = {child};
  return ExprAccess::make(std::move(n));
}

AnalyticExpr affine(const AnalyticExpr& child, Complex scale, Complex shift) {
  require_finite(scale, "affine scale");
  require_finite(shift, "affine shift");
  if (scale == Complex{}) return constant(shift);
  if (child.is_constant()) return constant(scale * child.parameter() + shift);
  if (scale == 1.0 && shift == Complex{}) return child;
  if (child.kind() == ExprKind::affine)
    return affine(child.args()[0], scale * child.parameter(), scale * child.shift() + shift);
  AnalyticExpr::Node n;
  n.kind = ExprKind::affine;
  n.param = scale;
  n.shift = shift;
  n.args = {child};
  return ExprAccess::make(std::move(n));
}

AnalyticExpr power(const AnalyticExpr& child, int m) {
  if (m < 0) throw Error(ErrorKind::invalid_argument, "power order must be non-negative");
  if (m == 0) return constant(1.0);
  if (m == 1) return child;
  if (child.is_constant()) return constant(eval_power(child.parameter(), m));
  AnalyticExpr::Node n;
  n.kind = ExprKind::power;
  n.order = m;
  n.args = {child};
  return ExprAccess::make(std::move(n));
}

AnalyticExpr principal_root(const AnalyticExpr& child, int m) {
  if (m < 1) throw Error(ErrorKind::invalid_argument, "root order must be at least 1");
  auto check = [](Complex v) {
    if (std::abs(v - 0.5) > 0.5 + kRootRangeSlack) {
      std::ostringstream os;
      os << "root argument " << v << " leaves the disc |z - 1/2| <= 1/2";
      throw Error(ErrorKind::range_violation, os.str());
    }
  };
  if (child.is_constant()) {
    check(child.parameter());
    return constant(eval_root(child.parameter(), m));
  }
  for (const Complex& z : certification_grid()) check(eval(child, z));
  if (m == 1) return child;
  AnalyticExpr::Node n;
  n.kind = ExprKind::root;
  n.order = m;
  n.args = {child};
  return ExprAccess::make(std::move(n));
}

AnalyticExpr herglotz_peak(std::vector<double> angle_turns, double sharpness) {
  if (angle_turns.empty())
    throw Error(ErrorKind::invalid_argument, "peak function needs at least one boundary point");
  if (!(sharpness > 0.0) || !std::isfinite(sharpness))
    throw Error(ErrorKind::invalid_argument, "peak sharpness must be positive");
  AnalyticExpr::Node n;
  n.kind = ExprKind::peak;
  n.sharpness = sharpness;
  n.snap_radius = 1e-12 * std::min(1.0, sharpness);
  for (double t : angle_turns) {
    if (!(t >= 0.0 && t < 1.0))
      throw Error(ErrorKind::invalid_argument, "boundary angles must lie in [0, 1) turns");
    n.points.push_back(circle_point(t));
  }
  n.angles = std::move(angle_turns);
  return ExprAccess::make(std::move(n));
}

}  // namespace pickpeak
