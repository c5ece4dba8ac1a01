#pragma once

// Closed-form expression trees for functions in the disc algebra: holomorphic
// on the open unit disc and continuous on its closure.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pickpeak/error.hpp"

namespace pickpeak {

using Complex = std::complex<double>;

/// Evaluation accepts points with |z| up to 1 plus this slack.
inline constexpr double kDomainSlack = 1e-12;
/// Certified denominators must stay above this modulus on the certification grid.
inline constexpr double kDenominatorFloor = 1e-6;
/// Evaluation-time floor for a denominator; below it the expression is degenerate.
inline constexpr double kDegenerateFloor = 1e-15;
/// Allowed excursion of a root argument outside the disc |z - 1/2| <= 1/2.
inline constexpr double kRootRangeSlack = 1e-9;

enum class ExprKind {
  constant,
  identity,
  sum,
  difference,
  product,
  quotient,
  mobius,    // b_a(child) = (child - a) / (1 - conj(a) child), |a| < 1
  root,      // principal m-th root of a child valued in |z - 1/2| <= 1/2
  affine,    // scale * child + shift
  power,     // child^m, m >= 0
  peak,      // H/(1+H) with H = 1 + c * sum_k (zeta_k + z)/(zeta_k - z)
};

const char* to_string(ExprKind kind) noexcept;

/// Immutable expression tree. Copies share structure.
class AnalyticExpr {
 public:
  /// The zero constant.
  AnalyticExpr();

  ExprKind kind() const noexcept;
  std::span<const AnalyticExpr> args() const noexcept;

  /// Constant value, Möbius parameter, or affine scale depending on kind.
  Complex parameter() const noexcept;
  /// Affine shift.
  Complex shift() const noexcept;
  /// Root or power order.
  int order() const noexcept;
  /// Peak node data: boundary angles in turns and the kernel weight.
  std::span<const double> angles() const noexcept;
  std::span<const Complex> peak_points() const noexcept;
  double sharpness() const noexcept;

  bool is_constant() const noexcept { return kind() == ExprKind::constant; }
  /// Number of nodes in the tree (shared subtrees counted each time).
  std::size_t size() const noexcept;

  struct Node;

 private:
  explicit AnalyticExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend struct ExprAccess;
};

// Construction. All constructors fold constant subtrees and validate the
// invariants of their node kind; violations throw pickpeak::Error.
AnalyticExpr constant(Complex value);
AnalyticExpr identity();
AnalyticExpr operator+(const AnalyticExpr& lhs, const AnalyticExpr& rhs);
AnalyticExpr operator-(const AnalyticExpr& lhs, const AnalyticExpr& rhs);
AnalyticExpr operator*(const AnalyticExpr& lhs, const AnalyticExpr& rhs);
/// Quotient; the denominator must keep |.| > kDenominatorFloor on the certification grid.
AnalyticExpr operator/(const AnalyticExpr& numerator, const AnalyticExpr& denominator);
AnalyticExpr mobius(Complex a, const AnalyticExpr& child);
AnalyticExpr affine(const AnalyticExpr& child, Complex scale, Complex shift);
AnalyticExpr power(const AnalyticExpr& child, int m);
/// Principal m-th root gamma(child) with gamma(1) = 1 and gamma(0) = 0.
/// Throws range_violation if the child leaves |z - 1/2| <= 1/2 on the grid.
AnalyticExpr principal_root(const AnalyticExpr& child, int m);
/// Herglotz-kernel peak function for the boundary points exp(2 pi i angle).
/// Equal to 1 on those points, modulus < 1 elsewhere on the closed disc.
AnalyticExpr herglotz_peak(std::vector<double> angle_turns, double sharpness = 1.0);

/// Value at z, |z| <= 1 + kDomainSlack.
Complex eval(const AnalyticExpr& expr, Complex z);

/// exp(2 pi i turns); exact for multiples of a quarter turn.
Complex circle_point(double turns);

/// Points used to certify construction-time invariants: a 4096-point
/// boundary grid plus a 64x64 interior polar grid.
std::span<const Complex> certification_grid();

// JSON serialization (nlohmann/json text).
std::string serialize(const AnalyticExpr& expr);
AnalyticExpr parse_expr(std::string_view text);

}  // namespace pickpeak
