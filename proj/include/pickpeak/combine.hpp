#pragma once

// Pick interpolation at interior points combined with peak interpolation on a
// boundary set. The two construction steps are written against an abstract
// algebra context; DiscContext instantiates them for the disc algebra.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pickpeak/expr.hpp"
#include "pickpeak/norm.hpp"
#include "pickpeak/peak.hpp"
#include "pickpeak/pick.hpp"

namespace pickpeak {

/// Step 1 stops shifting the vanishing sequence after this many halvings of 1 - t.
inline constexpr int kSequenceCap = 48;
/// Tolerance for the separating-family normalisation and l's interpolation.
inline constexpr double kSeparatorFloor = 1e-12;
inline constexpr double kHypothesisResidual = 1e-8;

struct PrimitiveRequest {
  double smallness = 0.0;
  double slack = 0.0;
  /// Points where the primitive must be small whenever the region function is not.
  std::vector<Complex> must_be_small;
  int start_level = 0;
  int start_power_log2 = 0;
};

template <typename Function>
struct PrimitiveResult {
  Function h;
  int level = 0;
  int power_log2 = 0;
};

/// Capabilities of a uniform algebra A on a compact space X that the
/// construction needs. Functions are values; every capability is pure.
template <typename C>
concept AlgebraContext = requires(const C& ctx, const typename C::function_type& f,
                                  const typename C::point_type& x, const typename C::peak_type& peak,
                                  const typename C::boundary_set_type& set,
                                  const typename C::boundary_data_type& data,
                                  std::span<const typename C::point_type> points,
                                  const PrimitiveRequest& request, Complex c, int k, std::size_t j) {
  { ctx.evaluate(f, x) } -> std::convertible_to<Complex>;
  { ctx.norm_estimate(f) } -> std::same_as<NormCertificate>;
  { ctx.tolerance() } -> std::convertible_to<double>;
  { ctx.set_of(data) } -> std::convertible_to<const typename C::boundary_set_type&>;
  { ctx.peak_provider(set) } -> std::same_as<typename C::peak_type>;
  { ctx.peak_values(peak) } -> std::same_as<typename C::function_type>;
  { ctx.vanishing_sequence(peak, k) } -> std::same_as<typename C::function_type>;
  { ctx.interpolation_primitive(data, f, request) } -> std::same_as<PrimitiveResult<typename C::function_type>>;
  { ctx.separator(j, points) } -> std::same_as<typename C::function_type>;
  { ctx.constant(c) } -> std::same_as<typename C::function_type>;
  { ctx.add(f, f) } -> std::same_as<typename C::function_type>;
  { ctx.subtract(f, f) } -> std::same_as<typename C::function_type>;
  { ctx.multiply(f, f) } -> std::same_as<typename C::function_type>;
  { ctx.scale(c, f) } -> std::same_as<typename C::function_type>;
};

template <typename Function>
struct Step1Result {
  Function G;
  Function g;
  Function h;
  int sequence_index = 0;
  int primitive_level = 0;
  int primitive_power_log2 = 0;
  NormCertificate certificate;
};

/// G = g + h with G = f on E, |G(alpha_j) - w_j| < eps and ||G|| <= 1 + eps.
/// g = f_k l for a vanishing sequence f_k; h comes from the interpolation
/// primitive, small wherever |g| >= eps/2.
template <AlgebraContext C>
Step1Result<typename C::function_type> step1(const C& ctx, const typename C::boundary_data_type& boundary,
                                              std::span<const typename C::point_type> points,
                                              std::span<const Complex> targets,
                                              const typename C::function_type& l, double eps) {
  if (points.size() != targets.size())
    throw Error(ErrorKind::invalid_argument, "step1: points and targets differ in length");
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "step1: epsilon must be positive");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (std::abs(ctx.evaluate(l, points[j]) - targets[j]) > kHypothesisResidual)
      throw Error(ErrorKind::invalid_argument, "step1: l does not interpolate the interior targets");
  }
  if (ctx.norm_estimate(l).boundary_sup > 1.0 + eps / 2 + ctx.tolerance())
    throw Error(ErrorKind::invalid_argument, "step1: ||l|| exceeds 1 + eps/2");

  auto misses = [&](const typename C::function_type& fn, double bound) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (!(std::abs(ctx.evaluate(fn, points[j]) - targets[j]) < bound)) return true;
    }
    return false;
  };

  Step1Result<typename C::function_type> out;
  const auto peak = ctx.peak_provider(ctx.set_of(boundary));
  int index = 0;
  for (;; ++index) {
    if (index > kSequenceCap)
      throw Error(ErrorKind::search_exhausted, "step1: vanishing sequence never met the interior targets");
    out.g = ctx.multiply(ctx.vanishing_sequence(peak, index), l);
    if (!misses(out.g, eps / 2)) break;
  }
  out.sequence_index = index;

  PrimitiveRequest request;
  request.smallness = eps / 2;
  request.slack = eps / 2;
  request.must_be_small.assign(points.begin(), points.end());
  for (;;) {
    auto primitive = ctx.interpolation_primitive(boundary, out.g, request);
    out.h = std::move(primitive.h);
    out.primitive_level = primitive.level;
    out.primitive_power_log2 = primitive.power_log2;
    out.G = ctx.add(out.g, out.h);
    if (!misses(out.G, eps)) {
      out.certificate = ctx.norm_estimate(out.G);
      if (out.certificate.boundary_sup <= 1.0 + eps + ctx.tolerance()) return out;
    }
    request.start_level = primitive.level;
    request.start_power_log2 = primitive.power_log2 + 1;
  }
}

template <typename Function>
struct SeparatingFamily {
  std::vector<Function> members;
  double bound = 0.0;  // M: max of the members' norm estimates
};

/// phi_j = (1 - r) k_j / ((1 - r(alpha_j)) k_j(alpha_j)): 1 at alpha_j, 0 at the
/// other alphas and on E.
template <AlgebraContext C>
SeparatingFamily<typename C::function_type> separating_family(
    const C& ctx, const typename C::boundary_set_type& set, std::span<const typename C::point_type> points) {
  SeparatingFamily<typename C::function_type> family;
  const auto vanishing_on_set =
      ctx.subtract(ctx.constant(1.0), ctx.peak_values(ctx.peak_provider(set)));
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto raw = ctx.multiply(vanishing_on_set, ctx.separator(j, points));
    const Complex at_alpha = ctx.evaluate(raw, points[j]);
    if (std::abs(at_alpha) < kSeparatorFloor)
      throw Error(ErrorKind::degenerate_expression,
                  "separating function vanishes at interior point " + std::to_string(j));
    family.members.push_back(ctx.scale(1.0 / at_alpha, raw));
    family.bound = std::max(family.bound, ctx.norm_estimate(family.members.back()).boundary_sup);
  }
  return family;
}

template <typename Function>
struct Step2Result {
  Function F;
  std::vector<Complex> sigma;
};

/// F = G - sum_j sigma_j phi_j with sigma_j = G(alpha_j) - w_j.
template <AlgebraContext C>
Step2Result<typename C::function_type> step2(const C& ctx, const typename C::function_type& G,
                                              const SeparatingFamily<typename C::function_type>& family,
                                              std::span<const typename C::point_type> points,
                                              std::span<const Complex> targets) {
  if (family.members.size() != points.size() || points.size() != targets.size())
    throw Error(ErrorKind::invalid_argument, "step2: family, points and targets differ in length");
  Step2Result<typename C::function_type> out{G, {}};
  for (std::size_t j = 0; j < points.size(); ++j) {
    const Complex sigma = ctx.evaluate(G, points[j]) - targets[j];
    out.sigma.push_back(sigma);
    if (sigma != Complex{}) out.F = ctx.subtract(out.F, ctx.scale(sigma, family.members[j]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Disc algebra.

/// A(D) with functions as expression trees. Norm estimates sample the circle on
/// doubling grids plus points clustered around the boundary set.
class DiscContext {
 public:
  using function_type = AnalyticExpr;
  using point_type = Complex;
  using peak_type = PeakFunction;
  using boundary_set_type = FiniteBoundarySet;
  using boundary_data_type = BoundaryData;

  DiscContext(const FiniteBoundarySet& focus_set, std::size_t grid, double tol);

  Complex evaluate(const AnalyticExpr& f, Complex z) const { return eval(f, z); }
  NormCertificate norm_estimate(const AnalyticExpr& f) const { return boundary_sup(f, tol_, focus_); }
  double tolerance() const noexcept { return tol_; }
  const FiniteBoundarySet& set_of(const BoundaryData& data) const noexcept { return data.set(); }
  PeakFunction peak_provider(const FiniteBoundarySet& set) const { return peak_function(set); }
  AnalyticExpr peak_values(const PeakFunction& peak) const { return peak.expr; }
  /// root_sequence of the peak function shifted by t = 1 - 2^-k (k = 0: unshifted).
  AnalyticExpr vanishing_sequence(const PeakFunction& peak, int k) const;
  PrimitiveResult<AnalyticExpr> interpolation_primitive(const BoundaryData& data, const AnalyticExpr& region,
                                                        const PrimitiveRequest& request) const;
  /// k_j(z) = prod_{i != j} (z - alpha_i); the constant 1 when n = 1.
  AnalyticExpr separator(std::size_t j, std::span<const Complex> points) const;

  AnalyticExpr constant(Complex c) const { return pickpeak::constant(c); }
  AnalyticExpr add(const AnalyticExpr& a, const AnalyticExpr& b) const { return a + b; }
  AnalyticExpr subtract(const AnalyticExpr& a, const AnalyticExpr& b) const { return a - b; }
  AnalyticExpr multiply(const AnalyticExpr& a, const AnalyticExpr& b) const { return a * b; }
  AnalyticExpr scale(Complex c, const AnalyticExpr& f) const { return affine(f, c, 0.0); }

  std::span<const Complex> focus_points() const noexcept { return focus_; }

 private:
  std::vector<Complex> focus_;
  std::size_t grid_;
  double tol_;
};

static_assert(AlgebraContext<DiscContext>);

class CombinedProblem {
 public:
  CombinedProblem(BoundaryData boundary, PickData interior, double epsilon);

  const BoundaryData& boundary() const noexcept { return boundary_; }
  const PickData& interior() const noexcept { return interior_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  BoundaryData boundary_;
  PickData interior_;
  double epsilon_;
};

struct BudgetReport {
  double epsilon_internal = 0.0;
  double measured_m = 0.0;
  double predicted_bound = 0.0;
  /// ||G|| from Step 1, and sum_j |sigma_j| ||phi_j|| from Step 2.
  double step1_sup = 0.0;
  double correction_sum = 0.0;
  int sequence_index = 0;
  int primitive_level = 0;
  int primitive_power_log2 = 0;
};

struct CombinedSolution {
  AnalyticExpr F;
  NormCertificate certificate;
  std::vector<double> boundary_residuals;
  std::vector<double> interior_residuals;
  std::vector<Complex> sigma;
  BudgetReport budget_report;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(HermitianMatrix matrix, PsdResult psd);
  const HermitianMatrix& matrix() const noexcept { return matrix_; }
  const PsdResult& psd() const noexcept { return psd_; }

 private:
  HermitianMatrix matrix_;
  PsdResult psd_;
};

/// Carries the constructed solution whose certificate failed, for inspection.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& message, CombinedSolution solution);
  const CombinedSolution& solution() const noexcept { return solution_; }

 private:
  CombinedSolution solution_;
};

struct CombinedOptions {
  /// Uniform boundary grid for the smallness checks.
  std::size_t grid = 16384;
};

/// Finds F in the disc algebra with F = f on E, F(alpha_j) = w_j and
/// ||F|| <= 1 + epsilon, or throws InfeasibleError when the Pick matrix of the
/// interior data is not psd.
CombinedSolution solve_combined(const CombinedProblem& problem, double tol, const CombinedOptions& options = {});

}  // namespace pickpeak
