#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pickpeak/expr.hpp"

namespace pickpeak {

inline constexpr std::size_t kSupGridStart = std::size_t{1} << 10;
inline constexpr std::size_t kSupGridCap = std::size_t{1} << 20;

/// Grid estimate of the sup norm on the unit circle. By the maximum modulus
/// principle this is the sup over the closed disc.
struct NormCertificate {
  std::size_t grid_size = 0;
  double boundary_sup = 0.0;
  /// (grid size, sup on that uniform grid), grids doubling from kSupGridStart.
  std::vector<std::pair<std::size_t, double>> refinement_history;
  bool converged = false;
  double tolerance = 0.0;
  /// Max over the caller-supplied focus points (0 when none were given).
  double focus_sup = 0.0;
};

/// Samples |expr| on nested uniform grids of the circle, doubling until two
/// successive sups differ by less than `tol` or the grid reaches kSupGridCap.
/// `focus` adds extra boundary points, e.g. clustered around a peak set; the
/// reported sup is the max over both. Not converging is reported through
/// `converged`, not thrown.
NormCertificate boundary_sup(const AnalyticExpr& expr, double tol,
                             std::span<const Complex> focus = {});

/// Max of |expr| over the uniform n-point grid j/n turns.
double grid_sup(const AnalyticExpr& expr, std::size_t n);

/// Max of |expr| over the polar grid radius i/radial, angle j/angular turns.
double interior_grid_sup(const AnalyticExpr& expr, std::size_t radial = 64, std::size_t angular = 64);

}  // namespace pickpeak
