#pragma once

// Peak functions and peak interpolation for finite subsets of the unit circle.

#include <cstddef>
#include <vector>

#include "pickpeak/expr.hpp"
#include "pickpeak/norm.hpp"

namespace pickpeak {

inline constexpr double kAngleSeparation = 1e-10;
inline constexpr int kPowerCapLog2 = 20;
/// Sharpness levels 4^-s, s = 0..kSharpnessLevels-1, tried by peak_interpolate.
inline constexpr int kSharpnessLevels = 16;

/// Finite E on the unit circle, points exp(2 pi i angle) with angles in [0, 1) turns.
class FiniteBoundarySet {
 public:
  explicit FiniteBoundarySet(std::vector<double> angle_turns);

  std::size_t size() const noexcept { return angles_.size(); }
  const std::vector<double>& angles() const noexcept { return angles_; }
  const std::vector<Complex>& points() const noexcept { return points_; }

  /// Boundary points clustered around each point of E at offsets 10^x turns,
  /// x from -13 to -0.7 in steps of 1/40, on both sides.
  std::vector<Complex> focus_points() const;

 private:
  std::vector<double> angles_;
  std::vector<Complex> points_;
};

/// Values f(zeta_k) on E with max |f| <= 1.
class BoundaryData {
 public:
  BoundaryData(FiniteBoundarySet set, std::vector<Complex> values);

  const FiniteBoundarySet& set() const noexcept { return set_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  bool all_zero() const noexcept;

 private:
  FiniteBoundarySet set_;
  std::vector<Complex> values_;
};

struct PeakFunction {
  AnalyticExpr expr;
  FiniteBoundarySet set;
};

/// r = H/(1+H) with H = 1 + c sum_k (zeta_k + z)/(zeta_k - z). r = 1 on E and
/// |r| < 1 elsewhere on the closed disc. Smaller `sharpness` c narrows the
/// region where |r| is close to 1.
PeakFunction peak_function(const FiniteBoundarySet& set, double sharpness = 1.0);

/// T_t o r with T_t(x) = (x - t)/(1 - t x), 0 <= t < 1. Still 1 on E; tends
/// to -1 off E as t -> 1.
PeakFunction shifted_peak(const PeakFunction& peak, double t);

/// f_m = ((1 - r)/2)^{1/m}: zero on E, sup norm <= 1, |f_m| increasing to 1 off E.
AnalyticExpr root_sequence(const PeakFunction& peak, int m);

/// Polynomial of degree < N through (zeta_k, f(zeta_k)). Prints a warning to
/// std::clog for N > 12.
AnalyticExpr lagrange_boundary(const BoundaryData& data);

struct PeakInterpolationOptions {
  /// Uniform boundary grid used for the smallness check.
  std::size_t boundary_grid = 4096;
  /// Tolerance for the sup-norm certificate.
  double tol = 1e-9;
  /// Extra points where smallness must also hold when |g0| >= smallness.
  std::vector<Complex> extra_points;
  /// Search resumes from this (sharpness level, log2 power) pair.
  int start_level = 0;
  int start_power_log2 = 0;
};

struct PeakInterpolation {
  AnalyticExpr h;
  int sharpness_level = 0;
  int power_log2 = 0;
  NormCertificate certificate;
};

/// h = p r^m with p = lagrange_boundary(data) and r a peak function on E.
/// Searches m = 2^k (k <= kPowerCapLog2) at sharpness 1, then at sharper
/// peak functions, until on the certification points |h| < smallness wherever
/// |avoid| >= smallness and the boundary sup of h is <= 1 + slack + tol.
/// h = f on E exactly. Zero data gives the zero function. Throws
/// search_exhausted when no candidate certifies.
PeakInterpolation peak_interpolate(const BoundaryData& data, double smallness, const AnalyticExpr& avoid,
                                   double slack, const PeakInterpolationOptions& options = {});

}  // namespace pickpeak
