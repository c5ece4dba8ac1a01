#include <cmath>

#include "pickpeak/combine.hpp"

namespace pickpeak {

DiscContext::DiscContext(const FiniteBoundarySet& focus_set, std::size_t grid, double tol)
    : focus_(focus_set.focus_points()), grid_(grid), tol_(tol) {
  if (grid_ == 0) throw Error(ErrorKind::invalid_argument, "grid size must be positive");
  if (!(tol_ > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
}

AnalyticExpr DiscContext::vanishing_sequence(const PeakFunction& peak, int k) const {
  // (1 - P)/2 with P = T_t o r.
  if (k == 0) return root_sequence(peak, 1);
  return root_sequence(shifted_peak(peak, 1.0 - std::ldexp(1.0, -k)), 1);
}

PrimitiveResult<AnalyticExpr> DiscContext::interpolation_primitive(const BoundaryData& data,
                                                                   const AnalyticExpr& region,
                                                                   const PrimitiveRequest& request) const {
  PeakInterpolationOptions options;
  options.boundary_grid = grid_;
  options.tol = tol_;
  options.extra_points = request.must_be_small;
  options.start_level = request.start_level;
  options.start_power_log2 = request.start_power_log2;
  auto found = peak_interpolate(data, request.smallness, region, request.slack, options);
  return {std::move(found.h), found.sharpness_level, found.power_log2};
}

AnalyticExpr DiscContext::separator(std::size_t j, std::span<const Complex> points) const {
  AnalyticExpr k = pickpeak::constant(1.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i != j) k = k * affine(identity(), 1.0, -points[i]);
  }
  return k;
}

}  // namespace pickpeak
