#include "pickpeak/peak.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace pickpeak {

FiniteBoundarySet::FiniteBoundarySet(std::vector<double> angle_turns) : angles_(std::move(angle_turns)) {
  if (angles_.empty()) throw Error(ErrorKind::invalid_argument, "boundary set must be nonempty");
  for (std::size_t k = 0; k < angles_.size(); ++k) {
    const double t = angles_[k];
    if (!(t >= 0.0 && t < 1.0))
      throw Error(ErrorKind::invalid_argument, "boundary angles must lie in [0, 1) turns");
    for (std::size_t i = 0; i < k; ++i) {
      const double gap = std::abs(t - angles_[i]);
      if (std::min(gap, 1.0 - gap) <= kAngleSeparation) {
        std::ostringstream os;
        os << "boundary angles " << i << " and " << k << " are not separated";
        throw Error(ErrorKind::invalid_argument, os.str());
      }
    }
    points_.push_back(circle_point(t));
  }
}

std::vector<Complex> FiniteBoundarySet::focus_points() const {
  constexpr int kSteps = 40 * 13 - 28;  // exponents -13 .. -0.7
  std::vector<Complex> pts;
  pts.reserve(points_.size() * 2 * (kSteps + 1));
  for (double t : angles_) {
    for (int s = 0; s <= kSteps; ++s) {
      const double offset = std::pow(10.0, -13.0 + s / 40.0);
      pts.push_back(circle_point(t + offset));
      pts.push_back(circle_point(t - offset));
    }
  }
  return pts;
}

BoundaryData::BoundaryData(FiniteBoundarySet set, std::vector<Complex> values)
    : set_(std::move(set)), values_(std::move(values)) {
  if (values_.size() != set_.size())
    throw Error(ErrorKind::invalid_argument, "boundary values and boundary set differ in length");
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::invalid_argument, "boundary values must be finite");
    if (std::abs(v) > 1.0 + 1e-12)
      throw Error(ErrorKind::invalid_argument, "boundary values must have modulus <= 1");
  }
}

bool BoundaryData::all_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](Complex v) { return v == Complex{}; });
}

PeakFunction peak_function(const FiniteBoundarySet& set, double sharpness) {
  return {herglotz_peak(set.angles(), sharpness), set};
}

PeakFunction shifted_peak(const PeakFunction& peak, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw Error(ErrorKind::invalid_argument, "shift must lie in [0, 1)");
  return {mobius(t, peak.expr), peak.set};
}

AnalyticExpr root_sequence(const PeakFunction& peak, int m) {
  return principal_root(affine(peak.expr, -0.5, 0.5), m);
}

AnalyticExpr lagrange_boundary(const BoundaryData& data) {
  const auto& zeta = data.set().points();
  const std::size_t n = zeta.size();
  if (n > 12)
    std::clog << "warning: Lagrange interpolation on " << n << " boundary nodes may be ill-conditioned\n";
  AnalyticExpr poly = constant(0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (data.values()[k] == Complex{}) continue;
    Complex weight = data.values()[k];
    AnalyticExpr basis = constant(1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      weight /= zeta[k] - zeta[i];
      basis = basis * affine(identity(), 1.0, -zeta[i]);
    }
    poly = poly + affine(basis, weight, 0.0);
  }
  return poly;
}

namespace {

std::vector<Complex> smallness_points(const BoundaryData& data, const PeakInterpolationOptions& options,
                                      const AnalyticExpr& avoid, double smallness) {
  std::vector<Complex> candidates;
  for (std::size_t j = 0; j < options.boundary_grid; ++j)
    candidates.push_back(circle_point(static_cast<double>(j) / options.boundary_grid));
  const auto focus = data.set().focus_points();
  candidates.insert(candidates.end(), focus.begin(), focus.end());
  const auto grid = certification_grid();
  candidates.insert(candidates.end(), grid.begin(), grid.end());
  candidates.insert(candidates.end(), options.extra_points.begin(), options.extra_points.end());

  std::vector<Complex> region;
  for (const Complex& z : candidates) {
    if (std::abs(eval(avoid, z)) >= smallness) region.push_back(z);
  }
  return region;
}

bool small_on(const AnalyticExpr& h, const std::vector<Complex>& region, double smallness) {
  return std::all_of(region.begin(), region.end(),
                     [&](Complex z) { return std::abs(eval(h, z)) < smallness; });
}

}  // namespace

PeakInterpolation peak_interpolate(const BoundaryData& data, double smallness, const AnalyticExpr& avoid,
                                   double slack, const PeakInterpolationOptions& options) {
  if (!(smallness > 0.0)) throw Error(ErrorKind::invalid_argument, "smallness must be positive");
  if (!(slack >= 0.0)) throw Error(ErrorKind::invalid_argument, "norm slack must be non-negative");
  PeakInterpolation result;
  if (data.all_zero()) {
    result.h = constant(0.0);
    result.certificate = boundary_sup(result.h, options.tol);
    return result;
  }

  const AnalyticExpr p = lagrange_boundary(data);
  const auto region = smallness_points(data, options, avoid, smallness);
  const auto focus = data.set().focus_points();

  for (int level = options.start_level; level < kSharpnessLevels; ++level) {
    const PeakFunction r = peak_function(data.set(), std::ldexp(1.0, -2 * level));
    const int first = level == options.start_level ? options.start_power_log2 : 0;
    // Cap power first.
    if (first > kPowerCapLog2 || !small_on(p * power(r.expr, 1 << kPowerCapLog2), region, smallness))
      continue;
    for (int k = first; k <= kPowerCapLog2; ++k) {
      const AnalyticExpr h = p * power(r.expr, 1 << k);
      if (!small_on(h, region, smallness)) continue;
      NormCertificate cert = boundary_sup(h, options.tol, focus);
      if (cert.boundary_sup > 1.0 + slack + options.tol) continue;
      result.h = h;
      result.sharpness_level = level;
      result.power_log2 = k;
      result.certificate = std::move(cert);
      return result;
    }
  }
  throw Error(ErrorKind::search_exhausted,
              "peak interpolation: smallness and norm targets not certified up to power 2^" +
                  std::to_string(kPowerCapLog2) + " at every sharpness level");
}

}  // namespace pickpeak
