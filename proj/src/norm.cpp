#include "pickpeak/norm.hpp"

#include <algorithm>
#include <cmath>

namespace pickpeak {

namespace {

double max_abs_on(const AnalyticExpr& expr, std::size_t n, std::size_t first, std::size_t stride) {
  double best = 0.0;
  for (std::size_t j = first; j < n; j += stride)
    best = std::max(best, std::abs(eval(expr, circle_point(static_cast<double>(j) / n))));
  return best;
}

}  // namespace

NormCertificate boundary_sup(const AnalyticExpr& expr, double tol, std::span<const Complex> focus) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "boundary_sup tolerance must be positive");
  NormCertificate cert;
  cert.tolerance = tol;
  std::size_t n = kSupGridStart;
  double sup = max_abs_on(expr, n, 0, 1);
  cert.refinement_history.emplace_back(n, sup);
  while (n < kSupGridCap) {
    // Odd indices only.
    const double refined = std::max(sup, max_abs_on(expr, 2 * n, 1, 2));
    n *= 2;
    cert.refinement_history.emplace_back(n, refined);
    const bool settled = refined - sup < tol;
    sup = refined;
    if (settled) {
      cert.converged = true;
      break;
    }
  }
  cert.grid_size = n;
  for (const Complex& z : focus) cert.focus_sup = std::max(cert.focus_sup, std::abs(eval(expr, z)));
  cert.boundary_sup = std::max(sup, cert.focus_sup);
  return cert;
}

double grid_sup(const AnalyticExpr& expr, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "grid size must be positive");
  return max_abs_on(expr, n, 0, 1);
}

double interior_grid_sup(const AnalyticExpr& expr, std::size_t radial, std::size_t angular) {
  double best = 0.0;
  for (std::size_t i = 0; i < radial; ++i) {
    const double rho = static_cast<double>(i) / radial;
    for (std::size_t j = 0; j < angular; ++j)
      best = std::max(best, std::abs(eval(expr, rho * circle_point(static_cast<double>(j) / angular))));
  }
  return best;
}

}  // namespace pickpeak
