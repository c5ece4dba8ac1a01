#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pickpeak/expr.hpp"

namespace testing_support {

using pickpeak::Complex;

inline Complex random_disc(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = radius * std::sqrt(u(rng));
  return std::polar(rho, 2.0 * std::numbers::pi * u(rng));
}

inline Complex random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
}

/// Nodes in |z| <= radius with pairwise distance >= gap.
inline std::vector<Complex> spread_nodes(std::mt19937_64& rng, std::size_t n, double radius, double gap) {
  std::vector<Complex> nodes;
  while (nodes.size() < n) {
    const Complex z = random_disc(rng, radius);
    bool ok = true;
    for (const Complex& y : nodes) ok = ok && std::abs(z - y) >= gap;
    if (ok) nodes.push_back(z);
  }
  return nodes;
}

/// Angles in [0, 1) turns with circular separation >= gap.
inline std::vector<double> spread_angles(std::mt19937_64& rng, std::size_t n, double gap) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> angles;
  while (angles.size() < n) {
    const double t = u(rng);
    bool ok = true;
    for (double s : angles) {
      const double d = std::abs(t - s);
      ok = ok && std::min(d, 1.0 - d) >= gap;
    }
    if (ok) angles.push_back(t);
  }
  return angles;
}

/// c * prod_k (z - a_k) / (1 - conj(a_k) z), evaluated directly.
inline Complex blaschke(const std::vector<Complex>& zeros, Complex c, Complex z) {
  Complex v = c;
  for (const Complex& a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
  return v;
}

}  // namespace testing_support
