#pragma once

// Pick interpolation on the unit disc: the Pick matrix, its PSD verdict,
// Schur-reduction synthesis and the minimal interpolation norm.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pickpeak/expr.hpp"
#include "pickpeak/norm.hpp"

namespace pickpeak {

inline constexpr double kNodeSeparation = 1e-12;
inline constexpr double kNodeBoundaryGap = 1e-10;

/// Interior nodes z_j with targets w_j.
class PickData {
 public:
  PickData() = default;
  /// Validates |z_j| <= 1 - kNodeBoundaryGap, pairwise separation and equal lengths.
  PickData(std::vector<Complex> nodes, std::vector<Complex> targets);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  const std::vector<Complex>& nodes() const noexcept { return nodes_; }
  const std::vector<Complex>& targets() const noexcept { return targets_; }

  /// Same nodes, targets divided by `t`.
  PickData scaled_targets(double t) const;

 private:
  std::vector<Complex> nodes_;
  std::vector<Complex> targets_;
};

class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd entries);

  Eigen::Index order() const noexcept { return entries_.rows(); }
  Complex operator()(Eigen::Index j, Eigen::Index k) const { return entries_(j, k); }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  double trace() const noexcept { return entries_.diagonal().real().sum(); }

 private:
  Eigen::MatrixXcd entries_;
};

/// Entries (1 - w_j conj(w_k)) / (1 - z_j conj(z_k)); exactly Hermitian.
HermitianMatrix build_pick_matrix(const PickData& data);

enum class PsdVerdict { psd, not_psd, marginal };
const char* to_string(PsdVerdict verdict) noexcept;

struct PsdResult {
  PsdVerdict verdict = PsdVerdict::psd;
  double min_eigenvalue = 0.0;
};

/// psd if lambda_min >= -tol (1 + trace), not-psd below -1e3 tol (1 + trace),
/// marginal in between. The empty matrix is psd with lambda_min = 0.
PsdResult is_psd(const HermitianMatrix& m, double tol);

struct SolverResult {
  AnalyticExpr solution;
  std::vector<double> residuals;
  NormCertificate norm_certificate;
  /// Some Schur step met a target within tolerance of the unit circle.
  bool marginal = false;
};

/// Thrown when a Schur-reduced target leaves the closed unit disc.
class UnsolvableError : public Error {
 public:
  UnsolvableError(std::size_t depth, double modulus);
  std::size_t depth() const noexcept { return depth_; }
  double modulus() const noexcept { return modulus_; }

 private:
  std::size_t depth_;
  double modulus_;
};

/// One Schur step: targets phi_{w_1}(w_j) / b_{z_1}(z_j) on nodes z_2..z_n.
/// Requires |w_1| < 1.
PickData schur_reduce(const PickData& data);

/// Interpolant of sup norm <= 1 built by Schur reduction with the zero function
/// as base parameter; a rational function of degree <= n.
SolverResult solve_pick(const PickData& data, double tol);

/// Smallest t (to within `tol`) such that the targets divided by t admit a psd
/// Pick matrix. Returns 0 when every target is 0.
double minimal_norm(const PickData& data, double tol);

struct OracleResult {
  /// Least scale found for which some Blaschke product times the scale meets
  /// every target to within kOracleResidual.
  double norm = 0.0;
  double best_residual = 0.0;
  bool budget_exhausted = false;
};

inline constexpr double kOracleResidual = 1e-7;

/// Independent estimate of the minimal norm: searches scaled Blaschke products
/// of degree <= max_degree with `samples` random restarts per degree. Uses no
/// Pick matrix. Deterministic (fixed seeds).
OracleResult brute_force_oracle(const PickData& data, int max_degree, int samples);

}  // namespace pickpeak
