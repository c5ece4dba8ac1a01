#include "pickpeak/pick.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pickpeak {

PickData::PickData(std::vector<Complex> nodes, std::vector<Complex> targets)
    : nodes_(std::move(nodes)), targets_(std::move(targets)) {
  if (nodes_.size() != targets_.size())
    throw Error(ErrorKind::invalid_argument, "Pick nodes and targets differ in length");
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    for (Complex c : {nodes_[j], targets_[j]}) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorKind::invalid_argument, "Pick data must be finite");
    }
    if (std::abs(nodes_[j]) > 1.0 - kNodeBoundaryGap) {
      std::ostringstream os;
      os << "Pick node " << j << " = " << nodes_[j] << " is not strictly inside the disc";
      throw Error(ErrorKind::invalid_argument, os.str());
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (std::abs(nodes_[j] - nodes_[k]) <= kNodeSeparation) {
        std::ostringstream os;
        os << "Pick nodes " << k << " and " << j << " coincide";
        throw Error(ErrorKind::invalid_argument, os.str());
      }
    }
  }
}

PickData PickData::scaled_targets(double t) const {
  std::vector<Complex> w = targets_;
  for (auto& v : w) v /= t;
  return PickData(nodes_, std::move(w));
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw Error(ErrorKind::invalid_argument, "Hermitian matrix must be square");
}

const char* to_string(PsdVerdict verdict) noexcept {
  switch (verdict) {
    case PsdVerdict::psd: return "psd";
    case PsdVerdict::not_psd: return "not-psd";
    case PsdVerdict::marginal: return "marginal";
  }
  return "unknown";
}

HermitianMatrix build_pick_matrix(const PickData& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto& z = data.nodes();
  const auto& w = data.targets();
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = (1.0 - std::norm(w[j])) / (1.0 - std::norm(z[j]));
    for (Eigen::Index k = j + 1; k < n; ++k) {
      m(j, k) = (1.0 - w[j] * std::conj(w[k])) / (1.0 - z[j] * std::conj(z[k]));
      m(k, j) = std::conj(m(j, k));
    }
  }
  return HermitianMatrix(std::move(m));
}

PsdResult is_psd(const HermitianMatrix& m, double tol) {
  if (m.order() == 0) return {PsdVerdict::psd, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::computation, "Hermitian eigensolver did not converge");
  const double lambda_min = solver.eigenvalues().minCoeff();
  if (!std::isfinite(lambda_min))
    throw Error(ErrorKind::computation, "Hermitian eigensolver returned a non-finite eigenvalue");
  const double scale = 1.0 + m.trace();
  PsdResult result{PsdVerdict::marginal, lambda_min};
  if (lambda_min >= -tol * scale)
    result.verdict = PsdVerdict::psd;
  else if (lambda_min < -1e3 * tol * scale)
    result.verdict = PsdVerdict::not_psd;
  return result;
}

UnsolvableError::UnsolvableError(std::size_t depth, double modulus)
    : Error(ErrorKind::unsolvable,
            "Pick problem unsolvable: reduced target of modulus " + std::to_string(modulus) +
                " at Schur depth " + std::to_string(depth)),
      depth_(depth),
      modulus_(modulus) {}

namespace {

Complex disc_automorphism(Complex a, Complex v) { return (v - a) / (1.0 - std::conj(a) * v); }

struct SchurLevel {
  Complex node;
  Complex target;
};

}  // namespace

PickData schur_reduce(const PickData& data) {
  if (data.empty()) throw Error(ErrorKind::invalid_argument, "cannot reduce an empty Pick problem");
  const Complex z1 = data.nodes()[0];
  const Complex w1 = data.targets()[0];
  if (!(std::abs(w1) < 1.0))
    throw Error(ErrorKind::invalid_argument, "Schur step needs |w_1| < 1");
  std::vector<Complex> nodes(data.nodes().begin() + 1, data.nodes().end());
  std::vector<Complex> targets;
  targets.reserve(nodes.size());
  for (std::size_t j = 1; j < data.size(); ++j)
    targets.push_back(disc_automorphism(w1, data.targets()[j]) /
                      disc_automorphism(z1, data.nodes()[j]));
  return PickData(std::move(nodes), std::move(targets));
}

SolverResult solve_pick(const PickData& data, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "solve_pick tolerance must be positive");
  SolverResult result;
  std::vector<SchurLevel> levels;
  AnalyticExpr tail = constant(0.0);

  PickData current = data;
  for (std::size_t depth = 0; !current.empty(); ++depth) {
    const Complex w1 = current.targets()[0];
    const double modulus = std::abs(w1);
    if (modulus > 1.0 + tol) throw UnsolvableError(depth, modulus);
    if (std::abs(modulus - 1.0) <= tol) {
      // Unimodular target: the constant w_1.
      const Complex forced = modulus > 1.0 ? w1 / modulus : w1;
      for (std::size_t j = 1; j < current.size(); ++j) {
        const double mismatch = std::abs(current.targets()[j] - forced);
        if (mismatch > 1e3 * tol)
          throw UnsolvableError(depth, std::max(modulus, std::abs(current.targets()[j])));
      }
      result.marginal = true;
      tail = constant(forced);
      break;
    }
    levels.push_back({current.nodes()[0], w1});
    current = schur_reduce(current);
  }

  // f = phi_{-w}(b_z(z) g(z)).
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    tail = mobius(-it->target, mobius(it->node, identity()) * tail);
  result.solution = tail;

  for (std::size_t j = 0; j < data.size(); ++j)
    result.residuals.push_back(std::abs(eval(result.solution, data.nodes()[j]) - data.targets()[j]));
  result.norm_certificate = boundary_sup(result.solution, tol);
  return result;
}

double minimal_norm(const PickData& data, double tol) {
  if (data.empty()) throw Error(ErrorKind::invalid_argument, "minimal_norm needs at least one node");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "minimal_norm tolerance must be positive");
  double lo = 0.0;
  for (const Complex& w : data.targets()) lo = std::max(lo, std::abs(w));
  if (lo == 0.0) return 0.0;

  constexpr double kFeasibilityTol = 1e-13;
  auto feasible = [&](double t) {
    return is_psd(build_pick_matrix(data.scaled_targets(t)), kFeasibilityTol).verdict ==
           PsdVerdict::psd;
  };
  if (feasible(lo)) return lo;
  double hi = 2.0 * lo;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace pickpeak
