#include "pickpeak/combine.hpp"

#include <sstream>

namespace pickpeak {

CombinedProblem::CombinedProblem(BoundaryData boundary, PickData interior, double epsilon)
    : boundary_(std::move(boundary)), interior_(std::move(interior)), epsilon_(epsilon) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_))
    throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
}

namespace {

std::string infeasible_message(const PsdResult& psd) {
  std::ostringstream os;
  os << "interior Pick matrix is " << to_string(psd.verdict) << " (lambda_min = " << psd.min_eigenvalue << ")";
  return os.str();
}

}  // namespace

InfeasibleError::InfeasibleError(HermitianMatrix matrix, PsdResult psd)
    : Error(ErrorKind::infeasible, infeasible_message(psd)), matrix_(std::move(matrix)), psd_(psd) {}

CertificationError::CertificationError(const std::string& message, CombinedSolution solution)
    : Error(ErrorKind::certification_failed, message), solution_(std::move(solution)) {}

CombinedSolution solve_combined(const CombinedProblem& problem, double tol, const CombinedOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
  const PickData& interior = problem.interior();
  const BoundaryData& boundary = problem.boundary();
  const std::size_t n = interior.size();
  const std::span<const Complex> alphas = interior.nodes();
  const std::span<const Complex> targets = interior.targets();

  auto matrix = build_pick_matrix(interior);
  const PsdResult psd = is_psd(matrix, tol);
  if (psd.verdict != PsdVerdict::psd) throw InfeasibleError(std::move(matrix), psd);

  const DiscContext ctx(boundary.set(), options.grid, tol);
  const auto family = separating_family(ctx, boundary.set(), alphas);
  const double eps_internal = problem.epsilon() / (1.0 + static_cast<double>(n) * family.bound);

  // l = (1 + eps/2) * (Pick solution for the targets divided by 1 + eps/2).
  AnalyticExpr l = constant(0.0);
  if (n > 0) {
    const double stretch = 1.0 + eps_internal / 2;
    l = affine(solve_pick(interior.scaled_targets(stretch), tol).solution, stretch, 0.0);
  }

  const auto first = step1(ctx, boundary, alphas, targets, l, eps_internal);
  const auto second = step2(ctx, first.G, family, alphas, targets);

  CombinedSolution solution;
  solution.F = second.F;
  solution.sigma = second.sigma;
  solution.certificate = ctx.norm_estimate(solution.F);
  for (std::size_t k = 0; k < boundary.set().size(); ++k)
    solution.boundary_residuals.push_back(
        std::abs(eval(solution.F, boundary.set().points()[k]) - boundary.values()[k]));
  for (std::size_t j = 0; j < n; ++j)
    solution.interior_residuals.push_back(std::abs(eval(solution.F, alphas[j]) - targets[j]));

  auto& budget = solution.budget_report;
  budget.epsilon_internal = eps_internal;
  budget.measured_m = family.bound;
  budget.predicted_bound = 1.0 + eps_internal * (1.0 + static_cast<double>(n) * family.bound);
  budget.step1_sup = first.certificate.boundary_sup;
  for (std::size_t j = 0; j < n; ++j)
    budget.correction_sum += std::abs(second.sigma[j]) * ctx.norm_estimate(family.members[j]).boundary_sup;
  budget.sequence_index = first.sequence_index;
  budget.primitive_level = first.primitive_level;
  budget.primitive_power_log2 = first.primitive_power_log2;

  const auto worst = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  };
  std::ostringstream failure;
  if (worst(solution.boundary_residuals) > tol)
    failure << "boundary residual " << worst(solution.boundary_residuals) << " exceeds " << tol << "; ";
  if (worst(solution.interior_residuals) > tol)
    failure << "interior residual " << worst(solution.interior_residuals) << " exceeds " << tol << "; ";
  if (solution.certificate.boundary_sup > 1.0 + problem.epsilon() + tol)
    failure << "sup norm " << solution.certificate.boundary_sup << " exceeds 1 + epsilon; ";
  if (!failure.str().empty()) throw CertificationError("certification failed: " + failure.str(), solution);
  return solution;
}

}  // namespace pickpeak
