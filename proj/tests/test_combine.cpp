#include <doctest.h>

#include <random>

#include "pickpeak/combine.hpp"
#include "support.hpp"

using namespace pickpeak;
using testing_support::blaschke;
using testing_support::random_disc;
using testing_support::random_unimodular;
using testing_support::spread_angles;
using testing_support::spread_nodes;

static_assert(AlgebraContext<DiscContext>);

namespace {

constexpr double kTol = 1e-9;

DiscContext context_for(const FiniteBoundarySet& set) { return DiscContext(set, 4096, kTol); }

}  // namespace

TEST_CASE("separating_family on a single boundary point") {
  const FiniteBoundarySet set({0.0});
  const DiscContext ctx = context_for(set);
  const std::vector<Complex> alphas{0.0};
  const auto family = separating_family(ctx, set, std::span<const Complex>(alphas));
  REQUIRE(family.members.size() == 1);
  const AnalyticExpr& phi = family.members[0];
  CHECK(std::abs(eval(phi, 0.0) - 1.0) < 1e-12);
  CHECK(std::abs(eval(phi, 1.0)) < 1e-12);
  CHECK(family.bound <= 1.5 + 1e-9);
  const AnalyticExpr r = peak_function(set).expr;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Complex z = random_disc(rng);
    CHECK(std::abs(eval(phi, z) - 3.0 * (1.0 - eval(r, z))) < 1e-12);
  }
}

TEST_CASE("separating_family vanishes at the other points and on E") {
  const FiniteBoundarySet one({0.0});
  const std::vector<Complex> two{0.0, 0.5};
  const auto f2 = separating_family(context_for(one), one, std::span<const Complex>(two));
  CHECK(std::abs(eval(f2.members[0], 0.5)) < 1e-12);
  CHECK(std::abs(eval(f2.members[1], 0.0)) < 1e-12);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteBoundarySet set(spread_angles(rng, 1 + trial % 4, 0.01));
    const auto alphas = spread_nodes(rng, 1 + trial % 4, 0.9, 0.05);
    const auto family = separating_family(context_for(set), set, std::span<const Complex>(alphas));
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        const Complex expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(eval(family.members[j], alphas[i]) - expected) < 1e-12);
      }
      for (const Complex& zeta : set.points()) CHECK(std::abs(eval(family.members[j], zeta)) < 1e-12);
      CHECK(boundary_sup(family.members[j], kTol).boundary_sup <= family.bound + 1e-9);
    }
  }
}

TEST_CASE("step2 examples") {
  const FiniteBoundarySet set({0.0});
  const DiscContext ctx = context_for(set);
  const std::vector<Complex> alphas{0.0};
  const auto family = separating_family(ctx, set, std::span<const Complex>(alphas));

  const AnalyticExpr G = affine(identity(), 0.5, 0.3);
  const std::vector<Complex> exact{0.3};
  const auto same = step2(ctx, G, family, std::span<const Complex>(alphas), std::span<const Complex>(exact));
  CHECK(same.sigma[0] == Complex(0.0));
  CHECK(serialize(same.F) == serialize(G));

  const std::vector<Complex> shifted{0.25};
  const auto moved = step2(ctx, G, family, std::span<const Complex>(alphas), std::span<const Complex>(shifted));
  CHECK(std::abs(moved.sigma[0] - 0.05) < 1e-15);
  CHECK(std::abs(eval(moved.F, 0.0) - 0.25) < 1e-15);
  CHECK(std::abs(eval(moved.F, 1.0) - eval(G, 1.0)) < 1e-15);
}

TEST_CASE("step1 on a single boundary point") {
  const FiniteBoundarySet set({0.0});
  const BoundaryData boundary(set, {1.0});
  const DiscContext ctx = context_for(set);
  const std::vector<Complex> alphas{0.0};
  const std::vector<Complex> targets{0.3};
  const double eps = 0.1;
  const auto out = step1(ctx, boundary, std::span<const Complex>(alphas), std::span<const Complex>(targets),
                         constant(0.3), eps);
  CHECK(std::abs(eval(out.g, 0.0) - 0.3) < eps / 2);
  CHECK(std::abs(eval(out.G, 0.0) - 0.3) < eps);
  CHECK(std::abs(eval(out.G, 1.0) - 1.0) < 1e-12);
  CHECK(out.certificate.boundary_sup <= 1.0 + eps + kTol);
}

TEST_CASE("step1 with zero boundary data or no interior points") {
  const FiniteBoundarySet set({0.0, 0.5});
  const DiscContext ctx = context_for(set);
  const std::vector<Complex> alphas{0.2};
  const std::vector<Complex> targets{0.4};
  const auto zero = step1(ctx, BoundaryData(set, {0.0, 0.0}), std::span<const Complex>(alphas),
                          std::span<const Complex>(targets), constant(0.4), 0.1);
  CHECK(zero.h.is_constant());
  for (const Complex& zeta : set.points()) CHECK(std::abs(eval(zero.G, zeta)) < 1e-12);

  const auto bare = step1(ctx, BoundaryData(set, {0.5, -0.5}), std::span<const Complex>(),
                          std::span<const Complex>(), constant(0.0), 0.1);
  CHECK(bare.sequence_index == 0);
  CHECK(std::abs(eval(bare.G, 1.0) - 0.5) < 1e-12);
}

TEST_CASE("step1 rejects a hypothesis function that misses the targets") {
  const FiniteBoundarySet set({0.0});
  const DiscContext ctx = context_for(set);
  const std::vector<Complex> alphas{0.0};
  const std::vector<Complex> targets{0.3};
  CHECK_THROWS_AS(step1(ctx, BoundaryData(set, {1.0}), std::span<const Complex>(alphas),
                        std::span<const Complex>(targets), constant(0.2), 0.1),
                  Error);
  CHECK_THROWS_AS(step1(ctx, BoundaryData(set, {1.0}), std::span<const Complex>(alphas),
                        std::span<const Complex>(targets), affine(identity(), 2.0, 0.3), 0.1),
                  Error);
}

TEST_CASE("solve_combined examples") {
  const CombinedProblem bare(BoundaryData(FiniteBoundarySet({0.0}), {0.5}), PickData(), 0.1);
  const auto a = solve_combined(bare, kTol);
  CHECK(std::abs(eval(a.F, 1.0) - 0.5) < 1e-12);
  CHECK(a.certificate.boundary_sup <= 1.1 + kTol);

  const CombinedProblem fixture(BoundaryData(FiniteBoundarySet({0.0}), {1.0}), PickData({0.0}, {0.3}), 0.1);
  const auto b = solve_combined(fixture, kTol);
  CHECK(std::abs(eval(b.F, 1.0) - 1.0) < 1e-7);
  CHECK(std::abs(eval(b.F, 0.0) - 0.3) < 1e-7);
  CHECK(b.certificate.boundary_sup <= 1.1 + kTol);

  const CombinedProblem bad(BoundaryData(FiniteBoundarySet({0.0}), {1.0}), PickData({0.0, 0.5}, {0.0, 0.9}), 0.1);
  try {
    solve_combined(bad, kTol);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.psd().verdict == PsdVerdict::not_psd);
    CHECK(e.psd().min_eigenvalue < 0.0);
    CHECK(e.matrix().order() == 2);
  }
  CHECK_THROWS_AS(CombinedProblem(BoundaryData(FiniteBoundarySet({0.0}), {1.0}), PickData(), 0.0), Error);
}

TEST_CASE("solve_combined keeps E-values, hits the targets and respects the budget") {
  const CombinedProblem problem(
      BoundaryData(FiniteBoundarySet({0.0, 0.25, 0.5}), {0.9, -0.9, Complex(0, -0.9)}),
      PickData({0.0, 0.3}, {0.2, Complex(0.1, 0.2)}), 0.05);
  const auto s = solve_combined(problem, kTol);
  for (double r : s.boundary_residuals) CHECK(r <= 1e-10);
  for (double r : s.interior_residuals) CHECK(r <= 1e-8);
  const auto& b = s.budget_report;
  CHECK(b.epsilon_internal == doctest::Approx(0.05 / (1.0 + 2.0 * b.measured_m)));
  CHECK(s.certificate.boundary_sup <= b.predicted_bound + kTol);
  CHECK(s.certificate.boundary_sup <= 1.05 + kTol);
  CHECK(b.step1_sup <= 1.0 + b.epsilon_internal + kTol);
  for (std::size_t j = 0; j < s.sigma.size(); ++j) CHECK(std::abs(s.sigma[j]) < b.epsilon_internal);
}

TEST_CASE("a smaller epsilon never yields a worse solution") {
  const BoundaryData boundary(FiniteBoundarySet({0.1, 0.6}), {Complex(0.6, 0.6), -0.7});
  const PickData interior({Complex(0.2, 0.1)}, {0.5});
  const double eps1 = 0.02;
  const double eps2 = 0.1;
  const auto s1 = solve_combined(CombinedProblem(boundary, interior, eps1), kTol);
  const auto s2 = solve_combined(CombinedProblem(boundary, interior, eps2), kTol);
  CHECK(s1.certificate.boundary_sup <= 1.0 + eps1 + kTol);
  CHECK(s1.certificate.boundary_sup <= 1.0 + eps2 + kTol);
  CHECK(s2.certificate.boundary_sup <= 1.0 + eps2 + kTol);
}

TEST_CASE("solve_combined succeeds exactly when the Pick matrix is psd") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> noise(-0.4, 0.4);
  int feasible = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const FiniteBoundarySet set(spread_angles(rng, 1 + trial % 3, 0.05));
    std::vector<Complex> values;
    for (std::size_t k = 0; k < set.size(); ++k) values.push_back(random_disc(rng));
    const auto nodes = spread_nodes(rng, n, 0.8, 0.1);
    std::vector<Complex> zeros;
    for (std::size_t k = 0; k < n; ++k) zeros.push_back(random_disc(rng, 0.8));
    const Complex c = random_unimodular(rng);
    std::vector<Complex> targets;
    for (const Complex& z : nodes) {
      Complex w = 0.9 * blaschke(zeros, c, z);
      if (trial % 2 == 1) w += Complex(noise(rng), noise(rng));
      targets.push_back(w);
    }
    const PickData interior(nodes, targets);
    const auto m = build_pick_matrix(interior);
    const auto psd = is_psd(m, kTol);
    if (std::abs(psd.min_eigenvalue) <= 1e-6 * (1.0 + m.trace())) continue;
    bool solved = false;
    try {
      solve_combined(CombinedProblem(BoundaryData(set, values), interior, 0.1), kTol);
      solved = true;
    } catch (const InfeasibleError&) {
    }
    CHECK(solved == (psd.verdict == PsdVerdict::psd));
    (solved ? feasible : infeasible) += 1;
  }
  CHECK(feasible >= 3);
  CHECK(infeasible >= 1);
}
