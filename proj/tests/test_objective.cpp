#include <gtest/gtest.h>

#include <random>

#include "densitop/filter.hpp"
#include "densitop/objective.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace densitop {
namespace {

using testing::random_field;
using testing::relative_error;

TEST(Evaluate, MbbInitialComplianceMagnitude) {
  const ComplianceObjective obj(mbb_beam(80, 25, 0.4));
  const double c = obj.evaluate(DensityField(25, 80, 0.4));
  // Above the best designs (~3.4e2) and in the low 1e3 range at the start.
  EXPECT_GT(c, 1.28e3);
  EXPECT_LT(c, 1e4);
}

TEST(Evaluate, QuadraticInForces) {
  ProblemSpec spec = mbb_beam(8, 5);
  std::mt19937 rng(31);
  const DensityField x = random_field(5, 8, rng, 0.2, 1.0);
  const double c1 = ComplianceObjective(spec).evaluate(x);
  for (double& f : spec.forces) f *= 2.0;
  const double c2 = ComplianceObjective(spec).evaluate(x);
  EXPECT_NEAR(c2, 4.0 * c1, 1e-10 * c2);
}

TEST(Evaluate, MatchesDenseOracle) {
  std::mt19937 rng(32);
  const ProblemSpec spec = mbb_beam(4, 3);
  const ComplianceObjective obj(spec);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityField x = random_field(3, 4, rng);
    EXPECT_LE(relative_error(obj.evaluate(x), oracles::dense_objective(x, spec)), 1e-9);
  }
}

TEST(Gradient, ComplianceMatchesEvaluate) {
  std::mt19937 rng(33);
  const ComplianceObjective obj(mbb_beam(10, 6));
  const DensityField x = random_field(6, 10, rng);
  EXPECT_EQ(obj.gradient(x).compliance, obj.evaluate(x));
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937 rng(34);
  const ProblemSpec spec = mbb_beam(6, 4);
  const ComplianceObjective obj(spec);
  const DensityField x = random_field(4, 6, rng, 0.2, 0.9);
  const ObjectiveReport report = obj.gradient(x);
  std::uniform_int_distribution<int> pick(0, 23);
  std::vector<int> comps;
  for (int k = 0; k < 10; ++k) comps.push_back(pick(rng));
  const DensityField fd = oracles::finite_difference_grad(
      [&](const DensityField& y) { return obj.evaluate(y); }, x, 1e-6, comps);
  for (int i : comps) {
    EXPECT_LT(relative_error(report.grad[i], fd[i], 1e-8), 1e-4) << "component " << i;
  }
}

TEST(Gradient, MatchesFiniteDifferencesWithMaskAndNoFilter) {
  std::mt19937 rng(35);
  ProblemSpec spec = cantilever(6, 4);
  spec.mask = DensityField(4, 6, 1.0);
  (*spec.mask)(1, 2) = 0.0;
  (*spec.mask)(2, 4) = 0.0;
  for (bool use_filter : {false, true}) {
    ObjectiveOptions opts;
    opts.use_filter = use_filter;
    const ComplianceObjective obj(spec, opts);
    const DensityField x = random_field(4, 6, rng, 0.2, 0.9);
    const ObjectiveReport report = obj.gradient(x);
    const DensityField fd = oracles::finite_difference_grad(
        [&](const DensityField& y) { return obj.evaluate(y); }, x, 1e-6);
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_LT(relative_error(report.grad[i], fd[i], 1e-8), 1e-4) << "component " << i;
    }
    EXPECT_EQ(report.grad(1, 2), 0.0);
  }
}

TEST(Gradient, SolidDesignWithoutFilterHasNonPositiveSensitivities) {
  ObjectiveOptions opts;
  opts.use_filter = false;
  const ComplianceObjective obj(mbb_beam(8, 5), opts);
  const ObjectiveReport r = obj.gradient(DensityField(5, 8, 1.0));
  for (double g : r.grad.values()) EXPECT_LE(g, 0.0);
}

TEST(Gradient, GenericAdjointEqualsSelfAdjointShortcut) {
  std::mt19937 rng(36);
  const ProblemSpec spec = mbb_beam(4, 3);
  ObjectiveOptions generic;
  generic.adjoint = AdjointMode::kGenericSolve;
  const DensityField x = random_field(3, 4, rng, 0.1, 1.0);
  const ObjectiveReport a = ComplianceObjective(spec).gradient(x);
  const ObjectiveReport b = ComplianceObjective(spec, generic).gradient(x);
  double scale = 0.0;
  for (double g : a.grad.values()) scale = std::max(scale, std::abs(g));
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_LE(std::abs(a.grad[i] - b.grad[i]), 1e-10 * scale) << i;
  }
}

TEST(Gradient, VolumeGradientUniformWithoutMask) {
  ObjectiveOptions opts;
  opts.use_filter = false;
  const ObjectiveReport r = ComplianceObjective(mbb_beam(6, 4), opts).gradient(DensityField(4, 6, 0.4));
  for (double g : r.volume_grad.values()) EXPECT_NEAR(g, 1.0 / 24, 1e-16);
  EXPECT_NEAR(r.volume, 0.4, 1e-15);
}

TEST(Constraint, Values) {
  const ProblemSpec spec = mbb_beam(6, 4, 0.4);
  EXPECT_NEAR(volume_constraint(DensityField(4, 6, 0.4), spec), 0.0, 1e-15);
  EXPECT_NEAR(volume_constraint(DensityField(4, 6, 0.0), spec), -0.4, 1e-15);
  EXPECT_NEAR(volume_constraint(DensityField(4, 6, 1.0), spec), 0.6, 1e-15);
}

TEST(Constraint, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(37);
  ProblemSpec spec = mbb_beam(5, 4);
  spec.mask = DensityField(4, 5, 1.0);
  (*spec.mask)(0, 0) = 0.0;
  const DensityField x = random_field(4, 5, rng);
  const DensityField g = volume_constraint_gradient(spec);
  const DensityField fd = oracles::finite_difference_grad(
      [&](const DensityField& y) { return volume_constraint(y, spec); }, x, 1e-6);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-9);
}

}  // namespace
}  // namespace densitop
