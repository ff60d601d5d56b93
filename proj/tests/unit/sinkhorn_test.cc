#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hmot/error.h"
#include "hmot/ot/exact.h"
#include "hmot/ot/sinkhorn.h"
#include "hmot/ot/softmax.h"
#include "support/oracles.h"

namespace hmot::ot {
namespace {

Heatmap PointMass(int h, int w, int r, int c) {
  Heatmap hm(h, w);
  hm.at(r, c) = 1.0;
  return hm;
}

SinkhornConfig ValueOnly(double eps = 0.01) {
  SinkhornConfig cfg;
  cfg.epsilon = eps;
  cfg.gradient = GradientMode::kNone;
  return cfg;
}

TEST(Sinkhorn, IdenticalInputsNearZero) {
  std::mt19937_64 gen(1);
  const Heatmap u = testing::RandomDistribution(8, 8, gen);
  const auto r = SinkhornW1(u, u, ValueOnly());
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.value, 1e-6);
  EXPECT_GE(r.value, 0.0);
}

TEST(Sinkhorn, SmallGridsConvergeWithinDefaultBudget) {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 40; ++k) {
    const int h = k % 2 == 0 ? 1 : 3, w = k % 2 == 0 ? 4 : 3;
    const Heatmap u = testing::RandomDistribution(h, w, gen), v = testing::RandomDistribution(h, w, gen);
    const auto r = SinkhornW1(u, v, ValueOnly());
    EXPECT_TRUE(r.converged) << k << " marginal error " << r.marginal_error;
    EXPECT_LE(r.iterations_used, SinkhornConfig{}.max_iterations);
  }
}

TEST(Sinkhorn, PointMassesApproachExactAsEpsilonShrinks) {
  const Heatmap u = PointMass(1, 4, 0, 0), v = PointMass(1, 4, 0, 3);
  double prev = INFINITY;
  for (double eps : {0.1, 0.03, 0.01}) {
    const double value = SinkhornW1(u, v, ValueOnly(eps)).value;
    EXPECT_NEAR(value, 1.0, 1e-12);
    EXPECT_LE(std::abs(value - 1.0), prev);
    prev = std::abs(value - 1.0);
  }
}

TEST(Sinkhorn, GaussiansWithinTwoPercentOfExact) {
  const Heatmap u = testing::NormalizedGaussian(16, 16, 3.5, 7.5, 1.0);
  const Heatmap v = testing::NormalizedGaussian(16, 16, 11.5, 7.5, 1.0);
  const double exact = ExactW1(u, v).distance;
  const auto r = SinkhornW1(u, v, ValueOnly());
  ASSERT_TRUE(r.converged);
  EXPECT_LE(std::abs(r.value - exact) / exact, 0.02);
}

TEST(Sinkhorn, Symmetric) {
  std::mt19937_64 gen(2);
  const Heatmap u = testing::RandomDistribution(6, 6, gen);
  const Heatmap v = testing::RandomDistribution(6, 6, gen);
  SinkhornConfig cfg = ValueOnly();
  cfg.marginal_tolerance = 1e-12;
  EXPECT_LE(std::abs(SinkhornW1(u, v, cfg).value - SinkhornW1(v, u, cfg).value), 1e-8);
}

TEST(Sinkhorn, Deterministic) {
  std::mt19937_64 gen(3);
  const Heatmap z = testing::RandomLogits(6, 6, gen);
  const Heatmap v = testing::RandomDistribution(6, 6, gen);
  const auto a = SinkhornW1(Softmax(z), v, SinkhornConfig{});
  const auto b = SinkhornW1(Softmax(z), v, SinkhornConfig{});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.gradient, b.gradient);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
}

TEST(Sinkhorn, PlanMarginals) {
  std::mt19937_64 gen(4);
  const Heatmap u = testing::RandomDistribution(5, 5, gen);
  const Heatmap v = testing::RandomDistribution(5, 5, gen);
  const SinkhornConfig cfg = ValueOnly();
  const auto r = SinkhornW1(u, v, cfg);
  const auto plan = MaterializePlan(r.potentials);
  const auto f = plan.Check(u, v);
  EXPECT_LE(f.source_error, cfg.marginal_tolerance);
  EXPECT_LE(f.target_error, 1e-12);
  EXPECT_GE(f.min_entry, 0.0);
  EXPECT_NEAR(plan.Cost(GroundCost(u.shape())), r.value, 1e-12);
}

TEST(Sinkhorn, ReportsNonConvergence) {
  std::mt19937_64 gen(5);
  const Heatmap u = testing::RandomDistribution(8, 8, gen);
  const Heatmap v = testing::RandomDistribution(8, 8, gen);
  SinkhornConfig cfg = ValueOnly(0.001);
  cfg.max_iterations = 2;
  cfg.epsilon_scaling = false;
  const auto r = SinkhornW1(u, v, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations_used, 2);
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(Sinkhorn, WarmStartReachesSameValue) {
  std::mt19937_64 gen(6);
  const Heatmap u = testing::RandomDistribution(6, 6, gen);
  const Heatmap v = testing::RandomDistribution(6, 6, gen);
  SinkhornConfig cfg = ValueOnly();
  cfg.marginal_tolerance = 1e-10;
  const auto cold = SinkhornW1(u, v, cfg);
  const auto warm = SinkhornW1(u, v, cfg, &cold.potentials);
  EXPECT_NEAR(cold.value, warm.value, 1e-9);
  EXPECT_LT(warm.iterations_used, cold.iterations_used);
}

TEST(Sinkhorn, SmallEpsilonStaysFinite) {
  const Heatmap u = testing::NormalizedGaussian(16, 16, 2, 2, 1.0);
  const Heatmap v = testing::NormalizedGaussian(16, 16, 13, 13, 1.0);
  const auto r = SinkhornW1(u, v, ValueOnly(1e-4));
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_NEAR(r.value, ExactW1(u, v).distance, 1e-3);
}

TEST(Sinkhorn, StationaryAtTheTarget) {
  const Heatmap v = testing::NormalizedGaussian(12, 12, 5.2, 6.1, 1.5);
  const auto g = SinkhornGradient(LogitsFromDistribution(v), v, SinkhornConfig{});
  ASSERT_TRUE(g.converged);
  double linf = 0.0;
  for (double x : g.gradient.values()) linf = std::max(linf, std::abs(x));
  EXPECT_LE(linf, 1e-4);
}

TEST(Sinkhorn, ImplicitGradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(8);
  const Heatmap z = testing::RandomLogits(4, 4, gen);
  const Heatmap v = testing::RandomDistribution(4, 4, gen);
  SinkhornConfig cfg;
  cfg.marginal_tolerance = 1e-13;
  const auto g = SinkhornGradient(z, v, cfg).gradient;
  SinkhornConfig value_cfg = cfg;
  value_cfg.gradient = GradientMode::kNone;
  auto f = [&](const Heatmap& x) { return SinkhornW1(testing::SoftmaxOracle(x), v, value_cfg).value; };
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_LE(testing::RelativeError(g[i], testing::CentralDifference(f, z, i, 1e-5), 1e-6), 1e-4) << i;
  }
}

TEST(Sinkhorn, RejectsBadInputs) {
  const Heatmap u(2, 2, 0.25);
  EXPECT_THROW(SinkhornW1(u, Heatmap(2, 2), ValueOnly()), InvalidInput);
  EXPECT_THROW(SinkhornW1(u, Heatmap(1, 4, 0.25), ValueOnly()), InvalidInput);
  SinkhornConfig bad;
  bad.epsilon = 0.0;
  EXPECT_THROW(SinkhornW1(u, u, bad), InvalidInput);
  bad = SinkhornConfig{};
  bad.max_iterations = 0;
  EXPECT_THROW(bad.Validate(), InvalidInput);
}

}  // namespace
}  // namespace hmot::ot
