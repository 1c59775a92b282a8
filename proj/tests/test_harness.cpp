// Least-squares fitting and the verification experiments.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bfkglue/harness.hpp"
#include "bfkglue/io.hpp"

using namespace bfkglue;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

ModelConfig torus(double L = 1) {
  ModelConfig c;
  c.L = L;
  return c;
}

ModelConfig sphere() {
  ModelConfig c;
  c.cross_section = CrossSection::kSphere;
  c.radius = 1;
  return c;
}

const Comparison& comparison(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.comparisons)
    if (c.name == name) return c;
  throw std::out_of_range(name);
}

}  // namespace

TEST(LeastSquares, RecoversPolynomial) {
  const auto grid = linear_grid(-1, 2, 15);
  FitSpec spec{{{"c0", [](double) { return 1.0; }}, {"c1", [](double x) { return x; }}, {"c2", [](double x) { return x * x; }}},
               grid};
  std::vector<double> y;
  for (double x : grid) y.push_back(0.5 - 2 * x + 0.25 * x * x);
  const auto f = least_squares(spec, y);
  EXPECT_NEAR(f.value("c0", spec), 0.5, 1e-13);
  EXPECT_NEAR(f.value("c1", spec), -2.0, 1e-13);
  EXPECT_NEAR(f.value("c2", spec), 0.25, 1e-13);
  EXPECT_FALSE(f.rejected);
  EXPECT_LT(f.max_abs_residual, 1e-13);
}

TEST(LeastSquares, StandardErrorsScaleWithNoise) {
  const auto grid = linear_grid(0, 1, 200);
  FitSpec spec{{{"c0", [](double) { return 1.0; }}, {"c1", [](double x) { return x; }}}, grid};
  std::vector<double> y;
  for (std::size_t i = 0; i < grid.size(); ++i) y.push_back(1 + grid[i] + (i % 2 ? 1e-3 : -1e-3));
  const auto f = least_squares(spec, y);
  EXPECT_NEAR(f.value("c1", spec), 1.0, 1e-4);
  EXPECT_GT(f.stderr_[1], 1e-5);
  EXPECT_LT(f.stderr_[1], 1e-3);
}

TEST(LeastSquares, RejectsCollinearBasis) {
  const auto grid = linear_grid(0, 1, 10);
  FitSpec spec{{{"a", [](double x) { return x; }}, {"b", [](double x) { return 2 * x; }}}, grid};
  std::vector<double> y(grid.begin(), grid.end());
  EXPECT_TRUE(least_squares(spec, y).rejected);
}

TEST(Grids, Endpoints) {
  const auto g = geometric_grid(5, 200, 12);
  ASSERT_EQ(g.size(), 12u);
  EXPECT_DOUBLE_EQ(g.front(), 5);
  EXPECT_NEAR(g.back(), 200, 1e-12);
  EXPECT_NEAR(g[1] / g[0], g[11] / g[10], 1e-12);
  const auto l = linear_grid(-0.5, 0.5, 10);
  EXPECT_DOUBLE_EQ(l.front(), -0.5);
  EXPECT_DOUBLE_EQ(l.back(), 0.5);
}

TEST(Experiments, FlatTorusSuitePasses) {
  for (double L : {1.0, 2.0}) {
    const auto cfg = torus(L);
    for (const auto& id : experiment_ids()) {
      const auto r = run_experiment(id, cfg);
      EXPECT_TRUE(r.verdict) << id << " L = " << L << " first failure: " << r.first_failure().value_or("");
    }
  }
}

TEST(Experiments, SphereSuitePasses) {
  const auto cfg = sphere();
  for (const auto& id : experiment_ids()) {
    const auto r = run_experiment(id, cfg);
    EXPECT_TRUE(r.verdict) << id << " first failure: " << r.first_failure().value_or("");
  }
}

TEST(Experiments, PolynomialTargets) {
  const auto rt = exp_polynomial(torus());
  EXPECT_NEAR(rt.target("a1"), kPi * kLn2, 1e-14);
  EXPECT_NEAR(rt.target("a0"), 0.0, 1e-15);
  const auto rs = exp_polynomial(sphere());
  EXPECT_NEAR(rs.target("a0"), -kLn2 / 3, 1e-14);
  EXPECT_NEAR(comparison(rs, "a0").observed, -kLn2 / 3, 1e-7);
}

TEST(Experiments, AsymptoticsRecoverSphereQ2) {
  const auto r = exp_lndetR_asymptotics(sphere());
  EXPECT_NEAR(r.target("q2"), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(comparison(r, "q2").observed, 1.0 / 6.0, 2e-3);
}

TEST(Experiments, HeatTraceTargets) {
  const auto r = exp_heat_trace(torus());
  const double vol = 4 * kPi * kPi;
  EXPECT_NEAR(r.target("v0"), vol / (8 * kPi), 1e-13);
  EXPECT_NEAR(r.target("v2"), -vol / (4 * kPi), 1e-13);
}

TEST(Experiments, CorruptedTargetFailsWithName) {
  auto cfg = torus();
  cfg.target_offsets["a1"] = 1e-3;
  const auto r = exp_polynomial(cfg);
  EXPECT_FALSE(r.verdict);
  EXPECT_EQ(r.first_failure().value_or(""), "a1");
}

TEST(Experiments, KernelLimitLnDetA0) {
  for (double L : {1.0, 2.0}) {
    const auto r = exp_kernel_limit(torus(L));
    EXPECT_NEAR(comparison(r, "ln_det_A0").observed, -std::log(L), 1e-15);
    EXPECT_LT(std::abs(comparison(r, "defect_extrapolated").observed), 1e-6);
  }
}

TEST(Experiments, WarpedClosedFormAtTrivialWarp) {
  const double vol = 4 * kPi * kPi, tau = 0.7;
  const auto [a0, a1] = warped_P_closed_form(0, 0, tau, vol);
  EXPECT_NEAR(a1, vol * kLn2 / (4 * kPi), 1e-14);
  EXPECT_NEAR(a0, -kLn2 / (24 * kPi) * tau * vol, 1e-14);
  // Coefficient of f'' is (ln2/2 - 1/4) vol/(4 pi).
  const auto [b0, b1] = warped_P_closed_form(0, 1, 0, vol);
  EXPECT_NEAR(b0, (kLn2 / 2 - 0.25) * vol / (4 * kPi), 1e-14);
  (void)b1;
}

TEST(Experiments, WarpedGridIsTenByTen) {
  const auto r = exp_warped_crosscheck(torus());
  EXPECT_EQ(r.plot.size(), 100u);
  EXPECT_TRUE(r.verdict);
}

TEST(Experiments, ReportsAreReproducible) {
  const auto cfg = sphere();
  for (const auto& id : experiment_ids()) {
    const auto a = report_json(run_experiment(id, cfg), cfg).dump();
    const auto b = report_json(run_experiment(id, cfg), cfg).dump();
    EXPECT_EQ(a, b) << id;
  }
}

TEST(Experiments, PolynomialFitIsStableUnderRefinement) {
  // Halving the spacing must not move the fit by more than the tolerance
  // budget of the comparison.
  auto coarse = torus();
  auto fine = torus();
  fine.lambda_grid = geometric_grid(5, 200, 23);
  const auto rc = exp_polynomial(coarse), rf = exp_polynomial(fine);
  const double a1c = comparison(rc, "a1").observed, a1f = comparison(rf, "a1").observed;
  const double a0c = comparison(rc, "a0").observed, a0f = comparison(rf, "a0").observed;
  EXPECT_LT(std::abs(a1c - a1f), 1e-6 * std::abs(a1c));
  EXPECT_LT(std::abs(a0c - a0f), 1e-7);
  EXPECT_TRUE(rf.verdict);
}

TEST(Experiments, HeatFitIsStableUnderRefinement) {
  auto fine = torus();
  fine.t_grid = geometric_grid(1e-3, 1e-2, 59);
  const auto rc = exp_heat_trace(torus()), rf = exp_heat_trace(fine);
  EXPECT_LT(std::abs(comparison(rc, "v2").observed - comparison(rf, "v2").observed), 1e-3 * kPi);
  EXPECT_TRUE(rf.verdict);
}

TEST(Experiments, InvalidGridsAreRejected) {
  auto c = torus();
  c.t_grid = {0.5, 0.6};
  EXPECT_THROW(exp_heat_trace(c), std::invalid_argument);
  c = torus();
  c.lambda_asym_grid = geometric_grid(10, 20, 12);
  EXPECT_THROW(exp_lndetR_asymptotics(c), std::invalid_argument);
  EXPECT_THROW(run_experiment("nope", torus()), std::invalid_argument);
}
