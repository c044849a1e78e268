// End-to-end acceptance checks.  Each test prints one [PASS]/[FAIL] line so
// the suite doubles as a release checklist.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "corpus.hpp"
#include "drcr/analysis.hpp"
#include "drcr/evaluate.hpp"
#include "drcr/skirental.hpp"

using namespace drcr;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int number, const char* title) {
  std::printf("[%s] criterion %d: %s\n", ::testing::Test::HasFailure() ? "FAIL" : "PASS",
              number, title);
}

ProblemSpec single(int buy_cost, int lower, int upper, double delta) {
  return make_problem_spec(buy_cost, validate_profile({{lower, upper}}, {delta}));
}

std::vector<double> unit_grid(double step) {
  const int count = static_cast<int>(std::lround(1.0 / step)) + 1;
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) grid.push_back(static_cast<double>(k) / (count - 1));
  return grid;
}

std::vector<ProblemSpec> shared_corpus(unsigned seed, int size) {
  std::mt19937 rng(seed);
  std::vector<ProblemSpec> specs;
  for (int i = 0; i < size; ++i) specs.push_back(corpus::random_spec(rng));
  return specs;
}

double objective_of(const lp::LinearProgram& program) {
  const auto solution = lp::solve(program);
  EXPECT_EQ(solution.status, lp::LpSolution::Status::Optimal);
  return solution.objective_value;
}

}  // namespace

TEST(Acceptance, ClosedFormRobustnessAnchors) {
  for (const auto& [buy_cost, expected] :
       std::vector<std::pair<int, double>>{{5, 3125.0 / 2101.0}, {10, 1e10 / 6513215599.0}}) {
    const auto start = std::chrono::steady_clock::now();
    const auto result = optimal_drcr(single(buy_cost, 3, 8, 1.0));
    EXPECT_NEAR(result.value, expected, 1e-6) << "B=" << buy_cost;
    EXPECT_LT(seconds_since(start), 1.0) << "B=" << buy_cost;
  }
  report(1, "closed-form robustness anchors");
}

TEST(Acceptance, CurveShapeAndPlateau) {
  const auto grid = unit_grid(0.01);
  for (int buy_cost : {5, 10}) {
    const auto start = std::chrono::steady_clock::now();
    const auto series = drcr_curve(buy_cost, 3, 8, grid);
    const auto shape = check_shape(series, 1e-6);
    EXPECT_TRUE(shape.monotone_ok) << "B=" << buy_cost;
    EXPECT_TRUE(shape.concave_ok) << "B=" << buy_cost;
    EXPECT_LE(shape.max_violation, 1e-6) << "B=" << buy_cost;
    EXPECT_TRUE(shape.plateau_start.has_value()) << "B=" << buy_cost;
    EXPECT_NEAR(series.values.back(), robustness_optimum(buy_cost), 1e-6) << "B=" << buy_cost;
    EXPECT_LT(seconds_since(start), 30.0) << "B=" << buy_cost;
  }
  report(2, "curve shape and plateau");
}

TEST(Acceptance, ReducedProgramMatchesDenseOracle) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& spec : shared_corpus(1234, 100)) {
    EXPECT_NEAR(objective_of(build_primal(spec)), objective_of(build_dense_oracle(spec)), 1e-7);
  }
  EXPECT_LT(seconds_since(start), 60.0);
  report(3, "reduced program matches dense oracle");
}

TEST(Acceptance, PrimalMatchesDual) {
  for (const auto& spec : shared_corpus(1234, 100)) {
    EXPECT_NEAR(objective_of(build_primal(spec)), objective_of(build_dual(spec)), 1e-7);
  }
  report(4, "primal matches dual");
}

TEST(Acceptance, AccuracyPolytopeTracksOptimalValue) {
  const auto grid = unit_grid(0.02);
  std::vector<double> optima;
  for (double delta : grid) optima.push_back(optimal_drcr(single(5, 3, 8, delta)).value);
  for (double v : {1.1, 1.3, 1.45}) {
    const auto system = build_accuracy_system(5, {{3, 8}}, v);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const bool inside = accuracy_feasible(system, {grid[k]}).feasible;
      EXPECT_EQ(inside, optima[k] >= v - 1e-6) << "v=" << v << " delta=" << grid[k];
    }
  }
  report(5, "accuracy polytope tracks optimal value");
}

TEST(Acceptance, CriticalAccuracyCrossCheck) {
  for (const auto& [buy_cost, lower, upper] : std::vector<std::tuple<int, int, int>>{
           {5, 3, 8}, {10, 3, 8}, {5, 4, 4}, {7, 2, 9}}) {
    const double via_program = critical_accuracy(buy_cost, lower, upper);
    const double via_search = critical_accuracy_bisection(buy_cost, lower, upper, 1e-9);
    EXPECT_NEAR(via_program, via_search, 1e-6)
        << "B=" << buy_cost << " [" << lower << "," << upper << "]";
  }
  report(6, "critical accuracy cross-check");
}

TEST(Acceptance, WorstCaseEvaluationTightness) {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = corpus::random_spec(rng);
    const auto dist = corpus::random_distribution(rng);
    const double value = evaluate_drcr(dist, spec).drcr;
    const auto adversary = worst_case_distribution(dist, spec);
    EXPECT_TRUE(respects_profile(adversary, spec.profile));
    EXPECT_NEAR(adversary_value(adversary, dist, spec.buy_cost), value, 1e-9);
    const int horizon = evaluation_horizon(dist, spec);
    for (int sample = 0; sample < 200; ++sample) {
      std::map<int, double> atoms;
      for (int i = 1; i <= spec.profile.size() + 1; ++i) {
        const double weight = spec.profile.delta_at(i - 1) - spec.profile.delta_at(i);
        if (weight <= 0.0) continue;
        int lo = 1, hi = horizon;
        if (i <= spec.profile.size()) {
          lo = spec.profile.intervals[static_cast<std::size_t>(i - 1)].lower;
          hi = spec.profile.intervals[static_cast<std::size_t>(i - 1)].upper;
        }
        atoms[std::uniform_int_distribution<int>(lo, hi)(rng)] += weight;
      }
      const auto rival = make_adversary_distribution(atoms);
      EXPECT_TRUE(respects_profile(rival, spec.profile));
      EXPECT_LE(adversary_value(rival, dist, spec.buy_cost), value + 1e-9);
    }
  }
  report(7, "worst-case evaluation tightness");
}

TEST(Acceptance, PointPredictionAndFoldingAnchors) {
  EXPECT_NEAR(optimal_drcr(single(5, 4, 4, 0.0)).value, 1.0, 1e-9);
  EXPECT_NEAR(optimal_drcr(single(5, 4, 4, 1.0)).value, robustness_optimum(5), 1e-6);
  const auto spec = single(10, 3, 8, 0.3);
  const auto dist = make_purchase_distribution({{12, 1.0}});
  const auto folded = canonicalize_distribution(dist, spec, consistencies(dist, spec));
  EXPECT_EQ(folded.entries.size(), 1u);
  EXPECT_EQ(folded.entries.count(10), 1u);
  EXPECT_EQ(folded.entries.at(10), 1.0);
  report(8, "point prediction and folding anchors");
}
