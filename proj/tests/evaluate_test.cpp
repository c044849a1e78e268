#include "drcr/evaluate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"

using namespace drcr;

namespace {

PurchaseDistribution buy_on(int day) { return make_purchase_distribution({{day, 1.0}}); }

ProblemSpec single(int buy_cost, int lower, int upper, double delta) {
  return make_problem_spec(buy_cost, validate_profile({{lower, upper}}, {delta}));
}

// The classical randomized rule: purchase day t in [1, B] with probability
// proportional to ((B-1)/B)^(B-t).  Its cost ratio is the same for every
// instance.
PurchaseDistribution classical_rule(int buy_cost) {
  std::map<int, double> entries;
  double total = 0.0;
  for (int t = 1; t <= buy_cost; ++t) {
    const double w = std::pow((buy_cost - 1.0) / buy_cost, buy_cost - t);
    entries[t] = w;
    total += w;
  }
  for (auto& [day, w] : entries) w /= total;
  return make_purchase_distribution(entries);
}

}  // namespace

TEST(AlgorithmCost, MixedPurchaseDays) {
  const auto dist = make_purchase_distribution({{1, 0.5}, {5, 0.5}});
  EXPECT_NEAR(algorithm_cost(dist, 6, 5), 7.0, 1e-12);
}

TEST(AlgorithmCost, RentsWhenPurchaseIsLate) {
  EXPECT_NEAR(algorithm_cost(buy_on(9), 5, 5), 5.0, 1e-12);
  EXPECT_NEAR(algorithm_cost(buy_on(1), 1, 5), 5.0, 1e-12);
}

TEST(AlgorithmCost, RejectsBadInstance) {
  EXPECT_THROW(algorithm_cost(buy_on(1), 0, 5), RangeError);
}

TEST(OptCost, MinOfInstanceAndBuyCost) {
  EXPECT_DOUBLE_EQ(opt_cost(3, 5), 3.0);
  EXPECT_DOUBLE_EQ(opt_cost(7, 5), 5.0);
  EXPECT_DOUBLE_EQ(opt_cost(5, 5), 5.0);
  EXPECT_THROW(opt_cost(0, 5), RangeError);
}

TEST(Consistency, SpecExamples) {
  const auto spec = single(5, 3, 8, 0.3);
  EXPECT_NEAR(consistency(buy_on(5), spec, 1), 1.8, 1e-12);
  EXPECT_NEAR(consistency(buy_on(1), spec, 1), 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(consistency(buy_on(1), spec, 2), 5.0, 1e-12);
}

TEST(Consistency, AtLeastOneAndMonotoneAcrossLevels) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto spec = corpus::random_spec(rng);
    const auto dist = corpus::random_distribution(rng);
    double previous = 1.0;
    for (int i = 1; i <= spec.profile.size() + 1; ++i) {
      const double c = consistency(dist, spec, i);
      EXPECT_GE(c, previous - 1e-12);
      previous = c;
    }
  }
}

TEST(Consistency, RejectsLevelOutOfRange) {
  const auto spec = single(5, 3, 8, 0.3);
  EXPECT_THROW(consistency(buy_on(1), spec, 0), RangeError);
  EXPECT_THROW(consistency(buy_on(1), spec, 3), RangeError);
}

TEST(Robustness, DeterministicRules) {
  const auto spec = single(5, 3, 8, 0.3);
  EXPECT_NEAR(robustness(buy_on(1), spec), 5.0, 1e-12);
  EXPECT_NEAR(robustness(buy_on(5), spec), 1.8, 1e-12);  // 2 - 1/B
}

TEST(Robustness, ClassicalRuleMatchesClosedForm) {
  for (int buy_cost : {2, 5, 10}) {
    const auto spec = make_problem_spec(buy_cost, validate_profile({}, {}));
    const double b = buy_cost;
    const double expected = 1.0 / (1.0 - std::pow((b - 1.0) / b, b));
    EXPECT_NEAR(robustness(classical_rule(buy_cost), spec), expected, 1e-9);
  }
}

// Cost ratios stop changing past the evaluation horizon.
TEST(Robustness, HorizonCapturesTheSupremum) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = corpus::random_spec(rng);
    const auto dist = corpus::random_distribution(rng);
    const int horizon = evaluation_horizon(dist, spec);
    double padded = 0.0;
    for (int tau = 1; tau <= horizon + 50; ++tau) {
      padded = std::max(padded, cost_ratio(dist, tau, spec.buy_cost));
    }
    EXPECT_NEAR(robustness(dist, spec), std::max(1.0, padded), 1e-12);
  }
}

TEST(EvaluateDrcr, ConvexCombinationExample) {
  const auto breakdown = evaluate_drcr(buy_on(1), single(5, 3, 8, 0.3));
  ASSERT_EQ(breakdown.consistencies.size(), 2u);
  EXPECT_NEAR(breakdown.consistencies[0], 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(breakdown.consistencies[1], 5.0, 1e-12);
  EXPECT_NEAR(breakdown.drcr, 0.7 * (5.0 / 3.0) + 0.3 * 5.0, 1e-12);
}

TEST(EvaluateDrcr, EmptyProfileFallsBackToRobustness) {
  const auto spec = make_problem_spec(5, validate_profile({}, {}));
  const auto breakdown = evaluate_drcr(buy_on(1), spec);
  ASSERT_EQ(breakdown.consistencies.size(), 1u);
  EXPECT_NEAR(breakdown.drcr, 5.0, 1e-12);
}

// The value is affine in each accuracy taken alone, with slope
// c_{i+1} - c_i >= 0.
TEST(EvaluateDrcr, AffineInEachAccuracy) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto spec = corpus::random_spec(rng);
    const auto dist = corpus::random_distribution(rng);
    const int n = spec.profile.size();
    const auto c = consistencies(dist, spec);
    for (int axis = 0; axis < n; ++axis) {
      const double lo_ok = axis + 1 < n ? spec.profile.deltas[axis + 1] : 0.0;
      const double hi_ok = axis > 0 ? spec.profile.deltas[axis - 1] : 1.0;
      if (hi_ok - lo_ok < 1e-6) continue;
      auto at = [&](double d) {
        auto deltas = spec.profile.deltas;
        deltas[axis] = d;
        const auto moved =
            make_problem_spec(spec.buy_cost, validate_profile(spec.profile.intervals, deltas));
        return evaluate_drcr(dist, moved).drcr;
      };
      const double mid = 0.5 * (lo_ok + hi_ok);
      const double v0 = at(lo_ok), v1 = at(mid), v2 = at(hi_ok);
      EXPECT_NEAR(v1, 0.5 * (v0 + v2), 1e-9);  // collinear
      const double slope = (v2 - v0) / (hi_ok - lo_ok);
      EXPECT_NEAR(slope, c[axis + 1] - c[axis], 1e-9);
      EXPECT_GE(slope, -1e-12);
    }
  }
}

TEST(WorstCase, SpecExample) {
  const auto adv = worst_case_distribution(buy_on(1), single(5, 3, 8, 0.3));
  ASSERT_EQ(adv.atoms.size(), 2u);
  EXPECT_NEAR(adv.atoms.at(3), 0.7, 1e-12);
  EXPECT_NEAR(adv.atoms.at(1), 0.3, 1e-12);
}

TEST(WorstCase, SkipsZeroWeightLevels) {
  const auto adv = worst_case_distribution(buy_on(1), single(5, 3, 8, 0.0));
  ASSERT_EQ(adv.atoms.size(), 1u);
  EXPECT_NEAR(adv.atoms.at(3), 1.0, 1e-12);
}

TEST(WorstCase, ValueMatchesDrcrExactly) {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const auto spec = corpus::random_spec(rng);
    const auto dist = corpus::random_distribution(rng);
    const auto adv = worst_case_distribution(dist, spec);
    EXPECT_TRUE(respects_profile(adv, spec.profile));
    EXPECT_NEAR(adversary_value(adv, dist, spec.buy_cost), evaluate_drcr(dist, spec).drcr,
                1e-9);
  }
}

TEST(WorstCase, EpsilonRelaxationStaysClose) {
  const auto spec = single(5, 3, 8, 0.3);
  const auto dist = make_purchase_distribution({{2, 0.5}, {4, 0.5}});
  const double exact = evaluate_drcr(dist, spec).drcr;
  const double relaxed = adversary_value(worst_case_distribution(dist, spec, 0.05), dist, 5);
  EXPECT_LE(relaxed, exact + 1e-12);
  EXPECT_GE(relaxed, (1.0 - 0.05) * exact - 1e-12);
  EXPECT_THROW(worst_case_distribution(dist, spec, -0.1), RangeError);
}

// No feasible adversary can beat the constructed one.
TEST(WorstCase, DominatesSampledFeasibleAdversaries) {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = corpus::random_spec(rng);
    const auto dist = corpus::random_distribution(rng);
    const double value = evaluate_drcr(dist, spec).drcr;
    const int horizon = evaluation_horizon(dist, spec);
    for (int sample = 0; sample < 50; ++sample) {
      std::map<int, double> atoms;
      for (int i = 1; i <= spec.profile.size() + 1; ++i) {
        const double weight = spec.profile.delta_at(i - 1) - spec.profile.delta_at(i);
        if (weight <= 0.0) continue;
        int lo = 1, hi = horizon;
        if (i <= spec.profile.size()) {
          lo = spec.profile.intervals[i - 1].lower;
          hi = spec.profile.intervals[i - 1].upper;
        }
        atoms[std::uniform_int_distribution<int>(lo, hi)(rng)] += weight;
      }
      const auto adv = make_adversary_distribution(atoms);
      ASSERT_TRUE(respects_profile(adv, spec.profile));
      EXPECT_LE(adversary_value(adv, dist, spec.buy_cost), value + 1e-9);
    }
  }
}

TEST(AdversaryValue, UniformExample) {
  const auto adv =
      make_adversary_distribution({{5, 0.25}, {6, 0.25}, {7, 0.25}, {8, 0.25}});
  EXPECT_NEAR(adversary_value(adv, buy_on(5), 5), 1.8, 1e-12);
}

TEST(AdversaryDistribution, ValidatesMass) {
  EXPECT_THROW(make_adversary_distribution({{1, 0.5}}), RangeError);
  EXPECT_THROW(make_adversary_distribution({{-1, 1.0}}), RangeError);
  EXPECT_NO_THROW(make_adversary_distribution({{1, 0.5}, {9, 0.5}}));
}

TEST(RespectsProfile, DetectsMembershipViolation) {
  const auto profile = validate_profile({{3, 8}}, {0.3});
  EXPECT_TRUE(respects_profile(make_adversary_distribution({{3, 0.7}, {1, 0.3}}), profile));
  EXPECT_FALSE(respects_profile(make_adversary_distribution({{3, 0.5}, {1, 0.5}}), profile));
}
