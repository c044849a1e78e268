#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "drcr/errors.hpp"
#include "drcr/model.hpp"

// Evaluation of a fixed purchase rule against adversarial instances.
//
// With buy cost B, an algorithm that purchases on day t pays t-1+B when the
// season lasts at least t days, and rents throughout otherwise.  The offline
// optimum pays min(tau, B).  Consistency level i is the worst cost ratio over
// instances in interval i; level n+1 drops the prediction entirely and is the
// classical robustness.  Their convex combination weighted by the accuracy
// increments is the distributionally robust competitive ratio.

namespace drcr {

inline double algorithm_cost(const PurchaseDistribution& dist, int tau, int buy_cost) {
  if (tau < 1) throw RangeError("algorithm_cost: instance " + std::to_string(tau));
  double bought = 0.0, mass_by_tau = 0.0;
  for (const auto& [day, p] : dist.entries) {
    if (day > tau) break;
    bought += (day - 1 + buy_cost) * p;
    mass_by_tau += p;
  }
  return bought + tau * (1.0 - mass_by_tau);
}

inline double opt_cost(int tau, int buy_cost) {
  if (tau < 1) throw RangeError("opt_cost: instance " + std::to_string(tau));
  return std::min(tau, buy_cost);
}

inline double cost_ratio(const PurchaseDistribution& dist, int tau, int buy_cost) {
  return algorithm_cost(dist, tau, buy_cost) / opt_cost(tau, buy_cost);
}

// Past this day every cost ratio is constant: all mass is spent, the optimum
// pays B, and the innermost interval membership no longer changes.
inline int evaluation_horizon(const PurchaseDistribution& dist, const ProblemSpec& spec) {
  return std::max({dist.max_support_day(), spec.buy_cost, spec.profile.outermost_upper() + 1});
}

namespace detail {

// Worst ratio over interval i (over [1, horizon] for the outer level n+1),
// together with the smallest day attaining at least `share` of that worst.
struct LevelWorst {
  double ratio = 1.0;
  int day = 0;
};

inline LevelWorst level_worst(const PurchaseDistribution& dist, const ProblemSpec& spec, int i,
                              double share) {
  const int n = spec.profile.size();
  int from = 1, to = evaluation_horizon(dist, spec);
  if (i <= n) {
    from = spec.profile.intervals[static_cast<std::size_t>(i - 1)].lower;
    to = spec.profile.intervals[static_cast<std::size_t>(i - 1)].upper;
  }
  LevelWorst worst;
  worst.ratio = 0.0;
  for (int tau = from; tau <= to; ++tau) {
    worst.ratio = std::max(worst.ratio, cost_ratio(dist, tau, spec.buy_cost));
  }
  for (int tau = from; tau <= to; ++tau) {
    if (cost_ratio(dist, tau, spec.buy_cost) >= share * worst.ratio) {
      worst.day = tau;
      break;
    }
  }
  return worst;
}

}  // namespace detail

// c_i: worst cost ratio over instances in interval i, at least 1 by
// convention; i = n+1 ranges over all instances.
inline double consistency(const PurchaseDistribution& dist, const ProblemSpec& spec, int i) {
  const int n = spec.profile.size();
  if (i < 1 || i > n + 1) {
    throw RangeError("consistency: level " + std::to_string(i) + " outside [1, " +
                     std::to_string(n + 1) + "]");
  }
  return std::max(1.0, detail::level_worst(dist, spec, i, 1.0).ratio);
}

inline std::vector<double> consistencies(const PurchaseDistribution& dist,
                                         const ProblemSpec& spec) {
  std::vector<double> c;
  for (int i = 1; i <= spec.profile.size() + 1; ++i) c.push_back(consistency(dist, spec, i));
  return c;
}

inline double robustness(const PurchaseDistribution& dist, const ProblemSpec& spec) {
  return consistency(dist, spec, spec.profile.size() + 1);
}

struct DrcrBreakdown {
  std::vector<double> consistencies;  // c_1 .. c_{n+1}
  double drcr = 1.0;
};

// Sum over levels of (delta_{i-1} - delta_i) c_i, with delta_0 = 1 and
// delta_{n+1} = 0; the last term is the robustness weighted by delta_n.
inline DrcrBreakdown evaluate_drcr(const PurchaseDistribution& dist, const ProblemSpec& spec) {
  DrcrBreakdown breakdown;
  breakdown.consistencies = consistencies(dist, spec);
  double value = 0.0;
  for (int i = 1; i <= spec.profile.size() + 1; ++i) {
    const double weight = spec.profile.delta_at(i - 1) - spec.profile.delta_at(i);
    value += weight * breakdown.consistencies[static_cast<std::size_t>(i - 1)];
  }
  breakdown.drcr = value;
  return breakdown;
}

// An instance distribution chosen by the adversary.
struct AdversaryDistribution {
  std::map<int, double> atoms;  // instance -> probability
};

inline AdversaryDistribution make_adversary_distribution(const std::map<int, double>& atoms) {
  double total = 0.0;
  for (const auto& [tau, p] : atoms) {
    if (tau < 1) throw RangeError("make_adversary_distribution: instance " + std::to_string(tau));
    if (!(p >= 0.0)) {
      throw RangeError("make_adversary_distribution: negative mass on " + std::to_string(tau));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    throw RangeError("make_adversary_distribution: total mass " + std::to_string(total));
  }
  AdversaryDistribution adv;
  for (const auto& [tau, p] : atoms) {
    if (p > 0.0) adv.atoms[tau] = p / total;
  }
  return adv;
}

// Whether the distribution honours every membership requirement
// Pr[tau in interval i] >= 1 - delta_i, up to kProbabilityTol.
inline bool respects_profile(const AdversaryDistribution& adv, const PredictionProfile& profile) {
  for (int i = 1; i <= profile.size(); ++i) {
    double inside = 0.0;
    for (const auto& [tau, p] : adv.atoms) {
      if (profile.contains(i, tau)) inside += p;
    }
    if (inside < 1.0 - profile.delta_at(i) - kProbabilityTol) return false;
  }
  return true;
}

// The tight adversary from the convex combination argument: level i receives
// mass delta_{i-1} - delta_i on a day of interval i whose ratio is at least
// (1 - epsilon) times c_i, the smallest such day.  With epsilon = 0 this is
// the earliest argmax, and the resulting value equals the DRCR exactly.
inline AdversaryDistribution worst_case_distribution(const PurchaseDistribution& dist,
                                                     const ProblemSpec& spec,
                                                     double epsilon = 0.0) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw RangeError("worst_case_distribution: epsilon " + std::to_string(epsilon));
  }
  AdversaryDistribution adv;
  for (int i = 1; i <= spec.profile.size() + 1; ++i) {
    const double weight = spec.profile.delta_at(i - 1) - spec.profile.delta_at(i);
    if (weight <= 0.0) continue;
    const auto worst = detail::level_worst(dist, spec, i, 1.0 - epsilon);
    if (worst.day == 0) {
      throw EmptyShellMass("worst_case_distribution: no day available at level " +
                           std::to_string(i));
    }
    adv.atoms[worst.day] += weight;
  }
  return adv;
}

// Expected cost ratio of the algorithm under the adversary's distribution.
inline double adversary_value(const AdversaryDistribution& adv, const PurchaseDistribution& dist,
                              int buy_cost) {
  double value = 0.0;
  for (const auto& [tau, p] : adv.atoms) value += p * cost_ratio(dist, tau, buy_cost);
  return value;
}

}  // namespace drcr
