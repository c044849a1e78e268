#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "drcr/errors.hpp"

// Domain model for ski rental with a hierarchy of prediction intervals.
//
// Instances are positive integers (the last day of the season).  A prediction
// profile is a nested family of integer intervals, innermost first, each with
// an accuracy parameter delta in [0, 1]: the instance lies in interval i with
// probability at least 1 - delta_i.  Nesting requires
//   l_n <= ... <= l_1 <= u_1 <= ... <= u_n   and   1 >= d_1 >= ... >= d_n >= 0.

namespace drcr {

// Absolute tolerance for probability mass bookkeeping.
inline constexpr double kProbabilityTol = 1e-9;

// Sentinel an input layer may use to request an infinite upper endpoint.
// Such requests are rejected with UnboundedInterval.
inline constexpr int kUnboundedDay = std::numeric_limits<int>::max();

struct PredictionInterval {
  int lower = 1;
  int upper = 1;

  friend bool operator==(const PredictionInterval&, const PredictionInterval&) = default;
};

// Index of the innermost interval containing a day; n+1 designates the
// complement of the outermost interval.
struct ShellIndex {
  int value = 1;

  friend bool operator==(const ShellIndex&, const ShellIndex&) = default;
};

// A validated hierarchy of predictions.  Construct via validate_profile.
struct PredictionProfile {
  std::vector<PredictionInterval> intervals;  // innermost first
  std::vector<double> deltas;                 // same length, non-increasing

  int size() const { return static_cast<int>(intervals.size()); }

  // delta_i with the conventional sentinels delta_0 = 1 and delta_{n+1} = 0.
  double delta_at(int i) const {
    if (i <= 0) return 1.0;
    if (i > size()) return 0.0;
    return deltas[static_cast<std::size_t>(i - 1)];
  }

  // Membership of `day` in interval i; i = 0 is empty, i = n+1 is everything.
  bool contains(int i, int day) const {
    if (i <= 0) return false;
    if (i > size()) return day >= 1;
    const auto& iv = intervals[static_cast<std::size_t>(i - 1)];
    return iv.lower <= day && day <= iv.upper;
  }

  int outermost_upper() const { return intervals.empty() ? 0 : intervals.back().upper; }

  friend bool operator==(const PredictionProfile&, const PredictionProfile&) = default;
};

// Checks ranges, nesting and monotone accuracies, then merges consecutive
// duplicate predictions (identical interval and delta).  Idempotent.
inline PredictionProfile validate_profile(const std::vector<PredictionInterval>& intervals,
                                          const std::vector<double>& deltas) {
  if (intervals.size() != deltas.size()) {
    throw RangeError("validate_profile: " + std::to_string(intervals.size()) +
                     " intervals but " + std::to_string(deltas.size()) + " accuracies");
  }
  const int n = static_cast<int>(intervals.size());
  for (int i = 0; i < n; ++i) {
    const auto& iv = intervals[static_cast<std::size_t>(i)];
    if (iv.upper == kUnboundedDay) {
      throw UnboundedInterval("validate_profile: interval " + std::to_string(i + 1) +
                              " has an unbounded upper endpoint");
    }
    if (iv.lower < 1 || iv.upper < iv.lower) {
      throw RangeError("validate_profile: interval " + std::to_string(i + 1) + " = [" +
                       std::to_string(iv.lower) + ", " + std::to_string(iv.upper) +
                       "] is not a nonempty range of positive days");
    }
    const double d = deltas[static_cast<std::size_t>(i)];
    if (!(d >= 0.0 && d <= 1.0)) {
      throw RangeError("validate_profile: delta " + std::to_string(i + 1) + " = " +
                       std::to_string(d) + " is outside [0, 1]");
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    const auto& in = intervals[static_cast<std::size_t>(i)];
    const auto& out = intervals[static_cast<std::size_t>(i + 1)];
    if (out.lower > in.lower || out.upper < in.upper) {
      throw HierarchyViolation("validate_profile: interval " + std::to_string(i + 2) +
                               " does not contain interval " + std::to_string(i + 1));
    }
    if (deltas[static_cast<std::size_t>(i)] < deltas[static_cast<std::size_t>(i + 1)]) {
      throw HierarchyViolation("validate_profile: accuracies must be non-increasing, got delta " +
                               std::to_string(i + 1) + " < delta " + std::to_string(i + 2));
    }
  }
  PredictionProfile profile;
  for (int i = 0; i < n; ++i) {
    const auto& iv = intervals[static_cast<std::size_t>(i)];
    const double d = deltas[static_cast<std::size_t>(i)];
    if (!profile.intervals.empty() && profile.intervals.back() == iv && profile.deltas.back() == d) {
      continue;  // duplicate prediction carries no information
    }
    profile.intervals.push_back(iv);
    profile.deltas.push_back(d);
  }
  return profile;
}

// Smallest i in [1, n+1] whose interval contains `day`.
inline ShellIndex shell_index(const PredictionProfile& profile, int day) {
  if (day < 1) throw RangeError("shell_index: day " + std::to_string(day) + " is not positive");
  for (int i = 1; i <= profile.size(); ++i) {
    if (profile.contains(i, day)) return ShellIndex{i};
  }
  return ShellIndex{profile.size() + 1};
}

struct ProblemSpec {
  int buy_cost = 2;  // B
  PredictionProfile profile;
};

inline ProblemSpec make_problem_spec(int buy_cost, PredictionProfile profile) {
  if (buy_cost < 2) {
    throw RangeError("make_problem_spec: buy cost " + std::to_string(buy_cost) +
                     " must be an integer >= 2");
  }
  return ProblemSpec{buy_cost, std::move(profile)};
}

// A randomized rent/buy rule: probability of purchasing on each day.
// Construct via make_purchase_distribution.
struct PurchaseDistribution {
  std::map<int, double> entries;  // day -> probability, zero elsewhere

  int max_support_day() const { return entries.empty() ? 0 : entries.rbegin()->first; }
};

// Validates day range and nonnegativity; the total mass must equal 1 within
// mass_tol and is renormalized to sum exactly to 1.  Deserialized inputs pass
// a looser tolerance to absorb the rounding of printed probabilities.
inline PurchaseDistribution make_purchase_distribution(const std::map<int, double>& entries,
                                                       double mass_tol = kProbabilityTol) {
  double total = 0.0;
  for (const auto& [day, p] : entries) {
    if (day < 1) {
      throw RangeError("make_purchase_distribution: day " + std::to_string(day) +
                       " is not positive");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw RangeError("make_purchase_distribution: probability of day " + std::to_string(day) +
                       " is " + std::to_string(p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > mass_tol) {
    throw RangeError("make_purchase_distribution: total mass " + std::to_string(total) +
                     " differs from 1 by more than " + std::to_string(mass_tol));
  }
  PurchaseDistribution dist;
  for (const auto& [day, p] : entries) {
    if (p > 0.0) dist.entries[day] = p / total;
  }
  return dist;
}

}  // namespace drcr
