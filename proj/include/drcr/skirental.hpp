#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drcr/errors.hpp"
#include "drcr/evaluate.hpp"
#include "drcr/lp.hpp"
#include "drcr/model.hpp"

// Reduction of the infinite ski-rental program to finite linear programs.
//
// Candidate purchase days S and binding instance days T are finite sets that
// preserve the optimum: when every prediction ends strictly before the buy
// cost B, S = [B] and T = [B+1]; otherwise S keeps [B] plus the day after
// each upper endpoint reaching B, and T keeps [B] plus each endpoint
// neighbourhood.  Endpoints equal to B belong to the second case: buying on
// day u_i + 1 = B + 1 rides out the whole interval for free, which no rule
// supported on [B] can imitate.  The same sets drive the dual program, the
// accuracy polytope over the delta vector, and the critical accuracy program.

namespace drcr {

enum class SupportCase {
  kOutermostReachesBuy,  // B <= u_n: late purchase days matter
  kOutermostBelowBuy,    // u_n < B (includes the empty profile)
};

struct SupportSets {
  std::vector<int> purchase_days;    // S, sorted ascending
  std::vector<int> instance_days;    // T, sorted ascending
  SupportCase case_tag = SupportCase::kOutermostBelowBuy;
};

inline SupportSets support_sets(const ProblemSpec& spec) {
  const int n = spec.profile.size();
  const int B = spec.buy_cost;
  SupportSets sets;
  std::set<int> s, t;
  for (int d = 1; d <= B; ++d) {
    s.insert(d);
    t.insert(d);
  }
  if (n == 0 || spec.profile.outermost_upper() < B) {
    sets.case_tag = SupportCase::kOutermostBelowBuy;
    t.insert(B + 1);
  } else {
    sets.case_tag = SupportCase::kOutermostReachesBuy;
    int j = 0;
    for (int i = 1; i <= n; ++i) {
      if (spec.profile.intervals[static_cast<std::size_t>(i - 1)].upper >= B) {
        j = i;
        break;
      }
    }
    for (int i = j; i <= n; ++i) {
      s.insert(spec.profile.intervals[static_cast<std::size_t>(i - 1)].upper + 1);
    }
    for (int i = 1; i <= n; ++i) {
      const auto& iv = spec.profile.intervals[static_cast<std::size_t>(i - 1)];
      if (iv.lower > 1) t.insert(iv.lower - 1);
      t.insert(iv.upper);
    }
    t.insert(spec.profile.outermost_upper() + 1);
  }
  sets.purchase_days.assign(s.begin(), s.end());
  sets.instance_days.assign(t.begin(), t.end());
  return sets;
}

namespace detail {

// Optimal robustness of randomized ski rental: B^B / (B^B - (B-1)^B),
// evaluated as 1 / (1 - (1-1/B)^B) for numerical stability.
inline double classical_optimum(int buy_cost) {
  if (buy_cost < 2) throw RangeError("classical_optimum: buy cost must be >= 2");
  const double b = buy_cost;
  return 1.0 / (1.0 - std::exp(b * std::log1p(-1.0 / b)));
}

// Shared assembly of the primal program over given purchase/instance days:
//   minimize  sum_i (delta_{i-1} - delta_i) c_i
//   s.t.      expected cost at tau <= min(tau, B) c_{level(tau)}  (tau in T)
//             c_i <= c_{i+1},  sum of purchase probabilities = 1.
inline lp::LinearProgram build_reduced(const ProblemSpec& spec, const std::vector<int>& s_days,
                                       const std::vector<int>& t_days) {
  const int n = spec.profile.size();
  const int B = spec.buy_cost;
  lp::LinearProgram program(lp::Sense::Minimize);
  std::map<int, int> f_var;
  for (int t : s_days) f_var[t] = program.add_variable("f_" + std::to_string(t));
  std::vector<int> c_var;
  for (int i = 1; i <= n + 1; ++i) {
    const int v = program.add_variable("c_" + std::to_string(i));
    program.set_objective_coefficient(v, spec.profile.delta_at(i - 1) - spec.profile.delta_at(i));
    c_var.push_back(v);
  }
  for (int tau : t_days) {
    std::vector<std::pair<int, double>> terms;
    for (int t : s_days) {
      if (t > tau) break;
      terms.emplace_back(f_var[t], static_cast<double>(t - 1 + B - tau));
    }
    const int level = shell_index(spec.profile, tau).value;
    terms.emplace_back(c_var[static_cast<std::size_t>(level - 1)],
                       -static_cast<double>(std::min(tau, B)));
    program.add_constraint(terms, lp::Relation::LessEqual, -static_cast<double>(tau),
                           "day_" + std::to_string(tau));
  }
  for (int i = 1; i <= n; ++i) {
    program.add_constraint({{c_var[static_cast<std::size_t>(i - 1)], 1.0},
                            {c_var[static_cast<std::size_t>(i)], -1.0}},
                           lp::Relation::LessEqual, 0.0, "chain_" + std::to_string(i));
  }
  std::vector<std::pair<int, double>> mass;
  for (int t : s_days) mass.emplace_back(f_var[t], 1.0);
  program.add_constraint(mass, lp::Relation::Equal, 1.0, "mass");
  return program;
}

}  // namespace detail

inline lp::LinearProgram build_primal(const ProblemSpec& spec) {
  const auto sets = support_sets(spec);
  return detail::build_reduced(spec, sets.purchase_days, sets.instance_days);
}

// Brute-force variant over every day up to the horizon, used to validate the
// support-set reduction: same program with S = T = {1, ..., max(B, u_n) + 1}.
inline lp::LinearProgram build_dense_oracle(const ProblemSpec& spec) {
  const int horizon = std::max(spec.buy_cost, spec.profile.outermost_upper()) + 1;
  std::vector<int> days;
  for (int d = 1; d <= horizon; ++d) days.push_back(d);
  return detail::build_reduced(spec, days, days);
}

// Dual of the reduced primal: one x variable per instance day, one y variable
// per chain row, and a free z for the total-mass equality.
inline lp::LinearProgram build_dual(const ProblemSpec& spec) {
  const auto sets = support_sets(spec);
  const int n = spec.profile.size();
  const int B = spec.buy_cost;
  lp::LinearProgram program(lp::Sense::Maximize);
  std::map<int, int> x_var;
  for (int tau : sets.instance_days) {
    const int v = program.add_variable("x_" + std::to_string(tau));
    program.set_objective_coefficient(v, static_cast<double>(tau));
    x_var[tau] = v;
  }
  std::vector<int> y_var;
  for (int i = 1; i <= n; ++i) y_var.push_back(program.add_variable("y_" + std::to_string(i)));
  const int z = program.add_free_variable("z");
  program.set_objective_coefficient(z, 1.0);
  for (int t : sets.purchase_days) {
    std::vector<std::pair<int, double>> terms{{z, 1.0}};
    for (int tau : sets.instance_days) {
      if (tau >= t) terms.emplace_back(x_var[tau], static_cast<double>(tau - (t - 1 + B)));
    }
    program.add_constraint(terms, lp::Relation::LessEqual, 0.0, "alg_" + std::to_string(t));
  }
  for (int i = 1; i <= n + 1; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int tau : sets.instance_days) {
      if (shell_index(spec.profile, tau).value == i) {
        terms.emplace_back(x_var[tau], static_cast<double>(std::min(tau, B)));
      }
    }
    if (i >= 2) terms.emplace_back(y_var[static_cast<std::size_t>(i - 2)], 1.0);
    if (i <= n) terms.emplace_back(y_var[static_cast<std::size_t>(i - 1)], -1.0);
    program.add_constraint(terms, lp::Relation::LessEqual,
                           spec.profile.delta_at(i - 1) - spec.profile.delta_at(i),
                           "level_" + std::to_string(i));
  }
  return program;
}

// Feasibility system over (x, y, delta) describing the accuracy vectors for
// which the optimal DRCR is at least v.  The free dual variable z has been
// eliminated against the algorithm rows, leaving, for each candidate day t,
//   v <= sum_{tau < t} tau x_tau + (t-1+B) sum_{tau >= t} x_tau.
struct AccuracySystem {
  lp::LinearProgram program{lp::Sense::Minimize};
  double target = 1.0;       // v
  int num_levels = 0;        // n
  std::vector<int> delta_vars;
};

inline AccuracySystem build_accuracy_system(int buy_cost,
                                            const std::vector<PredictionInterval>& intervals,
                                            double v) {
  if (!(v >= 1.0)) throw RangeError("build_accuracy_system: target " + std::to_string(v));
  const int n = static_cast<int>(intervals.size());
  if (n == 0) throw RangeError("build_accuracy_system: at least one interval required");
  // Placeholder accuracies: strictly decreasing so that validation keeps
  // duplicate intervals (their deltas are decision variables here).
  std::vector<double> placeholder;
  for (int i = 1; i <= n; ++i) placeholder.push_back(static_cast<double>(n + 1 - i) / (n + 1));
  const ProblemSpec spec = make_problem_spec(buy_cost, validate_profile(intervals, placeholder));
  const auto sets = support_sets(spec);
  const int B = buy_cost;

  AccuracySystem system;
  system.target = v;
  system.num_levels = n;
  auto& program = system.program;
  std::map<int, int> x_var;
  for (int tau : sets.instance_days) x_var[tau] = program.add_variable("x_" + std::to_string(tau));
  std::vector<int> y_var;
  for (int i = 1; i <= n; ++i) y_var.push_back(program.add_variable("y_" + std::to_string(i)));
  for (int i = 1; i <= n; ++i) {
    system.delta_vars.push_back(program.add_variable("delta_" + std::to_string(i), 0.0, 1.0));
  }
  for (int t : sets.purchase_days) {
    std::vector<std::pair<int, double>> terms;
    for (int tau : sets.instance_days) {
      terms.emplace_back(x_var[tau], tau < t ? static_cast<double>(tau)
                                             : static_cast<double>(t - 1 + B));
    }
    program.add_constraint(terms, lp::Relation::GreaterEqual, v, "alg_" + std::to_string(t));
  }
  for (int i = 1; i <= n + 1; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int tau : sets.instance_days) {
      if (shell_index(spec.profile, tau).value == i) {
        terms.emplace_back(x_var[tau], static_cast<double>(std::min(tau, B)));
      }
    }
    if (i >= 2) terms.emplace_back(y_var[static_cast<std::size_t>(i - 2)], 1.0);
    if (i <= n) terms.emplace_back(y_var[static_cast<std::size_t>(i - 1)], -1.0);
    double rhs = 0.0;
    if (i == 1) {
      rhs = 1.0;  // delta_0 = 1
      terms.emplace_back(system.delta_vars[0], 1.0);
    } else if (i <= n) {
      terms.emplace_back(system.delta_vars[static_cast<std::size_t>(i - 2)], -1.0);
      terms.emplace_back(system.delta_vars[static_cast<std::size_t>(i - 1)], 1.0);
    } else {
      terms.emplace_back(system.delta_vars[static_cast<std::size_t>(n - 1)], -1.0);
    }
    program.add_constraint(terms, lp::Relation::LessEqual, rhs, "level_" + std::to_string(i));
  }
  for (int i = 1; i < n; ++i) {
    program.add_constraint({{system.delta_vars[static_cast<std::size_t>(i)], 1.0},
                            {system.delta_vars[static_cast<std::size_t>(i - 1)], -1.0}},
                           lp::Relation::LessEqual, 0.0, "chain_" + std::to_string(i));
  }
  return system;
}

// Membership test of a fixed accuracy vector in the system's projection.
inline lp::FeasibilityResult accuracy_feasible(const AccuracySystem& system,
                                               const std::vector<double>& deltas) {
  if (static_cast<int>(deltas.size()) != system.num_levels) {
    throw RangeError("accuracy_feasible: expected " + std::to_string(system.num_levels) +
                     " accuracies, got " + std::to_string(deltas.size()));
  }
  lp::LinearProgram pinned = system.program;
  for (int i = 0; i < system.num_levels; ++i) {
    const double d = deltas[static_cast<std::size_t>(i)];
    if (!(d >= 0.0 && d <= 1.0)) {
      throw RangeError("accuracy_feasible: delta " + std::to_string(i + 1) + " outside [0, 1]");
    }
    pinned.add_constraint({{system.delta_vars[static_cast<std::size_t>(i)], 1.0}},
                          lp::Relation::Equal, d, "pin_" + std::to_string(i + 1));
  }
  return lp::feasible(pinned);
}

// Smallest delta at which a single prediction [l, u] still admits a dual
// certificate matching the classical optimum:
//   minimize delta
//   s.t.     classical optimum <= algorithm rows (as above)
//            sum_{tau in [l, u]} min(tau, B) x_tau - y <= 1 - delta
//            sum_{tau outside}   min(tau, B) x_tau + y <= delta.
inline lp::LinearProgram build_critical_lp(int buy_cost, int lower, int upper) {
  if (buy_cost < 2) throw RangeError("build_critical_lp: buy cost must be >= 2");
  if (upper == kUnboundedDay) {
    throw UnboundedInterval("build_critical_lp: unbounded upper endpoint");
  }
  if (lower < 1 || upper < lower) {
    throw RangeError("build_critical_lp: bad interval [" + std::to_string(lower) + ", " +
                     std::to_string(upper) + "]");
  }
  const int B = buy_cost;
  std::set<int> s_set, t_set;
  for (int d = 1; d <= B; ++d) {
    s_set.insert(d);
    t_set.insert(d);
  }
  s_set.insert(upper + 1);
  if (lower > 1) t_set.insert(lower - 1);
  t_set.insert(upper);
  t_set.insert(upper + 1);

  lp::LinearProgram program(lp::Sense::Minimize);
  std::map<int, int> x_var;
  for (int tau : t_set) x_var[tau] = program.add_variable("x_" + std::to_string(tau));
  const int y = program.add_variable("y");
  const int d_var = program.add_variable("delta", 0.0, 1.0);
  program.set_objective_coefficient(d_var, 1.0);
  const double target = detail::classical_optimum(B);
  for (int t : s_set) {
    std::vector<std::pair<int, double>> terms;
    for (int tau : t_set) {
      terms.emplace_back(x_var[tau], tau < t ? static_cast<double>(tau)
                                             : static_cast<double>(t - 1 + B));
    }
    program.add_constraint(terms, lp::Relation::GreaterEqual, target,
                           "alg_" + std::to_string(t));
  }
  std::vector<std::pair<int, double>> inside{{y, -1.0}, {d_var, 1.0}};
  std::vector<std::pair<int, double>> outside{{y, 1.0}, {d_var, -1.0}};
  for (int tau : t_set) {
    auto& side = (lower <= tau && tau <= upper) ? inside : outside;
    side.emplace_back(x_var[tau], static_cast<double>(std::min(tau, B)));
  }
  program.add_constraint(inside, lp::Relation::LessEqual, 1.0, "inside");
  program.add_constraint(outside, lp::Relation::LessEqual, 0.0, "outside");
  return program;
}

// Folds purchase mass onto the candidate days S without raising any binding
// expected-cost row: above every upper endpoint reaching B, mass slides down
// to the day after that endpoint; mass between B and the first such endpoint
// (or all mass beyond B when every endpoint is below it) slides down to B.
inline PurchaseDistribution canonicalize_distribution(const PurchaseDistribution& dist,
                                                      const ProblemSpec& spec,
                                                      const std::vector<double>& consistencies) {
  const int n = spec.profile.size();
  const int B = spec.buy_cost;
  if (static_cast<int>(consistencies.size()) != n + 1) {
    throw RangeError("canonicalize_distribution: expected " + std::to_string(n + 1) +
                     " consistency values");
  }
  for (int i = 0; i <= n; ++i) {
    const double c = consistencies[static_cast<std::size_t>(i)];
    if (!(c >= 0.0)) throw InfeasibleInput("canonicalize_distribution: negative consistency");
    if (i > 0 && consistencies[static_cast<std::size_t>(i - 1)] > c + kProbabilityTol) {
      throw InfeasibleInput("canonicalize_distribution: consistency chain violated at level " +
                            std::to_string(i + 1));
    }
  }
  const int horizon = evaluation_horizon(dist, spec);
  for (int tau = 1; tau <= horizon; ++tau) {
    const int level = shell_index(spec.profile, tau).value;
    const double cap =
        opt_cost(tau, B) * consistencies[static_cast<std::size_t>(level - 1)];
    if (algorithm_cost(dist, tau, B) > cap + kProbabilityTol) {
      throw InfeasibleInput("canonicalize_distribution: expected cost at day " +
                            std::to_string(tau) + " exceeds its bound");
    }
  }

  const bool outer_reaches = n > 0 && spec.profile.outermost_upper() >= B;
  int j = 0;
  if (outer_reaches) {
    for (int i = 1; i <= n; ++i) {
      if (spec.profile.intervals[static_cast<std::size_t>(i - 1)].upper >= B) {
        j = i;
        break;
      }
    }
  }
  std::map<int, double> folded;
  for (const auto& [day, p] : dist.entries) {
    int target = day;
    if (day > B) {
      if (!outer_reaches) {
        target = B;
      } else if (day <= spec.profile.intervals[static_cast<std::size_t>(j - 1)].upper) {
        target = B;
      } else {
        target = spec.profile.outermost_upper() + 1;
        for (int i = j; i < n; ++i) {
          if (day <= spec.profile.intervals[static_cast<std::size_t>(i)].upper) {
            target = spec.profile.intervals[static_cast<std::size_t>(i - 1)].upper + 1;
            break;
          }
        }
      }
    }
    folded[target] += p;
  }
  return make_purchase_distribution(folded);
}

struct OptimalDrcr {
  double value = 1.0;
  PurchaseDistribution algorithm;
  DrcrBreakdown breakdown;
};

// Solves the reduced primal and re-evaluates the extracted algorithm; the
// direct evaluation must reproduce the program's optimum.
inline OptimalDrcr optimal_drcr(const ProblemSpec& spec) {
  const auto sets = support_sets(spec);
  const auto program = build_primal(spec);
  const auto solution = lp::solve(program);
  if (solution.status != lp::LpSolution::Status::Optimal) {
    throw lp::NumericalFailure("optimal_drcr: reduced primal did not solve to optimality");
  }
  std::map<int, double> entries;
  for (int t : sets.purchase_days) {
    const double p = solution.values[static_cast<std::size_t>(
        program.variable("f_" + std::to_string(t)))];
    if (p > 1e-12) entries[t] = p;
  }
  OptimalDrcr result;
  result.value = solution.objective_value;
  result.algorithm = make_purchase_distribution(entries);
  result.breakdown = evaluate_drcr(result.algorithm, spec);
  if (std::abs(result.breakdown.drcr - solution.objective_value) > 1e-7) {
    throw lp::NumericalFailure("optimal_drcr: evaluation disagrees with the program optimum");
  }
  return result;
}

}  // namespace drcr
