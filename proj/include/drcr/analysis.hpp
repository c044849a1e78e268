#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "drcr/errors.hpp"
#include "drcr/model.hpp"
#include "drcr/skirental.hpp"

// Parameter studies on top of the reduced programs: how the optimal DRCR
// moves with the accuracy parameter, and the smallest accuracy at which a
// single prediction stops improving on the classical guarantee.

namespace drcr {

inline double robustness_optimum(int buy_cost) { return detail::classical_optimum(buy_cost); }

struct CurveSeries {
  std::string spec_id;
  std::vector<double> deltas;
  std::vector<double> values;  // optimal DRCR per grid point
};

// One accuracy axis sweeps the grid (marked by std::nullopt); any other
// levels keep their fixed deltas.
inline CurveSeries drcr_curve(int buy_cost, const std::vector<PredictionInterval>& intervals,
                              const std::vector<std::optional<double>>& deltas,
                              const std::vector<double>& grid) {
  if (intervals.size() != deltas.size()) {
    throw RangeError("drcr_curve: interval/delta count mismatch");
  }
  int free_axis = -1;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!deltas[i].has_value()) {
      if (free_axis >= 0) throw RangeError("drcr_curve: more than one free accuracy axis");
      free_axis = static_cast<int>(i);
    }
  }
  if (free_axis < 0) throw RangeError("drcr_curve: no free accuracy axis");
  if (grid.empty()) throw RangeError("drcr_curve: empty grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= 1.0)) throw RangeError("drcr_curve: grid point outside [0, 1]");
    if (k > 0 && grid[k] <= grid[k - 1]) throw RangeError("drcr_curve: grid not strictly increasing");
  }
  CurveSeries series;
  series.spec_id = "B=" + std::to_string(buy_cost);
  for (const auto& iv : intervals) {
    series.spec_id += " [" + std::to_string(iv.lower) + "," + std::to_string(iv.upper) + "]";
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (static_cast<int>(i) == free_axis) continue;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *deltas[i]);
    series.spec_id += " d" + std::to_string(i + 1) + "=" + buf;
  }
  series.deltas = grid;
  for (double d : grid) {
    std::vector<double> filled;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      filled.push_back(static_cast<int>(i) == free_axis ? d : *deltas[i]);
    }
    const auto spec = make_problem_spec(buy_cost, validate_profile(intervals, filled));
    series.values.push_back(optimal_drcr(spec).value);
  }
  return series;
}

inline CurveSeries drcr_curve(int buy_cost, int lower, int upper,
                              const std::vector<double>& grid) {
  return drcr_curve(buy_cost, {{lower, upper}}, {std::nullopt}, grid);
}

struct ShapeReport {
  bool monotone_ok = true;
  bool concave_ok = true;
  // Start of the flat tail: first grid delta from which the series stays
  // within tol of its final value.  Absent when only the last point would
  // qualify.
  std::optional<double> plateau_start;
  double max_violation = 0.0;
};

// Discrete monotonicity and concavity along the series: every value must
// reach the chord of every bracketing pair, up to tol.
inline ShapeReport check_shape(const CurveSeries& series, double tol) {
  const auto& d = series.deltas;
  const auto& v = series.values;
  if (d.size() != v.size() || d.empty()) throw RangeError("check_shape: malformed series");
  ShapeReport report;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double drop = v[k - 1] - v[k];
    report.max_violation = std::max(report.max_violation, drop);
    if (drop > tol) report.monotone_ok = false;
  }
  for (std::size_t a = 0; a + 2 < v.size(); ++a) {
    for (std::size_t b = a + 2; b < v.size(); ++b) {
      for (std::size_t k = a + 1; k < b; ++k) {
        const double chord = v[a] + (v[b] - v[a]) * (d[k] - d[a]) / (d[b] - d[a]);
        const double gap = chord - v[k];
        report.max_violation = std::max(report.max_violation, gap);
        if (gap > tol) report.concave_ok = false;
      }
    }
  }
  std::size_t start = v.size();
  while (start > 0 && std::abs(v[start - 1] - v.back()) <= tol) --start;
  if (start + 1 < v.size()) report.plateau_start = d[start];
  return report;
}

// Smallest delta at which the prediction stops helping, via the dual program.
inline double critical_accuracy(int buy_cost, int lower, int upper) {
  const auto program = build_critical_lp(buy_cost, lower, upper);
  const auto solution = lp::solve(program);
  if (solution.status != lp::LpSolution::Status::Optimal) {
    throw lp::NumericalFailure("critical_accuracy: program did not solve to optimality");
  }
  return solution.objective_value;
}

// Independent route to the same threshold: bisection over delta against the
// primal optimum, valid because the optimal DRCR is monotone in delta.
inline double critical_accuracy_bisection(int buy_cost, int lower, int upper,
                                          double tol = 1e-7) {
  if (!(tol > 0.0)) throw RangeError("critical_accuracy_bisection: tol must be positive");
  const double target = robustness_optimum(buy_cost) - 1e-9;
  const auto reaches_target = [&](double delta) {
    const auto spec =
        make_problem_spec(buy_cost, validate_profile({{lower, upper}}, {delta}));
    return optimal_drcr(spec).value >= target;
  };
  if (reaches_target(0.0)) return 0.0;
  if (!reaches_target(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (reaches_target(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace drcr
