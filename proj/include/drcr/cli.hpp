#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drcr/analysis.hpp"
#include "drcr/errors.hpp"
#include "drcr/io.hpp"
#include "drcr/skirental.hpp"

// Command line front end.  Verbs:
//   solve       optimal randomized rule and its DRCR for a full spec
//   evaluate    DRCR of a given purchase rule
//   curve       optimal DRCR swept along one accuracy axis
//   critical    smallest delta at which a prediction stops helping
//   feasible    membership of an accuracy vector in the level-v polytope
//   robustness  classical optimum for a buy cost
// Exit codes: 0 success, 1 invalid input, 2 solver failure.

namespace drcr::cli {

namespace detail {

struct IntervalFlag {
  PredictionInterval interval;
  std::optional<double> delta;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

inline int parse_day(const std::string& s, const std::string& flag) {
  if (s == "inf" || s == "INF" || s == "Inf") return kUnboundedDay;
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw RangeError(flag + ": '" + s + "' is not an integer day");
  }
}

inline double parse_real(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw RangeError(flag + ": '" + s + "' is not a number");
  }
}

inline IntervalFlag parse_interval(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2 && parts.size() != 3) {
    throw RangeError("--interval: '" + s + "' is not lower:upper or lower:upper:delta");
  }
  IntervalFlag flag;
  flag.interval.lower = parse_day(parts[0], "--interval");
  flag.interval.upper = parse_day(parts[1], "--interval");
  if (parts.size() == 3) flag.delta = parse_real(parts[2], "--interval");
  return flag;
}

inline std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw RangeError("--grid: expected start:stop:step");
  const double a = parse_real(parts[0], "--grid");
  const double b = parse_real(parts[1], "--grid");
  const double step = parse_real(parts[2], "--grid");
  if (!(step > 0.0)) throw RangeError("--grid: step must be positive");
  if (!(a >= 0.0 && b <= 1.0 && a < b)) throw RangeError("--grid: need 0 <= start < stop <= 1");
  const int count = static_cast<int>(std::lround((b - a) / step)) + 1;
  if (count < 2) throw RangeError("--grid: fewer than two points");
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) {
    grid.push_back(a + (b - a) * k / (count - 1));
  }
  return grid;
}

struct CommonFlags {
  int buy_cost = 0;
  std::vector<std::string> interval_flags;
  std::string spec_path;
  std::string output_path;
  bool dump_lp = false;
};

inline std::vector<IntervalFlag> parsed_intervals(const CommonFlags& flags) {
  std::vector<IntervalFlag> out;
  for (const auto& s : flags.interval_flags) out.push_back(parse_interval(s));
  return out;
}

// Full spec: either --spec file or --B with every --interval carrying a delta.
inline ProblemSpec spec_from_flags(const CommonFlags& flags) {
  if (!flags.spec_path.empty()) {
    if (flags.buy_cost != 0 || !flags.interval_flags.empty()) {
      throw RangeError("--spec: cannot be combined with --B/--interval");
    }
    return io::parse_problem_spec(io::load_json_file(flags.spec_path));
  }
  if (flags.buy_cost == 0) throw RangeError("--B: required when no --spec file is given");
  std::vector<PredictionInterval> intervals;
  std::vector<double> deltas;
  for (const auto& f : parsed_intervals(flags)) {
    if (!f.delta.has_value()) {
      throw RangeError("--interval: delta component required here (lower:upper:delta)");
    }
    intervals.push_back(f.interval);
    deltas.push_back(*f.delta);
  }
  return make_problem_spec(flags.buy_cost, validate_profile(intervals, deltas));
}

inline void emit(const std::string& text, const CommonFlags& flags, std::ostream& out) {
  if (flags.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(flags.output_path, std::ios::binary);
  if (!file) throw RangeError("--output: cannot open " + flags.output_path);
  file << text;
}

inline void add_common(CLI::App* cmd, CommonFlags& flags, bool with_intervals = true) {
  cmd->add_option("--B", flags.buy_cost, "buy cost (integer >= 2)");
  if (with_intervals) {
    cmd->add_option("--interval", flags.interval_flags,
                    "prediction interval lower:upper[:delta], innermost first, repeatable");
    cmd->add_option("--spec", flags.spec_path, "JSON spec file instead of --B/--interval");
  }
  cmd->add_option("--output", flags.output_path, "write the result to this file");
  cmd->add_flag("--dump-lp", flags.dump_lp, "print the constructed program to stderr");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"distributionally robust ski rental with prediction intervals"};
  app.require_subcommand(1);

  detail::CommonFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "optimal purchase rule and its DRCR");
  detail::add_common(solve_cmd, solve_flags);

  detail::CommonFlags eval_flags;
  std::string dist_path;
  auto* eval_cmd = app.add_subcommand("evaluate", "DRCR of a given purchase rule");
  detail::add_common(eval_cmd, eval_flags);
  eval_cmd->add_option("--dist", dist_path, "JSON purchase distribution")->required();

  detail::CommonFlags curve_flags;
  std::string grid_flag;
  std::string curve_format = "csv";
  auto* curve_cmd = app.add_subcommand("curve", "optimal DRCR along one accuracy axis");
  detail::add_common(curve_cmd, curve_flags);
  curve_cmd->add_option("--grid", grid_flag, "accuracy grid start:stop:step")->required();
  curve_cmd->add_option("--format", curve_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  detail::CommonFlags critical_flags;
  bool check_bisection = false;
  double bisection_tol = 1e-7;
  auto* critical_cmd =
      app.add_subcommand("critical", "smallest delta at which the prediction stops helping");
  detail::add_common(critical_cmd, critical_flags);
  critical_cmd->add_flag("--check", check_bisection, "cross-check against bisection");
  critical_cmd->add_option("--tol", bisection_tol, "bisection tolerance");

  detail::CommonFlags feasible_flags;
  double target_v = 0.0;
  std::vector<double> pinned_deltas;
  auto* feasible_cmd =
      app.add_subcommand("feasible", "accuracy vector membership in the level-v polytope");
  detail::add_common(feasible_cmd, feasible_flags);
  feasible_cmd->add_option("--v", target_v, "DRCR level of the polytope")->required();
  feasible_cmd->add_option("--delta", pinned_deltas, "accuracy per level, innermost first");

  detail::CommonFlags robustness_flags;
  auto* robustness_cmd = app.add_subcommand("robustness", "classical optimum for a buy cost");
  detail::add_common(robustness_cmd, robustness_flags, /*with_intervals=*/false);

  try {
    std::vector<const char*> argv;
    argv.push_back("drcr");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (solve_cmd->parsed()) {
      const auto spec = detail::spec_from_flags(solve_flags);
      if (solve_flags.dump_lp) err << lp::to_text(build_primal(spec));
      const auto result = optimal_drcr(spec);
      detail::emit(io::solution_to_json(result.value, result.breakdown.consistencies,
                                        result.algorithm) +
                       "\n",
                   solve_flags, out);
      return 0;
    }

    if (eval_cmd->parsed()) {
      const auto spec = detail::spec_from_flags(eval_flags);
      const auto dist = io::parse_purchase_distribution(io::load_json_file(dist_path));
      const auto breakdown = evaluate_drcr(dist, spec);
      detail::emit(io::solution_to_json(breakdown.drcr, breakdown.consistencies, dist) + "\n",
                   eval_flags, out);
      return 0;
    }

    if (curve_cmd->parsed()) {
      if (curve_flags.buy_cost == 0) throw RangeError("--B: required");
      std::vector<PredictionInterval> intervals;
      std::vector<std::optional<double>> deltas;
      for (const auto& f : detail::parsed_intervals(curve_flags)) {
        intervals.push_back(f.interval);
        deltas.push_back(f.delta);
      }
      const auto series =
          drcr_curve(curve_flags.buy_cost, intervals, deltas, detail::parse_grid(grid_flag));
      detail::emit(curve_format == "csv" ? io::curve_to_csv(series)
                                         : io::curve_to_json(series) + "\n",
                   curve_flags, out);
      return 0;
    }

    if (critical_cmd->parsed()) {
      if (critical_flags.buy_cost == 0) throw RangeError("--B: required");
      const auto parsed = detail::parsed_intervals(critical_flags);
      if (parsed.size() != 1 || parsed[0].delta.has_value()) {
        throw RangeError("--interval: exactly one lower:upper interval, without a delta");
      }
      const int l = parsed[0].interval.lower, u = parsed[0].interval.upper;
      if (critical_flags.dump_lp) {
        err << lp::to_text(build_critical_lp(critical_flags.buy_cost, l, u));
      }
      const double via_program = critical_accuracy(critical_flags.buy_cost, l, u);
      std::string body = "{\"critical_accuracy\":" + io::format_number(via_program);
      int code = 0;
      if (check_bisection) {
        const double via_bisection =
            critical_accuracy_bisection(critical_flags.buy_cost, l, u, bisection_tol);
        const bool agree = std::abs(via_program - via_bisection) <= 1e-6;
        body += ",\"bisection\":" + io::format_number(via_bisection) +
                ",\"agree\":" + (agree ? "true" : "false");
        if (!agree) code = 2;
      }
      body += "}";
      detail::emit(body + "\n", critical_flags, out);
      if (code != 0) err << "error: program and bisection disagree by more than 1e-6\n";
      return code;
    }

    if (feasible_cmd->parsed()) {
      std::vector<PredictionInterval> intervals;
      std::vector<double> deltas = pinned_deltas;
      int buy_cost = feasible_flags.buy_cost;
      if (!feasible_flags.spec_path.empty()) {
        const auto spec = io::parse_problem_spec(io::load_json_file(feasible_flags.spec_path));
        buy_cost = spec.buy_cost;
        intervals = spec.profile.intervals;
        if (deltas.empty()) deltas = spec.profile.deltas;
      } else {
        if (buy_cost == 0) throw RangeError("--B: required");
        for (const auto& f : detail::parsed_intervals(feasible_flags)) {
          if (f.delta.has_value()) {
            throw RangeError("--interval: pass accuracies through --delta here");
          }
          intervals.push_back(f.interval);
        }
      }
      const auto system = build_accuracy_system(buy_cost, intervals, target_v);
      if (feasible_flags.dump_lp) err << lp::to_text(system.program);
      const auto result = accuracy_feasible(system, deltas);
      detail::emit(std::string("{\"feasible\":") + (result.feasible ? "true" : "false") + "}\n",
                   feasible_flags, out);
      return 0;
    }

    if (robustness_cmd->parsed()) {
      if (robustness_flags.buy_cost == 0) throw RangeError("--B: required");
      detail::emit("{\"robustness_optimum\":" +
                       io::format_number(robustness_optimum(robustness_flags.buy_cost)) + "}\n",
                   robustness_flags, out);
      return 0;
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const lp::NumericalFailure& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace drcr::cli
