#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drcr/analysis.hpp"
#include "drcr/errors.hpp"
#include "drcr/evaluate.hpp"
#include "drcr/model.hpp"

// Serialization.  Emission is hand-rolled so that every number is printed
// with 9 significant digits and the byte stream is deterministic; parsing
// uses nlohmann::json.

namespace drcr::io {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::string(buf);
}

// {"B": int, "intervals": [[l, u], ...], "deltas": [d, ...]}
inline ProblemSpec parse_problem_spec(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("B") || !j.contains("intervals") || !j.contains("deltas")) {
    throw RangeError("spec json: expected object with B, intervals, deltas");
  }
  if (!j["B"].is_number_integer()) throw RangeError("spec json: B must be an integer");
  std::vector<PredictionInterval> intervals;
  for (const auto& entry : j["intervals"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer()) {
      throw RangeError("spec json: each interval must be [lower, upper]");
    }
    PredictionInterval iv;
    iv.lower = entry[0].get<int>();
    // A null or non-finite upper endpoint encodes a request for an unbounded
    // interval, which validation rejects.
    iv.upper = entry[1].is_number_integer() ? entry[1].get<int>() : kUnboundedDay;
    intervals.push_back(iv);
  }
  std::vector<double> deltas;
  for (const auto& entry : j["deltas"]) {
    if (!entry.is_number()) throw RangeError("spec json: deltas must be numbers");
    deltas.push_back(entry.get<double>());
  }
  return make_problem_spec(j["B"].get<int>(), validate_profile(intervals, deltas));
}

inline std::string spec_to_json(const ProblemSpec& spec) {
  std::string out = "{\"B\":" + std::to_string(spec.buy_cost) + ",\"intervals\":[";
  for (int i = 0; i < spec.profile.size(); ++i) {
    const auto& iv = spec.profile.intervals[static_cast<std::size_t>(i)];
    if (i > 0) out += ",";
    out += "[" + std::to_string(iv.lower) + "," + std::to_string(iv.upper) + "]";
  }
  out += "],\"deltas\":[";
  for (int i = 0; i < spec.profile.size(); ++i) {
    if (i > 0) out += ",";
    out += format_number(spec.profile.deltas[static_cast<std::size_t>(i)]);
  }
  out += "]}";
  return out;
}

// Accepts {"entries": {day: p}}, a solve result ({"distribution": {...}}),
// or a bare day -> probability object.
inline PurchaseDistribution parse_purchase_distribution(const nlohmann::json& j) {
  const nlohmann::json* table = &j;
  if (j.is_object() && j.contains("entries")) table = &j["entries"];
  else if (j.is_object() && j.contains("distribution")) table = &j["distribution"];
  if (!table->is_object()) throw RangeError("distribution json: expected an object of day: mass");
  std::map<int, double> entries;
  for (const auto& [key, value] : table->items()) {
    int day = 0;
    try {
      std::size_t used = 0;
      day = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw RangeError("distribution json: day key '" + key + "' is not an integer");
    }
    if (!value.is_number()) throw RangeError("distribution json: mass of day " + key);
    entries[day] = value.get<double>();
  }
  // Nine-significant-digit output rounds each mass by up to 5e-10; accept
  // that noise here, renormalization restores an exact total.
  return make_purchase_distribution(entries, 1e-6);
}

inline std::string distribution_table(const std::map<int, double>& entries) {
  std::string out = "{";
  bool first = true;
  for (const auto& [day, p] : entries) {
    if (!first) out += ",";
    first = false;
    out += "\"" + std::to_string(day) + "\":" + format_number(p);
  }
  out += "}";
  return out;
}

// {"drcr": v, "consistencies": [...], "distribution": {"day": p, ...}}
inline std::string solution_to_json(double drcr, const std::vector<double>& consistencies,
                                    const PurchaseDistribution& algorithm) {
  std::string out = "{\"drcr\":" + format_number(drcr) + ",\"consistencies\":[";
  for (std::size_t i = 0; i < consistencies.size(); ++i) {
    if (i > 0) out += ",";
    out += format_number(consistencies[i]);
  }
  out += "],\"distribution\":" + distribution_table(algorithm.entries) + "}";
  return out;
}

inline std::string curve_to_csv(const CurveSeries& series) {
  std::string out = "delta,optimal_drcr\n";
  for (std::size_t k = 0; k < series.deltas.size(); ++k) {
    out += format_number(series.deltas[k]) + "," + format_number(series.values[k]) + "\n";
  }
  return out;
}

inline std::string curve_to_json(const CurveSeries& series) {
  std::string out = "{\"delta\":[";
  for (std::size_t k = 0; k < series.deltas.size(); ++k) {
    if (k > 0) out += ",";
    out += format_number(series.deltas[k]);
  }
  out += "],\"optimal_drcr\":[";
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    if (k > 0) out += ",";
    out += format_number(series.values[k]);
  }
  out += "]}";
  return out;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RangeError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw RangeError(path + ": " + e.what());
  }
  return j;
}

}  // namespace drcr::io
