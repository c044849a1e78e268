#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drcr/errors.hpp"

// Small dense linear programming layer.
//
// The problems built by this library have a few dozen variables, so the
// solver favours transparency over speed: a two-phase primal simplex on a
// dense tableau with Bland's rule permanently enabled (several of the
// reduced problems are degenerate) and reduced costs recomputed from the
// basis every iteration instead of carried in an objective row.

namespace drcr::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Centralized tolerances: pivot admission, phase-1 feasibility, reporting.
inline constexpr double kPivotTol = 1e-10;
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kReportTol = 1e-9;

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::string label;
  std::vector<double> coefficients;  // dense, one per variable
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Minimize) : sense_(sense) {}

  int add_variable(const std::string& label, double lower = 0.0, double upper = kInfinity) {
    if (!(lower <= upper)) {
      throw RangeError("LinearProgram: variable " + label + " has empty bound range");
    }
    labels_.push_back(label);
    lower_.push_back(lower);
    upper_.push_back(upper);
    objective_.push_back(0.0);
    for (auto& c : constraints_) c.coefficients.push_back(0.0);
    return static_cast<int>(labels_.size()) - 1;
  }

  int add_free_variable(const std::string& label) {
    return add_variable(label, -kInfinity, kInfinity);
  }

  void set_objective_coefficient(int var, double coeff) {
    objective_.at(static_cast<std::size_t>(var)) = coeff;
  }

  void add_constraint(const std::vector<std::pair<int, double>>& terms, Relation relation,
                      double rhs, std::string label = "") {
    Constraint c;
    c.coefficients.assign(labels_.size(), 0.0);
    for (const auto& [var, coeff] : terms) {
      c.coefficients.at(static_cast<std::size_t>(var)) += coeff;
    }
    c.relation = relation;
    c.rhs = rhs;
    c.label = label.empty() ? "r" + std::to_string(constraints_.size() + 1) : std::move(label);
    constraints_.push_back(std::move(c));
  }

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(labels_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int var) const { return labels_.at(static_cast<std::size_t>(var)); }
  double lower_bound(int var) const { return lower_.at(static_cast<std::size_t>(var)); }
  double upper_bound(int var) const { return upper_.at(static_cast<std::size_t>(var)); }

  int variable(const std::string& label) const {
    for (int j = 0; j < num_variables(); ++j) {
      if (labels_[static_cast<std::size_t>(j)] == label) return j;
    }
    throw RangeError("LinearProgram: no variable labelled " + label);
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) throw RangeError("LinearProgram: duplicate label " + l);
    }
    seen.clear();
    for (const auto& c : constraints_) {
      if (c.coefficients.size() != labels_.size()) {
        throw RangeError("LinearProgram: constraint " + c.label + " has wrong width");
      }
      if (!std::isfinite(c.rhs)) {
        throw RangeError("LinearProgram: constraint " + c.label + " has non-finite rhs");
      }
      if (!seen.insert(c.label).second) {
        throw RangeError("LinearProgram: duplicate constraint label " + c.label);
      }
    }
  }

 private:
  Sense sense_;
  std::vector<std::string> labels_;
  std::vector<double> lower_, upper_;
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
};

struct LpSolution {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  std::vector<double> values;  // one per variable when Optimal
  double objective_value = 0.0;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> witness;  // one per variable when feasible
};

namespace detail {

// Standard form: min cost.x over x >= 0 subject to rows (relation, rhs).
// Original variable j is recovered as shift[j] + x[col[j]] - x[neg_col[j]],
// where neg_col is -1 unless the variable is free, and sign[j] = -1 encodes
// the reflection used for variables bounded only from above.
struct StandardForm {
  std::vector<std::vector<double>> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;
  std::vector<double> cost;        // phase-2 cost, already oriented for minimization
  double cost_sign = 1.0;          // +1 minimize, -1 maximize
  std::vector<int> col, neg_col;
  std::vector<double> shift, sign;
  int num_cols = 0;
};

inline StandardForm standardize(const LinearProgram& lp) {
  lp.validate();
  const int n = lp.num_variables();
  StandardForm sf;
  sf.col.assign(static_cast<std::size_t>(n), -1);
  sf.neg_col.assign(static_cast<std::size_t>(n), -1);
  sf.shift.assign(static_cast<std::size_t>(n), 0.0);
  sf.sign.assign(static_cast<std::size_t>(n), 1.0);
  struct BoundRow {
    int col;
    double rhs;
  };
  std::vector<BoundRow> bound_rows;
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower_bound(j);
    const double hi = lp.upper_bound(j);
    const auto js = static_cast<std::size_t>(j);
    if (std::isinf(lo) && std::isinf(hi)) {
      sf.col[js] = sf.num_cols++;
      sf.neg_col[js] = sf.num_cols++;
    } else if (!std::isinf(lo)) {
      sf.col[js] = sf.num_cols++;
      sf.shift[js] = lo;
      if (!std::isinf(hi)) bound_rows.push_back({sf.col[js], hi - lo});
    } else {
      sf.col[js] = sf.num_cols++;  // x = hi - column
      sf.shift[js] = hi;
      sf.sign[js] = -1.0;
    }
  }
  sf.cost_sign = lp.sense() == Sense::Minimize ? 1.0 : -1.0;
  sf.cost.assign(static_cast<std::size_t>(sf.num_cols), 0.0);
  for (int j = 0; j < n; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const double c = sf.cost_sign * lp.objective()[js];
    sf.cost[static_cast<std::size_t>(sf.col[js])] += c * sf.sign[js];
    if (sf.neg_col[js] >= 0) sf.cost[static_cast<std::size_t>(sf.neg_col[js])] -= c;
  }
  for (const auto& con : lp.constraints()) {
    std::vector<double> row(static_cast<std::size_t>(sf.num_cols), 0.0);
    double rhs = con.rhs;
    for (int j = 0; j < n; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double a = con.coefficients[js];
      if (a == 0.0) continue;
      row[static_cast<std::size_t>(sf.col[js])] += a * sf.sign[js];
      if (sf.neg_col[js] >= 0) row[static_cast<std::size_t>(sf.neg_col[js])] -= a;
      rhs -= a * sf.shift[js];
    }
    sf.rows.push_back(std::move(row));
    sf.relations.push_back(con.relation);
    sf.rhs.push_back(rhs);
  }
  for (const auto& br : bound_rows) {
    std::vector<double> row(static_cast<std::size_t>(sf.num_cols), 0.0);
    row[static_cast<std::size_t>(br.col)] = 1.0;
    sf.rows.push_back(std::move(row));
    sf.relations.push_back(Relation::LessEqual);
    sf.rhs.push_back(br.rhs);
  }
  return sf;
}

// Dense simplex tableau with explicit basis bookkeeping.
class Tableau {
 public:
  explicit Tableau(const StandardForm& sf) : num_structural_(sf.num_cols) {
    const int m = static_cast<int>(sf.rows.size());
    // Count auxiliary columns first so every row can be laid out densely.
    int num_slack = 0, num_art = 0;
    for (int i = 0; i < m; ++i) {
      const bool flip = sf.rhs[static_cast<std::size_t>(i)] < 0.0;
      Relation rel = sf.relations[static_cast<std::size_t>(i)];
      if (flip) rel = rel == Relation::LessEqual  ? Relation::GreaterEqual
                      : rel == Relation::GreaterEqual ? Relation::LessEqual
                                                      : Relation::Equal;
      if (rel != Relation::Equal) ++num_slack;
      if (rel != Relation::LessEqual) ++num_art;
    }
    num_cols_ = num_structural_ + num_slack + num_art;
    first_artificial_ = num_structural_ + num_slack;
    a_.assign(static_cast<std::size_t>(m),
              std::vector<double>(static_cast<std::size_t>(num_cols_), 0.0));
    b_.assign(static_cast<std::size_t>(m), 0.0);
    basis_.assign(static_cast<std::size_t>(m), -1);
    int next_slack = num_structural_;
    int next_art = first_artificial_;
    for (int i = 0; i < m; ++i) {
      const auto is = static_cast<std::size_t>(i);
      const bool flip = sf.rhs[is] < 0.0;
      const double s = flip ? -1.0 : 1.0;
      for (int j = 0; j < num_structural_; ++j) {
        a_[is][static_cast<std::size_t>(j)] = s * sf.rows[is][static_cast<std::size_t>(j)];
      }
      b_[is] = s * sf.rhs[is];
      Relation rel = sf.relations[is];
      if (flip) rel = rel == Relation::LessEqual  ? Relation::GreaterEqual
                      : rel == Relation::GreaterEqual ? Relation::LessEqual
                                                      : Relation::Equal;
      if (rel == Relation::LessEqual) {
        a_[is][static_cast<std::size_t>(next_slack)] = 1.0;
        basis_[is] = next_slack++;
      } else if (rel == Relation::GreaterEqual) {
        a_[is][static_cast<std::size_t>(next_slack++)] = -1.0;
        a_[is][static_cast<std::size_t>(next_art)] = 1.0;
        basis_[is] = next_art++;
      } else {
        a_[is][static_cast<std::size_t>(next_art)] = 1.0;
        basis_[is] = next_art++;
      }
    }
  }

  int num_rows() const { return static_cast<int>(a_.size()); }
  int num_cols() const { return num_cols_; }
  int first_artificial() const { return first_artificial_; }
  bool is_artificial(int col) const { return col >= first_artificial_; }
  int basis(int row) const { return basis_[static_cast<std::size_t>(row)]; }
  double rhs(int row) const { return b_[static_cast<std::size_t>(row)]; }
  double entry(int row, int col) const {
    return a_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }

  // Minimizes cost over the current basis.  `allow_artificial` keeps the
  // phase-1 columns eligible; phase 2 locks them out.  Returns false when an
  // unbounded ray is detected.
  bool run(const std::vector<double>& cost, bool allow_artificial) {
    const int m = num_rows();
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      std::vector<bool> in_basis(static_cast<std::size_t>(num_cols_), false);
      for (int i = 0; i < m; ++i) in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = true;
      int enter = -1;
      for (int j = 0; j < num_cols_; ++j) {
        if (in_basis[static_cast<std::size_t>(j)]) continue;
        if (!allow_artificial && is_artificial(j)) continue;
        if (reduced_cost(cost, j) < -kPivotTol) {
          enter = j;  // Bland: smallest eligible index
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = kInfinity;
      for (int i = 0; i < m; ++i) {
        const auto is = static_cast<std::size_t>(i);
        const double aij = a_[is][static_cast<std::size_t>(enter)];
        if (aij <= kPivotTol) continue;
        const double ratio = b_[is] / aij;
        if (ratio < best - kRatioTieTol) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + kRatioTieTol && leave >= 0 &&
                   basis_[is] < basis_[static_cast<std::size_t>(leave)]) {
          leave = i;  // Bland tie-break by smallest basic index
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      for (int i = 0; i < m; ++i) {
        if (b_[static_cast<std::size_t>(i)] < -1e-6) {
          throw NumericalFailure("simplex tableau lost feasibility");
        }
      }
    }
    throw NumericalFailure("simplex iteration limit exceeded");
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int i = 0; i < num_rows(); ++i) {
      const auto is = static_cast<std::size_t>(i);
      v += cost[static_cast<std::size_t>(basis_[is])] * b_[is];
    }
    return v;
  }

  // Pivots basic artificial variables out wherever a structural or slack
  // column is available; rows that admit none are redundant and dropped.
  void expel_artificials() {
    for (int i = num_rows() - 1; i >= 0; --i) {
      const auto is = static_cast<std::size_t>(i);
      if (!is_artificial(basis_[is])) continue;
      int pivot_col = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(a_[is][static_cast<std::size_t>(j)]) > kPivotTol) {
          pivot_col = j;
          break;
        }
      }
      if (pivot_col >= 0) {
        pivot(i, pivot_col);
      } else {
        a_.erase(a_.begin() + i);
        b_.erase(b_.begin() + i);
        basis_.erase(basis_.begin() + i);
      }
    }
  }

  std::vector<double> column_values() const {
    std::vector<double> x(static_cast<std::size_t>(num_cols_), 0.0);
    for (int i = 0; i < num_rows(); ++i) {
      const auto is = static_cast<std::size_t>(i);
      x[static_cast<std::size_t>(basis_[is])] = b_[is];
    }
    return x;
  }

 private:
  static constexpr int kMaxIterations = 50000;
  static constexpr double kRatioTieTol = 1e-12;
  static constexpr double kDropTol = 1e-13;

  double reduced_cost(const std::vector<double>& cost, int col) const {
    double rc = cost[static_cast<std::size_t>(col)];
    for (int i = 0; i < num_rows(); ++i) {
      const auto is = static_cast<std::size_t>(i);
      const double aij = a_[is][static_cast<std::size_t>(col)];
      if (aij != 0.0) rc -= cost[static_cast<std::size_t>(basis_[is])] * aij;
    }
    return rc;
  }

  void pivot(int row, int col) {
    const auto rs = static_cast<std::size_t>(row);
    const double piv = a_[rs][static_cast<std::size_t>(col)];
    for (auto& v : a_[rs]) v /= piv;
    b_[rs] /= piv;
    a_[rs][static_cast<std::size_t>(col)] = 1.0;
    for (int i = 0; i < num_rows(); ++i) {
      if (i == row) continue;
      const auto is = static_cast<std::size_t>(i);
      const double factor = a_[is][static_cast<std::size_t>(col)];
      if (factor == 0.0) continue;
      for (int j = 0; j < num_cols_; ++j) {
        const auto js = static_cast<std::size_t>(j);
        a_[is][js] -= factor * a_[rs][js];
        if (std::abs(a_[is][js]) < kDropTol) a_[is][js] = 0.0;
      }
      a_[is][static_cast<std::size_t>(col)] = 0.0;
      b_[is] -= factor * b_[rs];
      if (std::abs(b_[is]) < kDropTol) b_[is] = 0.0;
    }
    basis_[rs] = col;
  }

  int num_structural_;
  int num_cols_ = 0;
  int first_artificial_ = 0;
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<int> basis_;
};

inline std::vector<double> recover_values(const StandardForm& sf,
                                          const std::vector<double>& cols) {
  std::vector<double> x(sf.col.size(), 0.0);
  for (std::size_t j = 0; j < sf.col.size(); ++j) {
    double v = sf.shift[j] + sf.sign[j] * cols[static_cast<std::size_t>(sf.col[j])];
    if (sf.neg_col[j] >= 0) v -= cols[static_cast<std::size_t>(sf.neg_col[j])];
    x[j] = v;
  }
  return x;
}

inline double constraint_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& con : lp.constraints()) {
    double lhs = 0.0;
    for (int j = 0; j < lp.num_variables(); ++j) {
      lhs += con.coefficients[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    }
    double v = 0.0;
    if (con.relation == Relation::LessEqual) v = lhs - con.rhs;
    if (con.relation == Relation::GreaterEqual) v = con.rhs - lhs;
    if (con.relation == Relation::Equal) v = std::abs(lhs - con.rhs);
    worst = std::max(worst, v);
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto js = static_cast<std::size_t>(j);
    if (!std::isinf(lp.lower_bound(j))) worst = std::max(worst, lp.lower_bound(j) - x[js]);
    if (!std::isinf(lp.upper_bound(j))) worst = std::max(worst, x[js] - lp.upper_bound(j));
  }
  return worst;
}

}  // namespace detail

inline LpSolution solve(const LinearProgram& lp) {
  const auto sf = detail::standardize(lp);
  detail::Tableau tableau(sf);
  std::vector<double> phase1_cost(static_cast<std::size_t>(tableau.num_cols()), 0.0);
  for (int j = tableau.first_artificial(); j < tableau.num_cols(); ++j) {
    phase1_cost[static_cast<std::size_t>(j)] = 1.0;
  }
  if (!tableau.run(phase1_cost, /*allow_artificial=*/true)) {
    throw NumericalFailure("phase 1 reported an unbounded ray");
  }
  if (tableau.objective(phase1_cost) > kFeasibilityTol) {
    return LpSolution{LpSolution::Status::Infeasible, {}, 0.0};
  }
  tableau.expel_artificials();
  std::vector<double> phase2_cost(static_cast<std::size_t>(tableau.num_cols()), 0.0);
  for (int j = 0; j < sf.num_cols; ++j) {
    phase2_cost[static_cast<std::size_t>(j)] = sf.cost[static_cast<std::size_t>(j)];
  }
  if (!tableau.run(phase2_cost, /*allow_artificial=*/false)) {
    return LpSolution{LpSolution::Status::Unbounded, {}, 0.0};
  }
  LpSolution solution;
  solution.status = LpSolution::Status::Optimal;
  solution.values = detail::recover_values(sf, tableau.column_values());
  double objective = 0.0;
  for (int j = 0; j < lp.num_variables(); ++j) {
    objective += lp.objective()[static_cast<std::size_t>(j)] *
                 solution.values[static_cast<std::size_t>(j)];
  }
  solution.objective_value = objective;
  if (detail::constraint_violation(lp, solution.values) > 1e-6) {
    throw NumericalFailure("optimal point fails substitution check");
  }
  return solution;
}

// Phase 1 only: decides feasibility and returns a witness point.
inline FeasibilityResult feasible(const LinearProgram& lp) {
  const auto sf = detail::standardize(lp);
  detail::Tableau tableau(sf);
  std::vector<double> phase1_cost(static_cast<std::size_t>(tableau.num_cols()), 0.0);
  for (int j = tableau.first_artificial(); j < tableau.num_cols(); ++j) {
    phase1_cost[static_cast<std::size_t>(j)] = 1.0;
  }
  if (!tableau.run(phase1_cost, /*allow_artificial=*/true)) {
    throw NumericalFailure("phase 1 reported an unbounded ray");
  }
  if (tableau.objective(phase1_cost) > kFeasibilityTol) {
    return FeasibilityResult{false, {}};
  }
  return FeasibilityResult{true, detail::recover_values(sf, tableau.column_values())};
}

// Human-readable one-equation-per-line rendering, for debugging dumps.
inline std::string to_text(const LinearProgram& lp) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  auto terms = [&](const std::vector<double>& coeffs) {
    std::string s;
    for (int j = 0; j < lp.num_variables(); ++j) {
      const double c = coeffs[static_cast<std::size_t>(j)];
      if (c == 0.0) continue;
      if (s.empty()) {
        s += (c < 0 ? "-" : "");
      } else {
        s += (c < 0 ? " - " : " + ");
      }
      const double mag = std::abs(c);
      if (mag != 1.0) s += num(mag) + " ";
      s += lp.label(j);
    }
    return s.empty() ? "0" : s;
  };
  std::string out;
  out += (lp.sense() == Sense::Minimize ? "min: " : "max: ");
  out += terms(lp.objective()) + ";\n";
  for (const auto& con : lp.constraints()) {
    const char* rel = con.relation == Relation::LessEqual      ? "<="
                      : con.relation == Relation::GreaterEqual ? ">="
                                                               : "=";
    out += con.label + ": " + terms(con.coefficients) + " " + rel + " " + num(con.rhs) + ";\n";
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double lo = lp.lower_bound(j);
    const double hi = lp.upper_bound(j);
    if (std::isinf(lo) && std::isinf(hi)) {
      out += lp.label(j) + " free;\n";
    } else if (lo != 0.0 || !std::isinf(hi)) {
      out += num(lo) + " <= " + lp.label(j);
      if (!std::isinf(hi)) out += " <= " + num(hi);
      out += ";\n";
    }
  }
  return out;
}

}  // namespace drcr::lp
