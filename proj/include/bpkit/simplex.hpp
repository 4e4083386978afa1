// Dense two-phase primal simplex for the restricted master problem. Supports
// bounded variables (upper bound 0 deactivates branched-away columns),
// incremental column addition with basis warm starts, and reports row duals.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iostream>
#include <limits>
#include <utility>
#include <vector>

#include "bpkit/core.hpp"

namespace bpkit {

enum class RowSense { Ge, Eq, Le };
enum class LpStatus { Optimal, Infeasible, Unbounded };

inline constexpr double kLpFeasTol = 1e-9;
inline constexpr double kLpOptTol = 1e-9;
inline constexpr int kDegeneratePivotsBeforeBland = 5000;
inline constexpr int kRefactorInterval = 100;

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;  // one value per column
  std::vector<double> duals;   // one value per row
  double objective = 0.0;
};

struct Basis {
  std::vector<int> basic;       // internal variable index per row
  std::vector<uint8_t> vstat;   // VarStatus per internal variable
  bool empty() const { return basic.empty(); }
};

class LinearProgram {
 public:
  int add_row(RowSense sense, double rhs) {
    rows_.push_back({sense, rhs});
    for (auto& col : cols_) col.coeffs.resize(rows_.size(), 0.0);
    return static_cast<int>(rows_.size()) - 1;
  }

  int add_column(double cost, const std::vector<std::pair<int, double>>& row_coeffs,
                 double upper = kInf) {
    Column c;
    c.cost = cost;
    c.upper = upper;
    c.coeffs.assign(rows_.size(), 0.0);
    for (auto [row, v] : row_coeffs) {
      if (row < 0 || row >= static_cast<int>(rows_.size()))
        throw DimensionMismatchError("add_column: row index out of range");
      c.coeffs[static_cast<size_t>(row)] += v;
    }
    cols_.push_back(std::move(c));
    return static_cast<int>(cols_.size()) - 1;
  }

  void set_column_upper_bound(int index, double ub) {
    if (index < 0 || index >= static_cast<int>(cols_.size()))
      throw DimensionMismatchError("set_column_upper_bound: invalid index");
    if (ub < 0) throw DimensionMismatchError("set_column_upper_bound: negative bound");
    cols_[static_cast<size_t>(index)].upper = ub;
  }

  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_cols() const { return static_cast<int>(cols_.size()); }
  double rhs(int i) const { return rows_[static_cast<size_t>(i)].rhs; }
  RowSense sense(int i) const { return rows_[static_cast<size_t>(i)].sense; }
  double cost(int j) const { return cols_[static_cast<size_t>(j)].cost; }
  double upper(int j) const { return cols_[static_cast<size_t>(j)].upper; }
  double coeff(int i, int j) const {
    return cols_[static_cast<size_t>(j)].coeffs[static_cast<size_t>(i)];
  }

  // Plain-text dump: objective line, then one row per line (coeffs, sense, rhs).
  void dump(std::ostream& os) const {
    os << "min";
    for (const auto& c : cols_) os << ' ' << c.cost;
    os << '\n';
    for (size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& c : cols_) os << c.coeffs[i] << ' ';
      os << (rows_[i].sense == RowSense::Ge ? ">=" : rows_[i].sense == RowSense::Eq ? "=" : "<=")
         << ' ' << rows_[i].rhs << '\n';
    }
  }

 private:
  struct Row {
    RowSense sense;
    double rhs;
  };
  struct Column {
    double cost;
    double upper;
    std::vector<double> coeffs;
  };
  std::vector<Row> rows_;
  std::vector<Column> cols_;
};

namespace lpdetail {

enum VarStatus : uint8_t { kNonbasicLower = 0, kNonbasicUpper = 1, kBasic = 2 };

// Internal variable order: slacks (one per inequality row), artificials (one
// per row), then the structural columns; structural indices never shift when
// columns are appended, which keeps warm bases valid.
struct Tableau {
  int m = 0;
  int n_slack = 0;
  int n_total = 0;
  int struct_base = 0;
  Eigen::MatrixXd cols;   // m x n_total
  Eigen::VectorXd lb, ub;
  Eigen::VectorXd cost1, cost2;
  Eigen::VectorXd b;
  std::vector<double> row_sign;
  std::vector<int> slack_of_row;  // -1 for equality rows

  int artificial(int row) const { return n_slack + row; }
  bool is_artificial(int j) const { return j >= n_slack && j < n_slack + m; }
};

inline Tableau build_tableau(const LinearProgram& lp) {
  Tableau t;
  t.m = lp.num_rows();
  t.slack_of_row.assign(static_cast<size_t>(t.m), -1);
  t.row_sign.assign(static_cast<size_t>(t.m), 1.0);
  for (int i = 0; i < t.m; ++i)
    if (lp.sense(i) != RowSense::Eq) t.slack_of_row[static_cast<size_t>(i)] = t.n_slack++;
  t.struct_base = t.n_slack + t.m;
  t.n_total = t.struct_base + lp.num_cols();

  t.cols = Eigen::MatrixXd::Zero(t.m, t.n_total);
  t.lb = Eigen::VectorXd::Zero(t.n_total);
  t.ub = Eigen::VectorXd::Constant(t.n_total, kInf);
  t.cost1 = Eigen::VectorXd::Zero(t.n_total);
  t.cost2 = Eigen::VectorXd::Zero(t.n_total);
  t.b = Eigen::VectorXd::Zero(t.m);

  for (int i = 0; i < t.m; ++i) {
    double sign = lp.rhs(i) < 0 ? -1.0 : 1.0;
    t.row_sign[static_cast<size_t>(i)] = sign;
    t.b(i) = sign * lp.rhs(i);
    int s = t.slack_of_row[static_cast<size_t>(i)];
    if (s >= 0) t.cols(i, s) = sign * (lp.sense(i) == RowSense::Ge ? -1.0 : 1.0);
    t.cols(i, t.artificial(i)) = 1.0;
    t.cost1(t.artificial(i)) = 1.0;
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    int v = t.struct_base + j;
    for (int i = 0; i < t.m; ++i)
      t.cols(i, v) = t.row_sign[static_cast<size_t>(i)] * lp.coeff(i, j);
    t.cost2(v) = lp.cost(j);
    t.ub(v) = lp.upper(j);
  }
  return t;
}

struct SimplexState {
  std::vector<int> basic;
  std::vector<uint8_t> vstat;
  Eigen::MatrixXd Binv;
  Eigen::VectorXd xB;
  int pivots_since_refactor = 0;
  int consecutive_degenerate = 0;
  bool bland = false;
};

inline double nonbasic_value(const Tableau& t, const SimplexState& s, int j) {
  return s.vstat[static_cast<size_t>(j)] == kNonbasicUpper ? t.ub(j) : t.lb(j);
}

inline void refactorize(const Tableau& t, SimplexState& s) {
  Eigen::MatrixXd B(t.m, t.m);
  for (int i = 0; i < t.m; ++i) B.col(i) = t.cols.col(s.basic[static_cast<size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  if (!lu.isInvertible()) throw NumericalFailure("singular basis");
  s.Binv = lu.inverse();
  Eigen::VectorXd r = t.b;
  for (int j = 0; j < t.n_total; ++j) {
    if (s.vstat[static_cast<size_t>(j)] == kBasic) continue;
    double v = nonbasic_value(t, s, j);
    if (v != 0.0) r -= t.cols.col(j) * v;
  }
  s.xB = s.Binv * r;
  s.pivots_since_refactor = 0;
}

inline void cold_basis(const Tableau& t, SimplexState& s) {
  s.basic.resize(static_cast<size_t>(t.m));
  s.vstat.assign(static_cast<size_t>(t.n_total), kNonbasicLower);
  for (int i = 0; i < t.m; ++i) {
    s.basic[static_cast<size_t>(i)] = t.artificial(i);
    s.vstat[static_cast<size_t>(t.artificial(i))] = kBasic;
  }
  refactorize(t, s);
}

inline bool basis_feasible(const Tableau& t, const SimplexState& s) {
  for (int i = 0; i < t.m; ++i) {
    int j = s.basic[static_cast<size_t>(i)];
    if (s.xB(i) < t.lb(j) - 1e-7 || s.xB(i) > t.ub(j) + 1e-7) return false;
  }
  return true;
}

// One phase of bounded-variable primal simplex. phase1 selects the artificial
// cost vector and forbids structural unboundedness claims.
inline void run_phase(const Tableau& t, SimplexState& s, bool phase1, bool& unbounded) {
  const Eigen::VectorXd& cost = phase1 ? t.cost1 : t.cost2;
  unbounded = false;
  Eigen::VectorXd cB(t.m);
  long max_pivots = 200000;
  while (max_pivots-- > 0) {
    for (int i = 0; i < t.m; ++i) cB(i) = cost(s.basic[static_cast<size_t>(i)]);
    Eigen::VectorXd pi = s.Binv.transpose() * cB;

    int enter = -1;
    double best_violation = kLpOptTol;
    bool enter_from_upper = false;
    for (int j = 0; j < t.n_total; ++j) {
      uint8_t st = s.vstat[static_cast<size_t>(j)];
      if (st == kBasic) continue;
      if (!phase1 && t.is_artificial(j)) continue;
      if (t.ub(j) - t.lb(j) < 1e-14) continue;  // fixed variable
      double d = cost(j) - pi.dot(t.cols.col(j));
      bool eligible = st == kNonbasicLower ? d < -kLpOptTol : d > kLpOptTol;
      if (!eligible) continue;
      if (s.bland) {
        enter = j;
        enter_from_upper = st == kNonbasicUpper;
        break;
      }
      if (std::abs(d) > best_violation) {
        best_violation = std::abs(d);
        enter = j;
        enter_from_upper = st == kNonbasicUpper;
      }
    }
    if (enter < 0) return;  // phase optimal

    Eigen::VectorXd y = s.Binv * t.cols.col(enter);
    double dir = enter_from_upper ? -1.0 : 1.0;

    double t_max = t.ub(enter) - t.lb(enter);  // bound flip distance
    int leave_row = -1;
    double leave_to_upper = false;
    for (int i = 0; i < t.m; ++i) {
      double rate = -dir * y(i);
      int bj = s.basic[static_cast<size_t>(i)];
      double limit = kInf;
      bool to_upper = false;
      if (rate < -1e-11) {
        limit = (s.xB(i) - t.lb(bj)) / (-rate);
      } else if (rate > 1e-11) {
        if (t.ub(bj) == kInf) continue;
        limit = (t.ub(bj) - s.xB(i)) / rate;
        to_upper = true;
      } else {
        continue;
      }
      if (limit < -1e-12) limit = 0.0;
      bool better = limit < t_max - 1e-12;
      bool tie = std::abs(limit - t_max) <= 1e-12 && leave_row >= 0;
      if (tie) {
        int cur = s.basic[static_cast<size_t>(leave_row)];
        if (s.bland ? bj < cur : std::abs(y(i)) > std::abs(y(leave_row))) better = true;
      }
      if (better) {
        t_max = limit;
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }

    if (t_max == kInf) {
      unbounded = true;  // cannot happen in phase 1 (objective bounded by 0)
      return;
    }
    if (t_max < 0) t_max = 0;

    // Track degeneracy for the Bland switch.
    if (t_max <= 1e-12) {
      if (++s.consecutive_degenerate >= kDegeneratePivotsBeforeBland) s.bland = true;
    } else {
      s.consecutive_degenerate = 0;
    }

    for (int i = 0; i < t.m; ++i) s.xB(i) += -dir * y(i) * t_max;

    if (leave_row < 0) {
      // Bound flip: the entering variable runs to its opposite bound.
      s.vstat[static_cast<size_t>(enter)] = enter_from_upper ? kNonbasicLower : kNonbasicUpper;
    } else {
      int leaving = s.basic[static_cast<size_t>(leave_row)];
      s.vstat[static_cast<size_t>(leaving)] = leave_to_upper ? kNonbasicUpper : kNonbasicLower;
      s.basic[static_cast<size_t>(leave_row)] = enter;
      s.vstat[static_cast<size_t>(enter)] = kBasic;
      double enter_value =
          enter_from_upper ? t.ub(enter) - t_max : t.lb(enter) + t_max;
      s.xB(leave_row) = enter_value;
      // Product-form update of the explicit inverse.
      double piv = y(leave_row);
      if (std::abs(piv) < 1e-12) {
        refactorize(t, s);
      } else {
        s.Binv.row(leave_row) /= piv;
        for (int i = 0; i < t.m; ++i) {
          if (i == leave_row) continue;
          double f = y(i);
          if (f != 0.0) s.Binv.row(i) -= f * s.Binv.row(leave_row);
        }
        if (++s.pivots_since_refactor >= kRefactorInterval) refactorize(t, s);
      }
    }
  }
  throw NumericalFailure("simplex pivot limit exceeded");
}

}  // namespace lpdetail

// Two-phase solve. A warm basis (from a previous solve of the same program,
// possibly with columns appended since) is used when still consistent;
// otherwise the solver falls back to the all-artificial cold start.
inline std::pair<LpSolution, Basis> solve_lp(const LinearProgram& lp, const Basis* warm = nullptr) {
  using namespace lpdetail;
  Tableau t = build_tableau(lp);
  SimplexState s;

  auto try_warm = [&]() -> bool {
    if (warm == nullptr || warm->empty()) return false;
    if (static_cast<int>(warm->basic.size()) != t.m) return false;
    if (static_cast<int>(warm->vstat.size()) > t.n_total) return false;
    s.basic = warm->basic;
    s.vstat = warm->vstat;
    s.vstat.resize(static_cast<size_t>(t.n_total), kNonbasicLower);
    std::vector<char> seen(static_cast<size_t>(t.n_total), 0);
    for (int j : s.basic) {
      if (j < 0 || j >= t.n_total || seen[static_cast<size_t>(j)]) return false;
      seen[static_cast<size_t>(j)] = 1;
      if (s.vstat[static_cast<size_t>(j)] != kBasic) return false;
    }
    // Nonbasic-at-upper only makes sense for finite bounds.
    for (int j = 0; j < t.n_total; ++j)
      if (s.vstat[static_cast<size_t>(j)] == kNonbasicUpper && t.ub(j) == kInf)
        s.vstat[static_cast<size_t>(j)] = kNonbasicLower;
    try {
      refactorize(t, s);
    } catch (const NumericalFailure&) {
      return false;
    }
    return basis_feasible(t, s);
  };

  auto run = [&](bool warm_started) -> LpSolution {
    LpSolution sol;
    bool unbounded = false;
    double artificial_level = 0.0;
    for (int i = 0; i < t.m; ++i)
      if (t.is_artificial(s.basic[static_cast<size_t>(i)]))
        artificial_level += std::max(0.0, s.xB(i));
    for (int j = t.n_slack; j < t.n_slack + t.m; ++j)
      if (s.vstat[static_cast<size_t>(j)] == kNonbasicUpper) artificial_level += t.ub(j);
    if (!warm_started || artificial_level > kLpFeasTol) {
      run_phase(t, s, /*phase1=*/true, unbounded);
      double infeas = 0.0;
      for (int i = 0; i < t.m; ++i)
        if (t.is_artificial(s.basic[static_cast<size_t>(i)])) infeas += std::max(0.0, s.xB(i));
      if (infeas > kLpFeasTol * (1.0 + t.b.lpNorm<Eigen::Infinity>())) {
        sol.status = LpStatus::Infeasible;
        return sol;
      }
    }
    // Artificials are pinned to zero for phase 2.
    for (int i = 0; i < t.m; ++i) t.ub(t.artificial(i)) = 0.0;
    run_phase(t, s, /*phase1=*/false, unbounded);
    if (unbounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.primal.assign(static_cast<size_t>(lp.num_cols()), 0.0);
    for (int j = 0; j < lp.num_cols(); ++j) {
      int v = t.struct_base + j;
      sol.primal[static_cast<size_t>(j)] =
          s.vstat[static_cast<size_t>(v)] == kNonbasicUpper ? t.ub(v) : t.lb(v);
    }
    for (int i = 0; i < t.m; ++i) {
      int bj = s.basic[static_cast<size_t>(i)];
      if (bj >= t.struct_base)
        sol.primal[static_cast<size_t>(bj - t.struct_base)] = s.xB(i);
    }
    Eigen::VectorXd cB(t.m);
    for (int i = 0; i < t.m; ++i) cB(i) = t.cost2(s.basic[static_cast<size_t>(i)]);
    Eigen::VectorXd pi = s.Binv.transpose() * cB;
    sol.duals.assign(static_cast<size_t>(t.m), 0.0);
    for (int i = 0; i < t.m; ++i)
      sol.duals[static_cast<size_t>(i)] = t.row_sign[static_cast<size_t>(i)] * pi(i);
    sol.objective = 0.0;
    for (int j = 0; j < lp.num_cols(); ++j)
      sol.objective += lp.cost(j) * sol.primal[static_cast<size_t>(j)];
    return sol;
  };

  LpSolution sol;
  bool warmed = try_warm();
  if (!warmed) cold_basis(t, s);
  try {
    sol = run(warmed);
  } catch (const NumericalFailure&) {
    if (!warmed) throw;  // cold start already failed
    cold_basis(t, s);
    sol = run(false);
  }

  Basis out;
  out.basic = s.basic;
  out.vstat = s.vstat;
  return {std::move(sol), std::move(out)};
}

}  // namespace bpkit
