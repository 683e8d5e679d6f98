#include "rideshare/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rideshare {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct WorkRow {
  Vec coeffs;
  Relation rel;
  double rhs;
  bool active = true;
};

// Full-tableau simplex over min c.y, A y (=) b, y >= 0 once rows carry slacks
// and artificials. Returns false when the entering column is unbounded.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), width_(cols + 1), t_(rows * (cols + 1), 0.0),
                                cost_(cols + 1, 0.0), basis_(rows, -1) {}

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  double& rhs(int i) { return t_[static_cast<std::size_t>(i) * width_ + width_ - 1]; }
  double rhs(int i) const { return t_[static_cast<std::size_t>(i) * width_ + width_ - 1]; }
  Vec& cost() { return cost_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return m_; }
  int cols() const { return width_ - 1; }

  void price_out_basis(const Vec& objective) {
    // reduced costs r = c - c_B B^-1 A with the tableau already in basis form
    std::copy(objective.begin(), objective.end(), cost_.begin());
    cost_[width_ - 1] = 0;
    for (int i = 0; i < m_; ++i) {
      double cb = objective[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < width_; ++j) cost_[j] -= cb * at(i, j);
    }
  }

  void pivot(int row, int col) {
    double p = at(row, col);
    double inv = 1.0 / p;
    for (int j = 0; j < width_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    double f = cost_[col];
    if (f != 0.0) {
      for (int j = 0; j < width_; ++j) cost_[j] -= f * at(row, j);
      cost_[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Runs simplex until optimal (true) or unbounded (false). `allowed` masks
  // columns that may enter (artificials are barred in phase 2).
  bool run(const std::vector<char>& allowed, int& iterations, int iter_cap) {
    int degenerate_streak = 0;
    while (true) {
      if (++iterations > iter_cap)
        throw SolverError("simplex iteration cap exceeded (" + std::to_string(iter_cap) + ")");
      bool bland = degenerate_streak > 64;
      int enter = -1;
      double best = -kCostTol;
      for (int j = 0; j < cols(); ++j) {
        if (!allowed[j]) continue;
        double r = cost_[j];
        if (bland) {
          if (r < -1e-12) { enter = j; break; }
        } else if (r < best) {
          best = r;
          enter = j;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= kPivotTol) continue;
        double ratio = rhs(i) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      if (best_ratio <= 1e-12) ++degenerate_streak; else degenerate_streak = 0;
      pivot(leave, enter);
    }
  }

 private:
  int m_, width_;
  Vec t_;
  Vec cost_;
  std::vector<int> basis_;
};

double relation_violation(Relation rel, double lhs_minus_rhs) {
  switch (rel) {
    case Relation::le: return std::max(0.0, lhs_minus_rhs);
    case Relation::ge: return std::max(0.0, -lhs_minus_rhs);
    case Relation::eq: return std::fabs(lhs_minus_rhs);
  }
  return 0;
}

}  // namespace

LpSolution solve(const LpProblem& problem) {
  const int n = problem.n_vars;
  if (static_cast<int>(problem.objective.size()) != n)
    throw std::invalid_argument("solve: objective length != n_vars");
  for (const auto& c : problem.constraints)
    if (static_cast<int>(c.coeffs.size()) != n)
      throw std::invalid_argument("solve: constraint length != n_vars");
  for (const auto& c : problem.constraints)
    for (double v : c.coeffs)
      if (!std::isfinite(v)) throw std::invalid_argument("solve: non-finite coefficient");

  Vec lo = problem.lower.empty() ? Vec(n, 0.0) : problem.lower;
  Vec hi = problem.upper.empty() ? Vec(n, kInf) : problem.upper;

  LpSolution sol;
  sol.x.assign(n, 0.0);

  // ---- presolve: fold singleton rows into bounds, substitute fixed vars ----
  std::vector<WorkRow> rows;
  rows.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) rows.push_back({c.coeffs, c.rel, c.rhs, true});
  std::vector<char> fixed(n, 0);
  Vec fixed_value(n, 0.0);

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& row : rows) {
      if (!row.active) continue;
      int nnz = 0, var = -1;
      for (int j = 0; j < n; ++j)
        if (!fixed[j] && row.coeffs[j] != 0.0) { ++nnz; var = j; if (nnz > 1) break; }
      if (nnz == 0) {
        if (relation_violation(row.rel, -row.rhs) > kFeasTol) {
          sol.status = LpStatus::infeasible;
          return sol;
        }
        row.active = false;
        continue;
      }
      if (nnz == 1) {
        double a = row.coeffs[var];
        double t = row.rhs / a;
        bool upper_cap = (row.rel == Relation::le) == (a > 0);
        if (row.rel == Relation::eq) {
          lo[var] = std::max(lo[var], t);
          hi[var] = std::min(hi[var], t);
        } else if (upper_cap) {
          hi[var] = std::min(hi[var], t);
        } else {
          lo[var] = std::max(lo[var], t);
        }
        row.active = false;
        changed = true;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (fixed[j]) continue;
      if (lo[j] > hi[j] + kFeasTol) {
        sol.status = LpStatus::infeasible;
        return sol;
      }
      if (std::isfinite(lo[j]) && hi[j] - lo[j] <= 1e-12) {
        fixed[j] = 1;
        fixed_value[j] = 0.5 * (lo[j] + std::min(hi[j], lo[j]));
        for (auto& row : rows) {
          if (!row.active || row.coeffs[j] == 0.0) continue;
          row.rhs -= row.coeffs[j] * fixed_value[j];
          row.coeffs[j] = 0.0;
        }
        changed = true;
      }
    }
  }

  // ---- map surviving variables to shifted nonnegative columns ----
  struct VarMap {
    int var;
    double shift;
    double sign;   // x = shift + sign * y
    double cap;    // finite => y <= cap row
  };
  std::vector<VarMap> cols;
  std::vector<int> neg_col(n, -1);  // second column of a free split
  for (int j = 0; j < n; ++j) {
    if (fixed[j]) { sol.x[j] = fixed_value[j]; continue; }
    if (std::isfinite(lo[j])) {
      cols.push_back({j, lo[j], 1.0, std::isfinite(hi[j]) ? hi[j] - lo[j] : kInf});
    } else if (std::isfinite(hi[j])) {
      cols.push_back({j, hi[j], -1.0, kInf});
    } else {
      cols.push_back({j, 0.0, 1.0, kInf});
      neg_col[j] = static_cast<int>(cols.size());
      cols.push_back({j, 0.0, -1.0, kInf});
    }
  }
  const int ns = static_cast<int>(cols.size());

  struct StdRow {
    Vec a;
    Relation rel;
    double rhs;
  };
  std::vector<StdRow> std_rows;
  for (const auto& row : rows) {
    if (!row.active) continue;
    StdRow sr{Vec(ns, 0.0), row.rel, row.rhs};
    for (int c = 0; c < ns; ++c) {
      double a = row.coeffs[cols[c].var];
      if (a == 0.0) continue;
      sr.a[c] = a * cols[c].sign;
      // split vars carry shift 0, so subtracting twice is harmless
      if (cols[c].sign > 0 || neg_col[cols[c].var] < 0) sr.rhs -= a * cols[c].shift;
    }
    std_rows.push_back(std::move(sr));
  }
  for (int c = 0; c < ns; ++c) {
    if (!std::isfinite(cols[c].cap)) continue;
    StdRow sr{Vec(ns, 0.0), Relation::le, cols[c].cap};
    sr.a[c] = 1.0;
    std_rows.push_back(std::move(sr));
  }

  const int m = static_cast<int>(std_rows.size());
  auto effective_rel = [](const StdRow& sr) {
    // rows are normalized to rhs >= 0; flipping sign swaps le and ge
    if (sr.rhs >= 0 || sr.rel == Relation::eq) return sr.rel;
    return sr.rel == Relation::le ? Relation::ge : Relation::le;
  };
  int n_slack = 0, n_art = 0;
  for (const auto& sr : std_rows) {
    Relation rel = effective_rel(sr);
    if (rel != Relation::eq) ++n_slack;   // slack or surplus
    if (rel != Relation::le) ++n_art;     // ge and eq rows start on an artificial
  }

  const int total_cols = ns + n_slack + n_art;
  Tableau tab(m, total_cols);
  int slack_at = ns, art_at = ns + n_slack;
  std::vector<char> is_artificial(total_cols, 0);

  for (int i = 0; i < m; ++i) {
    const auto& sr = std_rows[i];
    double sign = sr.rhs < 0 ? -1.0 : 1.0;
    Relation rel = effective_rel(sr);
    for (int c = 0; c < ns; ++c) tab.at(i, c) = sign * sr.a[c];
    tab.rhs(i) = sign * sr.rhs;
    if (rel == Relation::le) {
      tab.at(i, slack_at) = 1.0;
      tab.basis()[i] = slack_at++;
    } else {
      if (rel == Relation::ge) tab.at(i, slack_at++) = -1.0;
      tab.at(i, art_at) = 1.0;
      is_artificial[art_at] = 1;
      tab.basis()[i] = art_at++;
    }
  }

  const int iter_cap = 5000 + 200 * (m + total_cols);
  std::vector<char> allow_all(total_cols, 1);
  std::vector<char> allow_structural(total_cols, 1);
  for (int j = 0; j < total_cols; ++j)
    if (is_artificial[j]) allow_structural[j] = 0;

  // ---- phase 1 ----
  if (n_art > 0) {
    Vec phase1_cost(total_cols, 0.0);
    for (int j = 0; j < total_cols; ++j) phase1_cost[j] = is_artificial[j] ? 1.0 : 0.0;
    tab.price_out_basis(phase1_cost);
    if (!tab.run(allow_all, sol.iterations, iter_cap))
      throw SolverError("phase 1 reported unbounded");
    double art_sum = 0;
    for (int i = 0; i < m; ++i)
      if (is_artificial[tab.basis()[i]]) art_sum += tab.rhs(i);
    if (art_sum > kFeasTol * (1.0 + std::fabs(art_sum))) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // pivot leftover zero-valued artificials out where possible
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[tab.basis()[i]]) continue;
      int piv = -1;
      for (int j = 0; j < ns + n_slack; ++j)
        if (std::fabs(tab.at(i, j)) > 1e-9) { piv = j; break; }
      if (piv >= 0) tab.pivot(i, piv);
      // otherwise the row is redundant; the artificial stays basic at zero
    }
  }

  // ---- phase 2: minimize -objective ----
  Vec phase2_cost(total_cols, 0.0);
  for (int c = 0; c < ns; ++c)
    phase2_cost[c] = -problem.objective[cols[c].var] * cols[c].sign;
  tab.price_out_basis(phase2_cost);
  if (!tab.run(allow_structural, sol.iterations, iter_cap)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  // ---- extract ----
  Vec y(total_cols, 0.0);
  for (int i = 0; i < m; ++i) y[tab.basis()[i]] = tab.rhs(i);
  for (int c = 0; c < ns; ++c) {
    const auto& vm = cols[c];
    if (neg_col[vm.var] == c) continue;  // handled by the positive column
    double value = vm.shift + vm.sign * y[c];
    if (neg_col[vm.var] >= 0) value -= y[neg_col[vm.var]];
    sol.x[vm.var] = value;
  }

  sol.value = 0;
  for (int j = 0; j < n; ++j) sol.value += problem.objective[j] * sol.x[j];
  sol.max_residual = 0;
  for (const auto& c : problem.constraints) {
    double lhs = 0;
    for (int j = 0; j < n; ++j) lhs += c.coeffs[j] * sol.x[j];
    sol.max_residual = std::max(sol.max_residual, relation_violation(c.rel, lhs - c.rhs));
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lo[j])) sol.max_residual = std::max(sol.max_residual, lo[j] - sol.x[j]);
    if (std::isfinite(hi[j])) sol.max_residual = std::max(sol.max_residual, sol.x[j] - hi[j]);
  }
  sol.status = LpStatus::optimal;
  return sol;
}

}  // namespace rideshare
