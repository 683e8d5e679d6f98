#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rideshare/matrix.hpp"

namespace rideshare {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Relation { le, eq, ge };

struct LpConstraint {
  Vec coeffs;
  Relation rel = Relation::le;
  double rhs = 0;
};

// Dense linear program, maximization form. Variables default to [0, +inf).
struct LpProblem {
  int n_vars = 0;
  Vec objective;                       // maximize objective . x
  std::vector<LpConstraint> constraints;
  Vec lower;                           // empty means all 0
  Vec upper;                           // empty means all +inf

  explicit LpProblem(int n = 0)
      : n_vars(n),
        objective(n, 0.0),
        lower(n, 0.0),
        upper(n, std::numeric_limits<double>::infinity()) {}

  void add_constraint(Vec coeffs, Relation rel, double rhs) {
    if (static_cast<int>(coeffs.size()) != n_vars)
      throw std::invalid_argument("LpProblem: constraint length != n_vars");
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double value = 0;
  double max_residual = 0;   // worst violation of the original constraints
  int iterations = 0;
};

// Two-phase dense simplex. Anti-cycling falls back to Bland's rule after a
// run of degenerate pivots. Throws SolverError if the iteration cap is hit.
LpSolution solve(const LpProblem& problem);

}  // namespace rideshare
