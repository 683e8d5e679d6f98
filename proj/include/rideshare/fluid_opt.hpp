#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rideshare/linprog.hpp"
#include "rideshare/model.hpp"

namespace rideshare {

// Optimal point of the relaxed fluid program: scaled car masses, per-region
// availabilities, the attained objective, and (after recovery) the static
// routing matrix realizing them.
struct FluidSolution {
  Matrix e_bar;
  Matrix f_bar;
  Vec a_bar;
  double value = 0;
  std::optional<RoutingMatrix> q_star;
};

// Variable layout shared by the builders: e(i,j), then f(i,j), then a(i).
struct FluidLpLayout {
  int regions = 0;
  int e(int i, int j) const { return i * regions + j; }
  int f(int i, int j) const { return regions * regions + i * regions + j; }
  int a(int i) const { return 2 * regions * regions + i; }
  int n_vars() const { return 2 * regions * regions + regions; }
};

// Relaxed linear program over (e, f, a): full-car Little's law, empty-flow
// caps, the two-sided availability bound, per-region flow balance, unit mass,
// and explicit nonnegativity rows for e and f; a lives in [0, 1] via bounds.
LpProblem build_relaxed_lp(const NetworkParams& params, const Matrix& rewards);

FluidSolution solve_fluid_optimum(const NetworkParams& params);
FluidSolution solve_fluid_optimum(const NetworkParams& params, const Matrix& rewards);

// Moves all idle mass onto the lowest-index fully-available region (a no-op
// when no region is fully available, in which case the diagonal must already
// vanish). Preserves the objective exactly.
FluidSolution apply_boundary_fixup(FluidSolution sol);

// Rebuilds the routing matrix from a fixed-up solution. A region that
// receives no full-car flow keeps its cars (row = identity).
RoutingMatrix recover_routing(const FluidSolution& sol, const NetworkParams& params);

double utility(const Vec& a_bar, const NetworkParams& params, const Matrix& rewards);
double utility(const Vec& a_bar, const NetworkParams& params);

// Piecewise-constant schedule averaged over [t, t+T]; the averaged objective
// coefficients are carried as explicit rewards. The window clamps to the last
// slot beyond the schedule end.
NetworkParams average_params(const Schedule& schedule, double t, double horizon);

LpProblem build_lookahead_lp(const Schedule& schedule, double t, double horizon);

// Solves the lookahead program on the delta-grid covering the schedule.
std::vector<std::pair<double, RoutingMatrix>> lookahead_table(const Schedule& schedule,
                                                              double delta, double horizon);

}  // namespace rideshare
