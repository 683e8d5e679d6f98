#include "rideshare/fluid_opt.hpp"

#include <algorithm>
#include <cmath>

namespace rideshare {

namespace {

constexpr double kSaturatedTol = 1e-9;

}  // namespace

LpProblem build_relaxed_lp(const NetworkParams& params, const Matrix& rewards) {
  const int r = params.regions;
  FluidLpLayout idx{r};
  LpProblem lp(idx.n_vars());

  for (int i = 0; i < r; ++i) {
    double coeff = 0;
    for (int j = 0; j < r; ++j) coeff += params.lambda[i] * params.p(i, j) * rewards(i, j);
    lp.objective[idx.a(i)] = coeff;
    lp.upper[idx.a(i)] = 1.0;
  }

  // full-car Little's law: mu_ij f_ij - lambda_i p_ij a_i = 0
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Vec row(lp.n_vars, 0.0);
      row[idx.f(i, j)] = params.mu(i, j);
      row[idx.a(i)] = -params.lambda[i] * params.p(i, j);
      lp.add_constraint(std::move(row), Relation::eq, 0.0);
    }

  // empty-flow caps: mu_ij e_ij <= sum_k mu_ki f_ki, j != i
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (j == i) continue;
      Vec row(lp.n_vars, 0.0);
      row[idx.e(i, j)] = params.mu(i, j);
      for (int k = 0; k < r; ++k) row[idx.f(k, i)] -= params.mu(k, i);
      lp.add_constraint(std::move(row), Relation::le, 0.0);
    }

  // two-sided bound: sum_{k!=i} mu_ki e_ki <= lambda_i a_i <= ... + sum_k mu_ki f_ki
  for (int i = 0; i < r; ++i) {
    Vec low(lp.n_vars, 0.0);
    for (int k = 0; k < r; ++k)
      if (k != i) low[idx.e(k, i)] = params.mu(k, i);
    low[idx.a(i)] = -params.lambda[i];
    lp.add_constraint(std::move(low), Relation::le, 0.0);

    Vec high(lp.n_vars, 0.0);
    high[idx.a(i)] = params.lambda[i];
    for (int k = 0; k < r; ++k) {
      if (k != i) high[idx.e(k, i)] -= params.mu(k, i);
      high[idx.f(k, i)] -= params.mu(k, i);
    }
    lp.add_constraint(std::move(high), Relation::le, 0.0);
  }

  // flow balance: lambda_i a_i + sum_{j!=i} mu_ij e_ij = inflow_i
  for (int i = 0; i < r; ++i) {
    Vec row(lp.n_vars, 0.0);
    row[idx.a(i)] = params.lambda[i];
    for (int j = 0; j < r; ++j)
      if (j != i) row[idx.e(i, j)] = params.mu(i, j);
    for (int k = 0; k < r; ++k) {
      if (k != i) row[idx.e(k, i)] -= params.mu(k, i);
      row[idx.f(k, i)] -= params.mu(k, i);
    }
    lp.add_constraint(std::move(row), Relation::eq, 0.0);
  }

  // unit mass
  {
    Vec row(lp.n_vars, 0.0);
    for (int k = 0; k < 2 * r * r; ++k) row[k] = 1.0;
    lp.add_constraint(std::move(row), Relation::eq, 1.0);
  }

  // nonnegativity of the masses (also present as variable bounds)
  for (int k = 0; k < 2 * r * r; ++k) {
    Vec row(lp.n_vars, 0.0);
    row[k] = 1.0;
    lp.add_constraint(std::move(row), Relation::ge, 0.0);
  }

  return lp;
}

FluidSolution apply_boundary_fixup(FluidSolution sol) {
  const int r = static_cast<int>(sol.a_bar.size());
  int target = -1;
  for (int i = 0; i < r; ++i)
    if (sol.a_bar[i] >= 1.0 - kSaturatedTol) { target = i; break; }
  if (target < 0) {
    for (int i = 0; i < r; ++i)
      if (sol.e_bar(i, i) > 1e-8)
        throw std::logic_error(
            "boundary fixup: idle mass at a region with availability < 1 "
            "(optimum should not produce this)");
    return sol;
  }
  double idle = 0;
  for (int i = 0; i < r; ++i) {
    idle += sol.e_bar(i, i);
    sol.e_bar(i, i) = 0;
  }
  sol.e_bar(target, target) = idle;
  return sol;
}

RoutingMatrix recover_routing(const FluidSolution& sol, const NetworkParams& params) {
  const int r = params.regions;
  RoutingMatrix routing{Matrix(r)};
  for (int i = 0; i < r; ++i) {
    double inflow = 0;
    for (int k = 0; k < r; ++k) inflow += params.mu(k, i) * sol.f_bar(k, i);
    if (inflow <= 1e-14) {
      routing.q(i, i) = 1.0;  // region sees no full cars; routing from it is moot
      continue;
    }
    double empty_in = 0;
    for (int k = 0; k < r; ++k)
      if (k != i) empty_in += params.mu(k, i) * sol.e_bar(k, i);
    for (int j = 0; j < r; ++j)
      if (j != i) routing.q(i, j) = params.mu(i, j) * sol.e_bar(i, j) / inflow;
    routing.q(i, i) = (params.lambda[i] * sol.a_bar[i] - empty_in) / inflow;

    double sum = 0;
    for (int j = 0; j < r; ++j) {
      if (routing.q(i, j) < 0) {
        if (routing.q(i, j) < -1e-6)
          throw SolverError("recover_routing: negative probability beyond tolerance");
        routing.q(i, j) = 0;
      }
      sum += routing.q(i, j);
    }
    if (std::fabs(sum - 1.0) > 1e-6)
      throw SolverError("recover_routing: row sum off by more than float drift");
    for (int j = 0; j < r; ++j) routing.q(i, j) /= sum;
  }
  return routing;
}

FluidSolution solve_fluid_optimum(const NetworkParams& params, const Matrix& rewards) {
  const int r = params.regions;
  FluidLpLayout idx{r};
  LpProblem lp = build_relaxed_lp(params, rewards);
  LpSolution lps = solve(lp);
  if (lps.status != LpStatus::optimal)
    throw SolverError("relaxed fluid LP did not solve to optimality (internal error)");

  FluidSolution sol;
  sol.e_bar = Matrix(r);
  sol.f_bar = Matrix(r);
  sol.a_bar.assign(r, 0.0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      sol.e_bar(i, j) = std::max(0.0, lps.x[idx.e(i, j)]);
      sol.f_bar(i, j) = std::max(0.0, lps.x[idx.f(i, j)]);
    }
    sol.a_bar[i] = std::clamp(lps.x[idx.a(i)], 0.0, 1.0);
  }
  sol.value = lps.value;
  sol = apply_boundary_fixup(std::move(sol));
  sol.q_star = recover_routing(sol, params);
  return sol;
}

FluidSolution solve_fluid_optimum(const NetworkParams& params) {
  return solve_fluid_optimum(params, params.effective_rewards());
}

double utility(const Vec& a_bar, const NetworkParams& params, const Matrix& rewards) {
  double u = 0;
  for (int i = 0; i < params.regions; ++i)
    for (int j = 0; j < params.regions; ++j)
      u += a_bar[i] * params.lambda[i] * params.p(i, j) * rewards(i, j);
  return u;
}

double utility(const Vec& a_bar, const NetworkParams& params) {
  return utility(a_bar, params, params.effective_rewards());
}

NetworkParams average_params(const Schedule& schedule, double t, double horizon) {
  if (!(horizon > 0)) throw std::invalid_argument("average_params: horizon must be positive");
  const int r = schedule.regions();

  Matrix rate(r), obj(r), mu(r);
  double cursor = t;
  const double end = t + horizon;
  while (cursor < end - 1e-12) {
    int k = schedule.slot_index_at(cursor);
    const auto& slot = schedule.slots[k];
    double stop = (k + 1 < static_cast<int>(schedule.slots.size())) ? std::min(end, slot.end)
                                                                    : end;  // last slot extends
    double w = (stop - cursor) / horizon;
    const NetworkParams& p = slot.params;
    Matrix c = p.effective_rewards();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        double d = p.lambda[i] * p.p(i, j);
        rate(i, j) += w * d;
        obj(i, j) += w * d * c(i, j);
        mu(i, j) += w * p.mu(i, j);
      }
    cursor = stop;
  }

  NetworkParams out;
  out.regions = r;
  out.n_cars = schedule.n_cars();
  out.lambda.assign(r, 0.0);
  out.p = Matrix(r);
  out.mu = mu;
  Matrix rewards(r);
  for (int i = 0; i < r; ++i) {
    double sum = 0;
    for (int j = 0; j < r; ++j) sum += rate(i, j);
    out.lambda[i] = sum;
    for (int j = 0; j < r; ++j) {
      out.p(i, j) = rate(i, j) / sum;
      rewards(i, j) = rate(i, j) > 0 ? obj(i, j) / rate(i, j) : 0.0;
    }
  }
  out.rewards = rewards;
  return out;
}

LpProblem build_lookahead_lp(const Schedule& schedule, double t, double horizon) {
  NetworkParams avg = average_params(schedule, t, horizon);
  return build_relaxed_lp(avg, *avg.rewards);
}

std::vector<std::pair<double, RoutingMatrix>> lookahead_table(const Schedule& schedule,
                                                              double delta, double horizon) {
  if (!(delta > 0)) throw std::invalid_argument("lookahead_table: delta must be positive");
  std::vector<std::pair<double, RoutingMatrix>> table;
  const double start = schedule.start_time();
  const double end = schedule.end_time();
  for (int k = 0;; ++k) {
    double t = start + k * delta;
    if (t >= end - 1e-12) break;
    NetworkParams avg = average_params(schedule, t, horizon);
    FluidSolution sol = solve_fluid_optimum(avg, *avg.rewards);
    table.emplace_back(t, *sol.q_star);
  }
  return table;
}

}  // namespace rideshare
