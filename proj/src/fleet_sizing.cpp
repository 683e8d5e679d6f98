#include "rideshare/fleet_sizing.hpp"

#include <algorithm>
#include <cmath>

#include "rideshare/linprog.hpp"

namespace rideshare {

namespace {

// full-car inflow rate into each region at full availability
Vec full_inflow(const NetworkParams& params) {
  const int r = params.regions;
  Vec g(r, 0.0);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i) g[i] += params.lambda[k] * params.p(k, i);
  return g;
}

bool triangle_inequality_holds(const NetworkParams& params) {
  const int r = params.regions;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        if (i == j || j == k || i == k) continue;
        if (1.0 / params.mu(i, k) > 1.0 / params.mu(i, j) + 1.0 / params.mu(j, k) + 1e-12)
          return false;
      }
  return true;
}

Matrix empty_masses(const NetworkParams& params, const Matrix& q, const Vec& g) {
  const int r = params.regions;
  Matrix e(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (j != i) e(i, j) = q(i, j) * g[i] / params.mu(i, j);
  return e;
}

}  // namespace

RoutingMatrix backhaul_routing(const NetworkParams& params) {
  const int r = params.regions;
  Vec g = full_inflow(params);
  RoutingMatrix routing{Matrix(r)};
  for (int i = 0; i < r; ++i) {
    if (g[i] <= 0)
      throw SolverError("backhaul_routing: region receives no passenger flow");
    for (int j = 0; j < r; ++j)
      routing.q(i, j) = params.lambda[j] * params.p(j, i) / g[i];
  }
  return routing;
}

FleetSizingResult min_fleet(const NetworkParams& params) {
  const int r = params.regions;
  Vec g = full_inflow(params);

  FleetSizingResult result;
  result.f_kappa = Matrix(r);
  double full_mass = 0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      result.f_kappa(i, j) = params.lambda[i] * params.p(i, j) / params.mu(i, j);
      full_mass += result.f_kappa(i, j);
    }

  // variables: q(i,j) row-major, then off-diagonal e(i,j)
  auto qv = [&](int i, int j) { return i * r + j; };
  std::vector<int> ev(r * r, -1);
  int next = r * r;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (i != j) ev[i * r + j] = next++;
  LpProblem lp(next);

  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (i != j) lp.objective[ev[i * r + j]] = -1.0;  // minimize empty mass

  // mu_ij e_ij = q_ij * g_i for j != i
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      Vec row(lp.n_vars, 0.0);
      row[ev[i * r + j]] = params.mu(i, j);
      row[qv(i, j)] = -g[i];
      lp.add_constraint(std::move(row), Relation::eq, 0.0);
    }
  // lambda_i = sum_{k != i} mu_ki e_ki + q_ii g_i
  for (int i = 0; i < r; ++i) {
    Vec row(lp.n_vars, 0.0);
    for (int k = 0; k < r; ++k)
      if (k != i) row[ev[k * r + i]] = params.mu(k, i);
    row[qv(i, i)] = g[i];
    lp.add_constraint(std::move(row), Relation::eq, params.lambda[i]);
  }
  // rows of q are probability distributions
  for (int i = 0; i < r; ++i) {
    Vec row(lp.n_vars, 0.0);
    for (int j = 0; j < r; ++j) row[qv(i, j)] = 1.0;
    lp.add_constraint(std::move(row), Relation::eq, 1.0);
  }

  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::optimal)
    throw SolverError("fleet sizing LP did not solve (the backhaul solution is feasible)");

  result.q_kappa.q = Matrix(r);
  for (int i = 0; i < r; ++i) {
    double sum = 0;
    for (int j = 0; j < r; ++j) {
      double v = std::max(0.0, sol.x[qv(i, j)]);
      result.q_kappa.q(i, j) = v;
      sum += v;
    }
    for (int j = 0; j < r; ++j) result.q_kappa.q(i, j) /= sum;
  }
  result.e_kappa = empty_masses(params, result.q_kappa.q, g);
  result.kappa = full_mass + result.e_kappa.total();
  result.triangle_ok = triangle_inequality_holds(params);
  return result;
}

FleetSizingResult repair_diagonal(const FleetSizingResult& result, const NetworkParams& params) {
  if (!result.triangle_ok) return result;
  const int r = params.regions;
  Vec g = full_inflow(params);

  FleetSizingResult out = result;
  Matrix& q = out.q_kappa.q;
  for (int i = 0; i < r; ++i) {
    if (q(i, i) > 1e-12) continue;
    // donor region l sends empty cars to i; i itself sends cars somewhere (m)
    int donor = -1, m = -1;
    for (int l = 0; l < r && donor < 0; ++l)
      if (l != i && out.e_kappa(l, i) > 1e-12) donor = l;
    for (int k = 0; k < r && m < 0; ++k)
      if (k != i && q(i, k) > 1e-12) m = k;
    if (donor < 0 || m < 0)
      throw SolverError("repair_diagonal: no feasible shift (unexpected for a valid optimum)");
    double ratio = g[donor] / g[i];
    double cap = std::min(q(donor, i), q(i, m) / ratio);
    double eps = 0.5 * cap;
    q(donor, i) -= eps;
    q(donor, m) += eps;
    q(i, m) -= eps * ratio;
    q(i, i) += eps * ratio;
    out.e_kappa = empty_masses(params, q, g);
  }
  double kappa = out.f_kappa.total() + out.e_kappa.total();
  if (kappa > result.kappa + 1e-9)
    throw SolverError("repair_diagonal: objective increased under the triangle inequality");
  out.kappa = kappa;
  return out;
}

}  // namespace rideshare
