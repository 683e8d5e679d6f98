#include "rideshare/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rideshare/linalg.hpp"

namespace rideshare {

Matrix routing_chain(const Matrix& p, const Matrix& q) {
  const int r = p.size();
  Matrix b(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double s = 0;
      for (int l = 0; l < r; ++l) s += p(j, l) * q(l, i);
      b(i, j) = s;
    }
  return b;
}

EquilibriumPoint equilibrium_point(const NetworkParams& params, const RoutingMatrix& routing) {
  const int r = params.regions;
  const Matrix& q = routing.q;
  EquilibriumPoint point;
  point.chain = routing_chain(params.p, q);

  // (I - B) Lambda a = 0 means x = Lambda a is stationary for the single-car
  // region chain PQ (row-stochastic); B is its transpose.
  Matrix region_chain(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) region_chain(i, j) = point.chain(j, i);
  Vec x = chain_stationary(region_chain);

  Vec a_dir(r);
  double a_max = 0;
  for (int i = 0; i < r; ++i) {
    a_dir[i] = x[i] / params.lambda[i];
    a_max = std::max(a_max, a_dir[i]);
  }
  for (int i = 0; i < r; ++i) a_dir[i] /= a_max;

  // mass per unit availability: full-car mass plus empty-travel mass routed
  // out of regions fed by passenger flow originating at k
  Vec mass_coeff(r, 0.0);
  for (int k = 0; k < r; ++k) {
    double s = 0;
    for (int j = 0; j < r; ++j) s += params.p(k, j) / params.mu(k, j);
    for (int i = 0; i < r; ++i) {
      double empty = 0;
      for (int j = 0; j < r; ++j)
        if (j != i) empty += q(i, j) / params.mu(i, j);
      s += params.p(k, i) * empty;
    }
    mass_coeff[k] = params.lambda[k] * s;
  }
  double budget = 0;
  for (int k = 0; k < r; ++k) budget += mass_coeff[k] * a_dir[k];
  double scale = std::min(1.0 / budget, 1.0);

  point.a_bar.assign(r, 0.0);
  for (int i = 0; i < r; ++i) point.a_bar[i] = scale * a_dir[i];

  point.f_bar = Matrix(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      point.f_bar(i, j) = params.lambda[i] * params.p(i, j) * point.a_bar[i] / params.mu(i, j);

  point.e_bar = Matrix(r);
  for (int i = 0; i < r; ++i) {
    double inflow = 0;
    for (int k = 0; k < r; ++k) inflow += params.mu(k, i) * point.f_bar(k, i);
    for (int j = 0; j < r; ++j)
      if (j != i) point.e_bar(i, j) = q(i, j) * inflow / params.mu(i, j);
  }

  point.m_bar = std::max(0.0, 1.0 - scale * budget);
  if (point.m_bar > 0) {
    double sat_lambda = 0;
    for (int i = 0; i < r; ++i)
      if (point.a_bar[i] >= 1.0 - kSaturationTol) sat_lambda += params.lambda[i];
    if (sat_lambda <= 0)
      throw std::runtime_error("equilibrium_point: leftover idle mass with no saturated region");
    for (int i = 0; i < r; ++i)
      if (point.a_bar[i] >= 1.0 - kSaturationTol)
        point.e_bar(i, i) = point.m_bar * params.lambda[i] / sat_lambda;
  }
  return point;
}

double residuals(const EquilibriumPoint& point, const NetworkParams& params,
                 const RoutingMatrix& routing) {
  const int r = params.regions;
  const Matrix& q = routing.q;
  double worst = 0;
  auto track = [&](double v) { worst = std::max(worst, std::fabs(v)); };

  for (int i = 0; i < r; ++i) {
    double inflow = 0;
    for (int k = 0; k < r; ++k) inflow += params.mu(k, i) * point.f_bar(k, i);
    double empty_in = 0;
    for (int k = 0; k < r; ++k)
      if (k != i) empty_in += params.mu(k, i) * point.e_bar(k, i);

    for (int j = 0; j < r; ++j) {
      track(params.lambda[i] * params.p(i, j) * point.a_bar[i] -
            params.mu(i, j) * point.f_bar(i, j));
      if (j != i) track(params.mu(i, j) * point.e_bar(i, j) - q(i, j) * inflow);
    }
    track(params.lambda[i] * point.a_bar[i] - empty_in - q(i, i) * inflow);
    track((1.0 - point.a_bar[i]) * point.e_bar(i, i));
    track(std::max(0.0, point.a_bar[i] - 1.0));
    track(std::max(0.0, -point.a_bar[i]));
  }
  track(point.e_bar.total() + point.f_bar.total() - 1.0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      track(std::max(0.0, -point.e_bar(i, j)));
      track(std::max(0.0, -point.f_bar(i, j)));
    }
  return worst;
}

double lyapunov(const EquilibriumPoint& point, const FluidState& state) {
  const int r = state.e.size();
  double v = 0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) v += std::fabs(state.f(i, j) - point.f_bar(i, j));
  double saturated_idle = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j)
      if (j != i) v += std::fabs(state.e(i, j) - point.e_bar(i, j));
    if (point.a_bar[i] < 1.0 - kSaturationTol)
      v += state.e(i, i);
    else
      saturated_idle += state.e(i, i);
  }
  v += std::fabs(point.m_bar - saturated_idle);
  return v;
}

}  // namespace rideshare
