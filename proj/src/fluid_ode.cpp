#include "rideshare/fluid_ode.hpp"

#include <algorithm>
#include <cmath>

#include "rideshare/rng.hpp"

namespace rideshare {

namespace {

constexpr double kBoundaryTol = 1e-10;

struct DerivScratch {
  Vec full_inflow;   // g_i = sum_k mu_ki f_ki
  Vec idle_inflow;   // sum_{j!=i} mu_ji e_ji + q_ii g_i
};

void derivative_into(const FluidState& state, const NetworkParams& params, const Matrix& q,
                     DerivScratch& scratch, FluidDerivative& out) {
  const int r = params.regions;
  scratch.full_inflow.assign(r, 0.0);
  scratch.idle_inflow.assign(r, 0.0);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i) scratch.full_inflow[i] += params.mu(k, i) * state.f(k, i);
  for (int i = 0; i < r; ++i) {
    double s = q(i, i) * scratch.full_inflow[i];
    for (int j = 0; j < r; ++j)
      if (j != i) s += params.mu(j, i) * state.e(j, i);
    scratch.idle_inflow[i] = s;
  }

  for (int i = 0; i < r; ++i) {
    if (state.e(i, i) > kBoundaryTol)
      out.u_dot[i] = 0.0;
    else
      out.u_dot[i] = std::max(0.0, 1.0 - scratch.idle_inflow[i] / params.lambda[i]);
  }

  for (int i = 0; i < r; ++i) {
    double serving = params.lambda[i] * (1.0 - out.u_dot[i]);
    for (int j = 0; j < r; ++j) {
      out.df(i, j) = serving * params.p(i, j) - params.mu(i, j) * state.f(i, j);
      if (j != i)
        out.de(i, j) = -params.mu(i, j) * state.e(i, j) + q(i, j) * scratch.full_inflow[i];
    }
    out.de(i, i) = -serving + scratch.idle_inflow[i];
  }
}

}  // namespace

FluidDerivative derivative(const FluidState& state, const NetworkParams& params,
                           const RoutingMatrix& routing) {
  const int r = params.regions;
  FluidDerivative out{Matrix(r), Matrix(r), Vec(r, 0.0)};
  DerivScratch scratch;
  derivative_into(state, params, routing.q, scratch, out);
  return out;
}

double distance_to_equilibrium(const FluidState& state, const EquilibriumPoint& point) {
  const int r = state.e.size();
  double d = 0;
  double saturated_idle = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      d = std::max(d, std::fabs(state.f(i, j) - point.f_bar(i, j)));
      if (j != i) d = std::max(d, std::fabs(state.e(i, j) - point.e_bar(i, j)));
    }
    if (point.a_bar[i] < 1.0 - kSaturationTol)
      d = std::max(d, state.e(i, i));
    else
      saturated_idle += state.e(i, i);
  }
  d = std::max(d, std::fabs(saturated_idle - point.m_bar));
  return d;
}

FluidTrajectory integrate(const FluidState& initial, const NetworkParams& params,
                          const RoutingMatrix& routing, const IntegrateOptions& options) {
  const int r = params.regions;
  if (!(options.dt > 0)) throw std::invalid_argument("integrate: dt must be positive");
  double max_rate = 0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) max_rate = std::max(max_rate, params.mu(i, j));
  if (options.dt * max_rate >= 1.0)
    throw SimulationError("integrate: dt too large for travel rates (dt * max mu >= 1)");

  const long long total_steps =
      static_cast<long long>(std::ceil(options.t_end / options.dt - 1e-9));
  int stride = options.store_stride;
  if (stride <= 0) stride = static_cast<int>(std::max(1LL, total_steps / 2000));

  FluidTrajectory traj;
  FluidState state = initial;
  Vec u(r, 0.0);
  FluidDerivative der{Matrix(r), Matrix(r), Vec(r, 0.0)};
  DerivScratch scratch;

  double v_prev = options.monitor ? lyapunov(*options.monitor, state) : 0.0;

  auto store = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.u.push_back(u);
    if (options.monitor) {
      traj.lyapunov_values.push_back(lyapunov(*options.monitor, state));
      traj.distances.push_back(distance_to_equilibrium(state, *options.monitor));
    }
  };
  store(0.0);

  const double dt = options.dt;
  long long step = 0;
  double t = 0;
  for (; step < total_steps; ++step) {
    derivative_into(state, params, routing.q, scratch, der);

    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        state.f(i, j) += dt * der.df(i, j);
        if (j != i) state.e(i, j) += dt * der.de(i, j);
      }
    }
    // idle diagonal with exact projection: when the Euler step overdraws a
    // boundary coordinate, the deficit becomes extra regulation and the
    // corresponding passenger outflow into f is taken back
    for (int i = 0; i < r; ++i) {
      double e_new = state.e(i, i) + dt * der.de(i, i);
      double du = der.u_dot[i] * dt;
      if (e_new < 0) {
        double deficit = -e_new / params.lambda[i];
        du += deficit;
        for (int j = 0; j < r; ++j)
          state.f(i, j) -= params.lambda[i] * params.p(i, j) * deficit;
        e_new = 0;
      }
      traj.complementarity += state.e(i, i) * du;
      state.e(i, i) = e_new;
      u[i] += du;
    }

    double clipped = 0;
    for (auto& v : state.e.data())
      if (v < 0) { clipped -= v; v = 0; }
    for (auto& v : state.f.data())
      if (v < 0) { clipped -= v; v = 0; }
    double mass = state.mass();
    double drift = std::max(clipped, std::fabs(mass - 1.0));
    traj.max_mass_drift = std::max(traj.max_mass_drift, drift);
    if (drift > 1e-6)
      throw SimulationError("integrate: mass drift " + std::to_string(drift) +
                            " in one step; dt too large");
    double inv = 1.0 / mass;
    for (auto& v : state.e.data()) v *= inv;
    for (auto& v : state.f.data()) v *= inv;

    t = (step + 1) * dt;
    if (options.monitor) {
      double v_now = lyapunov(*options.monitor, state);
      traj.max_v_increase = std::max(traj.max_v_increase, v_now - v_prev);
      v_prev = v_now;
    }
    if ((step + 1) % stride == 0 || step + 1 == total_steps) store(t);
    if (options.monitor && options.stop_distance > 0 &&
        distance_to_equilibrium(state, *options.monitor) < options.stop_distance)
      break;
  }

  traj.steps = step < total_steps ? step + 1 : total_steps;
  traj.final_state = state;
  traj.final_u = u;
  traj.final_time = traj.steps * dt;
  if (traj.times.empty() || traj.times.back() != traj.final_time) store(traj.final_time);
  if (options.monitor) traj.final_distance = distance_to_equilibrium(state, *options.monitor);
  return traj;
}

FluidState random_fluid_state(int regions, std::uint64_t seed) {
  Rng rng(seed);
  FluidState state{Matrix(regions), Matrix(regions)};
  double total = 0;
  for (auto& v : state.e.data()) { v = rng.exponential(1.0); total += v; }
  for (auto& v : state.f.data()) { v = rng.exponential(1.0); total += v; }
  for (auto& v : state.e.data()) v /= total;
  for (auto& v : state.f.data()) v /= total;
  return state;
}

}  // namespace rideshare
