#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rideshare/equilibrium.hpp"
#include "rideshare/model.hpp"

namespace rideshare {

struct FluidDerivative {
  Matrix de;
  Matrix df;
  Vec u_dot;  // regulator rates, nonzero only where the idle boundary binds
};

// Right-hand side of the fluid model with the boundary reflection: u_dot_i is
// zero while e_ii > 0 and absorbs the unmet share of lambda_i on the boundary,
// so e_ii never drifts negative and e_ii * u_dot_i = 0.
FluidDerivative derivative(const FluidState& state, const NetworkParams& params,
                           const RoutingMatrix& routing);

struct IntegrateOptions {
  double t_end = 100.0;
  double dt = 1e-3;
  int store_stride = 0;             // 0: pick a stride keeping ~2000 grid points
  const EquilibriumPoint* monitor = nullptr;
  double stop_distance = -1.0;      // >0: stop once distance_to_equilibrium drops below
};

struct FluidTrajectory {
  std::vector<double> times;
  std::vector<FluidState> states;
  std::vector<Vec> u;                  // cumulative regulator at the grid points
  std::vector<double> lyapunov_values; // filled when a monitor is given
  std::vector<double> distances;

  FluidState final_state;
  Vec final_u;
  double final_time = 0;

  double max_mass_drift = 0;        // worst per-step drift before renormalization
  double max_v_increase = 0;        // worst one-step Lyapunov increase (monitor)
  double final_distance = -1;       // distance at final_time (monitor)
  double complementarity = 0;       // sum of e_ii(t_k) * du_i over all steps
  long long steps = 0;
};

// Explicit Euler with exact boundary projection on the idle diagonal and mass
// renormalization each step. Throws SimulationError when dt is too large for
// the rates or the per-step drift exceeds 1e-6.
FluidTrajectory integrate(const FluidState& initial, const NetworkParams& params,
                          const RoutingMatrix& routing, const IntegrateOptions& options);

// Max-norm distance to the equilibrium set in closed form: the set varies
// only in the idle split among fully-available regions.
double distance_to_equilibrium(const FluidState& state, const EquilibriumPoint& point);

// Uniformly distributed point of the unit-mass simplex (Dirichlet(1,...,1)).
FluidState random_fluid_state(int regions, std::uint64_t seed);

}  // namespace rideshare
