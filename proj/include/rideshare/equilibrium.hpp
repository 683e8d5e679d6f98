#pragma once

#include "rideshare/model.hpp"

namespace rideshare {

// Stationary point of the fluid model for a fixed static routing matrix.
// a_bar is unique; the idle diagonal is unique except for how the total m_bar
// splits among fully-available regions (here: proportional to lambda).
struct EquilibriumPoint {
  Vec a_bar;
  Matrix e_bar;
  Matrix f_bar;
  double m_bar = 0;   // idle mass parked at fully-available regions
  Matrix chain;       // column-stochastic single-car region chain B
};

// B(i,j) = sum_l p(j,l) q(l,i): probability that a car serving a passenger at
// region j next waits at region i. Columns sum to one.
Matrix routing_chain(const Matrix& p, const Matrix& q);

// Constructive equilibrium: solves (I - B) Lambda a = 0 for the availability
// direction, scales it onto [0,1]^r against the unit-mass budget, and fills in
// the car masses. Requires the region chain to be irreducible.
EquilibriumPoint equilibrium_point(const NetworkParams& params, const RoutingMatrix& routing);

// Max-norm residual of the stationarity equations at the point.
double residuals(const EquilibriumPoint& point, const NetworkParams& params,
                 const RoutingMatrix& routing);

// L1 distance to the equilibrium set, insensitive to the idle split among
// fully-available regions. Zero exactly on the set.
double lyapunov(const EquilibriumPoint& point, const FluidState& state);

// Tolerance below which an availability counts as saturated (a_i = 1).
inline constexpr double kSaturationTol = 1e-9;

}  // namespace rideshare
