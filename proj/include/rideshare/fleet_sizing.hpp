#pragma once

#include "rideshare/model.hpp"

namespace rideshare {

// Minimum fluid mass needed for every region to reach full availability,
// with a routing matrix attaining it. kappa > 1 flags undersupply: demand can
// only be met after scaling lambda down by kappa (equivalently, growing the
// fleet by that factor).
struct FleetSizingResult {
  double kappa = 0;
  RoutingMatrix q_kappa;
  Matrix e_kappa;        // empty-travel masses (diagonal identically zero)
  Matrix f_kappa;        // full-car masses, fixed by demand
  bool triangle_ok = false;  // mean travel times satisfy the triangle inequality
};

FleetSizingResult min_fleet(const NetworkParams& params);

// Shifts probability mass along the proof's epsilon-rectangle until every
// q_ii is strictly positive. Requires the triangle inequality (checked in
// min_fleet); returns the input unchanged when it fails, and never increases
// kappa when it holds.
FleetSizingResult repair_diagonal(const FleetSizingResult& result, const NetworkParams& params);

// Feasible starting point: every car that carries a passenger into a region
// drives back where it came from.
RoutingMatrix backhaul_routing(const NetworkParams& params);

}  // namespace rideshare
