#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rideshare/model.hpp"

namespace rideshare {

// Closed-network view of the chain under a static routing matrix: one
// single-server station per region (idle cars, service rate N lambda_i), an
// infinite-server station per full-car leg and per empty-car leg.
struct Station {
  enum class Kind { single_server, infinite_server };
  enum class Role { idle, full_travel, empty_travel };
  Kind kind = Kind::infinite_server;
  Role role = Role::idle;
  int i = 0, j = 0;       // leg endpoints; idle stations use i only
  double rate = 0;        // per-server service rate
  double visit_ratio = 0; // normalized so the first kept idle station has 1

  std::string label() const;
};

struct StationLayout {
  std::vector<Station> stations;          // zero-visit stations pruned
  std::vector<int> idle_station_of;       // region -> station index, -1 if pruned
  double flow_balance_residual = 0;       // check of v = R^T v on the kept set
};

StationLayout station_layout(const NetworkParams& params, const RoutingMatrix& routing);

struct MvaResult {
  Vec availability;     // utilization of each region's idle station
  Vec mean_queue;       // L_j(N) per kept station
  double throughput = 0;
};

// Exact mean value analysis recursion up to n_cars customers.
MvaResult analyze(const NetworkParams& params, const RoutingMatrix& routing, int n_cars);

// analyze() at each population in n_list. Populations are separate networks
// here because the idle service rates scale with the car count.
std::vector<std::pair<int, Vec>> availability_curve(const NetworkParams& params,
                                                    const RoutingMatrix& routing,
                                                    const std::vector<int>& n_list);

}  // namespace rideshare
