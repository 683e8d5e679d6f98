#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "rideshare/model.hpp"
#include "rideshare/rng.hpp"

namespace rideshare {

// Empty-car routing decision hook. decide() is called when a car finishes a
// trip at `region`; the car itself is not counted anywhere in the state at
// that moment. Implementations must not mutate shared state (one policy
// object may serve parallel replications).
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int decide(int region, const SystemState& state, const NetworkParams& params,
                     double time, Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

using PolicyPtr = std::shared_ptr<const Policy>;

// Samples the drop region's row of a fixed routing matrix.
PolicyPtr policy_static(RoutingMatrix routing);

// Join-the-least-congested-region with threshold eta in [0, 1]; congestion of
// a region is its count of idle plus inbound empty cars per unit lambda.
PolicyPtr policy_jlcr(double eta);

// Shortest-wait heuristic: move to the region minimizing estimated time until
// the next pickup (travel plus projected queueing), stay when staying is no
// worse.
PolicyPtr policy_sw();

// Time-indexed static routing: uses the latest table entry at or before the
// decision time (the first entry before the table starts).
PolicyPtr policy_lookahead(std::vector<std::pair<double, RoutingMatrix>> table);

struct SimConfig {
  double horizon = 100;
  double warmup = -1;      // negative: 10% of horizon
  std::uint64_t seed = 1;
  int replications = 1;
  int n_override = -1;     // >=0: replaces the scenario car count (request rates scale too)
  std::optional<TravelTimeMode> travel_time_mode;  // overrides the scenario's mode
  double bucket_width = 0; // >0: tally requests/fulfillments per time bucket
  bool audit = false;      // recount car conservation after every event
};

struct BucketStat {
  double start = 0, end = 0;
  double requests = 0, fulfilled = 0;  // means over replications
  double fraction = 0;
};

struct SimMetrics {
  int replications = 1;
  Vec requests;            // per-region means over replications (post-warmup)
  Vec fulfilled;
  Vec fulfilled_fraction;
  Vec fraction_std;
  Vec busy_fraction;       // time-average of 1(E_ii > 0)
  Matrix avg_e, avg_f;     // time-averaged masses, scaled by 1/N
  double utility = 0;
  double utility_std = 0;
  Vec rep_utilities;
  std::vector<BucketStat> buckets;  // present when bucket_width > 0
};

// All cars idle, spread across regions proportionally to expected demand
// (largest-remainder rounding). Schedules use the first slot's rates.
SystemState initial_state_proportional(const NetworkParams& params);
SystemState initial_state_proportional(const Scenario& scenario, int n_override = -1);

// Event-driven simulation of the car-count chain. Replications run with seeds
// seed, seed+1, ... and are averaged; each replication is deterministic given
// its seed.
SimMetrics simulate(const Scenario& scenario, const Policy& policy, const SimConfig& config);
SimMetrics simulate(const Scenario& scenario, const Policy& policy, const SimConfig& config,
                    const SystemState& initial);

}  // namespace rideshare
