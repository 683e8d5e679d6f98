#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rideshare/matrix.hpp"

namespace rideshare {

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TravelTimeMode { exponential, deterministic };

// Static market primitives. lambda is the per-car request rate: region i sees
// passenger requests at rate n_cars * lambda[i]. Mean travel time from i to j
// is 1/mu(i,j).
struct NetworkParams {
  int regions = 0;
  int n_cars = 0;
  Vec lambda;
  Matrix mu;
  Matrix p;
  std::optional<Matrix> rewards;  // per-ride rewards c_ij

  double total_lambda() const {
    double s = 0;
    for (double v : lambda) s += v;
    return s;
  }

  // Explicit rewards when present, otherwise the availability weighting
  // c_ij = 1 / sum_k lambda_k under which the objective is the fraction of
  // fulfilled requests.
  Matrix effective_rewards() const {
    if (rewards) return *rewards;
    return Matrix(regions, 1.0 / total_lambda());
  }
};

// Row-stochastic empty-car routing policy.
struct RoutingMatrix {
  Matrix q;
};

struct ScheduleSlot {
  double start = 0;
  double end = 0;
  NetworkParams params;
};

// Piecewise-constant time-varying parameters. Slots are contiguous and share
// regions/n_cars; queries outside the covered window clamp to the edge slots.
struct Schedule {
  std::vector<ScheduleSlot> slots;
  TravelTimeMode travel_time_mode = TravelTimeMode::exponential;

  int regions() const { return slots.empty() ? 0 : slots.front().params.regions; }
  int n_cars() const { return slots.empty() ? 0 : slots.front().params.n_cars; }
  double start_time() const { return slots.front().start; }
  double end_time() const { return slots.back().end; }

  int slot_index_at(double t) const {
    for (std::size_t k = 0; k + 1 < slots.size(); ++k)
      if (t < slots[k].end) return static_cast<int>(k);
    return static_cast<int>(slots.size()) - 1;
  }
  const NetworkParams& params_at(double t) const { return slots[slot_index_at(t)].params; }
};

using Scenario = std::variant<NetworkParams, Schedule>;

int scenario_regions(const Scenario&);
int scenario_cars(const Scenario&);
const NetworkParams& scenario_first_params(const Scenario&);

// Integer car counts of the Markov chain. e_count(i,i) is the number of idle
// cars waiting at i; e_count(i,j) for i != j counts empty cars en route; f
// counts cars carrying a passenger.
struct SystemState {
  CountMatrix e_count;
  CountMatrix f_count;
  double time = 0;

  std::int64_t total_cars() const { return e_count.total() + f_count.total(); }
};

// Scaled continuum analog of SystemState, a point of the unit-mass simplex.
struct FluidState {
  Matrix e;
  Matrix f;

  double mass() const { return e.total() + f.total(); }
};

struct Violation {
  std::string field;
  std::string index;
  double residual = 0;
  std::string message;
};

std::vector<Violation> validate(const NetworkParams& params);
std::vector<Violation> validate(const RoutingMatrix& routing, int regions);
std::vector<Violation> validate(const Schedule& schedule);
std::vector<Violation> validate(const Scenario& scenario);

// Built-in scenarios: "two_region", "nine_region_didi" (both NetworkParams)
// and "five_region_city" (a three-slot evening Schedule).
Scenario builtin_scenario(const std::string& name);

// Multiplicative Rademacher noise on route demand rates lambda_i * p_ij and on
// mean travel times. Route rates are refactored into a renormalized p and a
// folded lambda so rows stay stochastic. Deterministic given the seed.
NetworkParams perturb(const NetworkParams& params, double sigma, std::uint64_t seed);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path,
                   const RoutingMatrix* routing = nullptr);
std::string scenario_to_json(const Scenario& scenario, const RoutingMatrix* routing = nullptr);
Scenario scenario_from_json(const std::string& text);

// Optional `q` field of a scenario file; also accepts a bare JSON matrix or an
// object holding only `q`.
std::optional<RoutingMatrix> routing_from_json(const std::string& text);
RoutingMatrix load_routing_matrix(const std::string& path);

}  // namespace rideshare
