#include "rideshare/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <queue>
#include <thread>

namespace rideshare {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int pick_min(const Vec& values, int skip, Rng& rng, double& best_out) {
  // argmin over indices != skip, ties uniform
  double best = kInf;
  int candidates[64];
  int n_cand = 0;
  for (int j = 0; j < static_cast<int>(values.size()); ++j) {
    if (j == skip) continue;
    double v = values[j];
    if (v < best - 1e-12) {
      best = v;
      candidates[0] = j;
      n_cand = 1;
    } else if (v <= best + 1e-12 * (1.0 + std::fabs(best))) {
      if (n_cand < 64) candidates[n_cand++] = j;
    }
  }
  best_out = best;
  return n_cand == 1 ? candidates[0] : candidates[rng.uniform_int(n_cand)];
}

class StaticPolicy : public Policy {
 public:
  explicit StaticPolicy(RoutingMatrix routing) : routing_(std::move(routing)) {
    auto violations = validate(routing_, routing_.q.size());
    if (!violations.empty())
      throw std::invalid_argument("policy_static: " + violations.front().message);
  }
  int decide(int region, const SystemState&, const NetworkParams&, double, Rng& rng) const override {
    return rng.categorical(routing_.q, region);
  }
  std::string name() const override { return "static"; }

 private:
  RoutingMatrix routing_;
};

class JlcrPolicy : public Policy {
 public:
  explicit JlcrPolicy(double eta) : eta_(eta) {
    if (eta < 0 || eta > 1) throw std::invalid_argument("policy_jlcr: eta must be in [0, 1]");
  }
  int decide(int region, const SystemState& state, const NetworkParams& params, double,
             Rng& rng) const override {
    const int r = params.regions;
    Vec congestion(r);
    for (int j = 0; j < r; ++j)
      congestion[j] = static_cast<double>(state.e_count.col_sum(j)) / params.lambda[j];
    double best;
    int argmin = pick_min(congestion, region, rng, best);
    if ((1.0 - eta_) * congestion[region] <= best) return region;
    return argmin;
  }
  std::string name() const override { return "jlcr:" + std::to_string(eta_); }

 private:
  double eta_;
};

class ShortestWaitPolicy : public Policy {
 public:
  int decide(int region, const SystemState& state, const NetworkParams& params, double,
             Rng& rng) const override {
    const int r = params.regions;
    const double n = params.n_cars;
    Vec wait(r, kInf);
    for (int j = 0; j < r; ++j) {
      if (j == region) continue;
      double travel = 1.0 / params.mu(region, j);
      double inbound = 0;
      for (int k = 0; k < r; ++k)
        if (k != j) inbound += params.mu(k, j) * static_cast<double>(state.e_count(k, j));
      double backlog = static_cast<double>(state.e_count(j, j)) + travel * inbound -
                       n * params.lambda[j] * travel;
      wait[j] = travel + std::max(0.0, backlog) / (n * params.lambda[j]);
    }
    double best;
    int argmin = pick_min(wait, region, rng, best);
    double stay = static_cast<double>(state.e_count(region, region)) / (n * params.lambda[region]);
    if (stay <= best) return region;
    return argmin;
  }
  std::string name() const override { return "sw"; }
};

class LookaheadPolicy : public Policy {
 public:
  explicit LookaheadPolicy(std::vector<std::pair<double, RoutingMatrix>> table)
      : table_(std::move(table)) {
    if (table_.empty()) throw std::invalid_argument("policy_lookahead: empty table");
    for (std::size_t k = 1; k < table_.size(); ++k)
      if (!(table_[k - 1].first < table_[k].first))
        throw std::invalid_argument("policy_lookahead: table times must increase");
  }
  int decide(int region, const SystemState&, const NetworkParams&, double time,
             Rng& rng) const override {
    std::size_t lo = 0, hi = table_.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (table_[mid].first <= time) lo = mid;
      else hi = mid;
    }
    return rng.categorical(table_[lo].second.q, region);
  }
  std::string name() const override { return "lookahead"; }

 private:
  std::vector<std::pair<double, RoutingMatrix>> table_;
};

}  // namespace

PolicyPtr policy_static(RoutingMatrix routing) {
  return std::make_shared<StaticPolicy>(std::move(routing));
}
PolicyPtr policy_jlcr(double eta) { return std::make_shared<JlcrPolicy>(eta); }
PolicyPtr policy_sw() { return std::make_shared<ShortestWaitPolicy>(); }
PolicyPtr policy_lookahead(std::vector<std::pair<double, RoutingMatrix>> table) {
  return std::make_shared<LookaheadPolicy>(std::move(table));
}

SystemState initial_state_proportional(const NetworkParams& params) {
  const int r = params.regions;
  const int n = params.n_cars;
  double total = params.total_lambda();
  std::vector<long long> count(r, 0);
  std::vector<std::pair<double, int>> remainder(r);
  long long assigned = 0;
  for (int i = 0; i < r; ++i) {
    double quota = n * params.lambda[i] / total;
    count[i] = static_cast<long long>(std::floor(quota));
    assigned += count[i];
    remainder[i] = {quota - std::floor(quota), i};
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long long k = 0; k < n - assigned; ++k) ++count[remainder[k % r].second];

  SystemState state{CountMatrix(r), CountMatrix(r), 0.0};
  for (int i = 0; i < r; ++i) state.e_count(i, i) = count[i];
  return state;
}

SystemState initial_state_proportional(const Scenario& scenario, int n_override) {
  NetworkParams params = scenario_first_params(scenario);
  if (n_override >= 0) params.n_cars = n_override;
  return initial_state_proportional(params);
}

// ---------------------------------------------------------------------------
// Event engine
// ---------------------------------------------------------------------------

namespace {

struct Event {
  double time;
  int kind;  // 0: full trip completes, 1: empty trip completes
  int origin, dest;
  bool operator>(const Event& other) const { return time > other.time; }
};

struct RepResult {
  Vec requests, fulfilled;
  Vec busy_time;
  Matrix int_e, int_f;   // time integrals of counts over the window
  double window = 0;
  double utility = 0;
  Vec bucket_requests, bucket_fulfilled;
};

struct SlotView {
  double end = kInf;          // boundary after which the next slot applies
  NetworkParams params;       // n_cars already set to the effective car count
};

RepResult run_one(const std::vector<SlotView>& slots, double t0, const Policy& policy,
                  const SimConfig& config, TravelTimeMode mode, const SystemState& initial,
                  std::uint64_t seed, bool weighted_utility,
                  const std::vector<Matrix>& slot_rewards) {
  const int r = initial.e_count.size();
  const long long n_cars = initial.total_cars();
  const double horizon_end = t0 + config.horizon;
  const double warmup = config.warmup >= 0 ? config.warmup : 0.1 * config.horizon;
  const double window_start = t0 + warmup;

  Rng rng(seed);
  SystemState state = initial;
  state.time = t0;

  int slot = 0;
  auto params_now = [&]() -> const NetworkParams& { return slots[slot].params; };

  Vec next_arrival(r);
  auto resample_arrivals = [&](double t) {
    const NetworkParams& p = params_now();
    for (int i = 0; i < r; ++i)
      next_arrival[i] = t + rng.exponential(p.n_cars * p.lambda[i]);
  };
  auto travel_time = [&](int i, int j) {
    const NetworkParams& p = params_now();
    return mode == TravelTimeMode::deterministic ? 1.0 / p.mu(i, j)
                                                 : rng.exponential(p.mu(i, j));
  };

  RepResult rep;
  rep.requests.assign(r, 0.0);
  rep.fulfilled.assign(r, 0.0);
  rep.busy_time.assign(r, 0.0);
  rep.int_e = Matrix(r);
  rep.int_f = Matrix(r);
  rep.window = horizon_end - window_start;
  int n_buckets = config.bucket_width > 0
                      ? static_cast<int>(std::ceil(config.horizon / config.bucket_width - 1e-9))
                      : 0;
  rep.bucket_requests.assign(n_buckets, 0.0);
  rep.bucket_fulfilled.assign(n_buckets, 0.0);
  double weighted_acc = 0;

  // lazy per-cell time integrals: settle a cell right before it changes
  Matrix last_e(r), last_f(r);
  for (auto& v : last_e.data()) v = t0;
  for (auto& v : last_f.data()) v = t0;
  auto clamp_span = [&](double from, double to) {
    double lo = std::max(from, window_start);
    double hi = std::min(to, horizon_end);
    return std::max(0.0, hi - lo);
  };
  auto touch_e = [&](int i, int j, double t) {
    double span = clamp_span(last_e(i, j), t);
    if (span > 0) {
      rep.int_e(i, j) += span * static_cast<double>(state.e_count(i, j));
      if (i == j && state.e_count(i, i) > 0) rep.busy_time[i] += span;
    }
    last_e(i, j) = t;
  };
  auto touch_f = [&](int i, int j, double t) {
    double span = clamp_span(last_f(i, j), t);
    if (span > 0) rep.int_f(i, j) += span * static_cast<double>(state.f_count(i, j));
    last_f(i, j) = t;
  };

  if (n_cars == 0) {
    // nothing can move and nothing arrives (request rates scale with n)
    return rep;
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
  resample_arrivals(t0);

  while (true) {
    int arrive_region = 0;
    for (int i = 1; i < r; ++i)
      if (next_arrival[i] < next_arrival[arrive_region]) arrive_region = i;
    double ta = next_arrival[arrive_region];
    double th = events.empty() ? kInf : events.top().time;
    double tb = slots[slot].end;
    double t = std::min(std::min(ta, th), tb);
    if (t >= horizon_end) break;

    if (tb <= std::min(ta, th)) {
      // parameter switch: in-flight trips keep their completion times, the
      // memoryless arrival clocks restart under the new rates
      ++slot;
      resample_arrivals(tb);
      continue;
    }

    state.time = t;
    if (th < ta) {
      Event ev = events.top();
      events.pop();
      if (ev.kind == 0) {
        touch_f(ev.origin, ev.dest, t);
        --state.f_count(ev.origin, ev.dest);
        int k = policy.decide(ev.dest, state, params_now(), t, rng);
        if (k < 0 || k >= r)
          throw SimulationError("policy returned region " + std::to_string(k) +
                                " outside 0.." + std::to_string(r - 1));
        if (k == ev.dest) {
          touch_e(k, k, t);
          ++state.e_count(k, k);
        } else {
          touch_e(ev.dest, k, t);
          ++state.e_count(ev.dest, k);
          events.push({t + travel_time(ev.dest, k), 1, ev.dest, k});
        }
      } else {
        touch_e(ev.origin, ev.dest, t);
        --state.e_count(ev.origin, ev.dest);
        touch_e(ev.dest, ev.dest, t);
        ++state.e_count(ev.dest, ev.dest);
      }
    } else {
      const int i = arrive_region;
      bool in_window = t >= window_start;
      int bucket = n_buckets > 0
                       ? std::min(n_buckets - 1,
                                  static_cast<int>((t - t0) / config.bucket_width))
                       : -1;
      if (in_window) rep.requests[i] += 1;
      if (bucket >= 0) rep.bucket_requests[bucket] += 1;
      if (state.e_count(i, i) > 0) {
        int j = rng.categorical(params_now().p, i);
        touch_e(i, i, t);
        --state.e_count(i, i);
        touch_f(i, j, t);
        ++state.f_count(i, j);
        events.push({t + travel_time(i, j), 0, i, j});
        if (in_window) {
          rep.fulfilled[i] += 1;
          if (weighted_utility) weighted_acc += slot_rewards[slot](i, j);
        }
        if (bucket >= 0) rep.bucket_fulfilled[bucket] += 1;
      }
      next_arrival[i] = t + rng.exponential(params_now().n_cars * params_now().lambda[i]);
    }

    if (config.audit && state.total_cars() != n_cars)
      throw SimulationError("car conservation violated at t=" + std::to_string(t));
  }

  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      touch_e(i, j, horizon_end);
      touch_f(i, j, horizon_end);
    }

  if (weighted_utility) {
    rep.utility = weighted_acc / (static_cast<double>(n_cars) * rep.window);
  } else {
    double req = 0, ful = 0;
    for (int i = 0; i < r; ++i) { req += rep.requests[i]; ful += rep.fulfilled[i]; }
    rep.utility = req > 0 ? ful / req : 0.0;
  }
  return rep;
}

}  // namespace

SimMetrics simulate(const Scenario& scenario, const Policy& policy, const SimConfig& config,
                    const SystemState& initial) {
  const int r = scenario_regions(scenario);
  if (config.warmup >= config.horizon)
    throw std::invalid_argument("simulate: warmup must be below horizon");

  // per-slot views with the effective car count baked in (state-dependent
  // policies read n_cars from the params they are handed)
  std::vector<SlotView> slots;
  double t0 = 0;
  TravelTimeMode mode = TravelTimeMode::exponential;
  if (std::holds_alternative<NetworkParams>(scenario)) {
    slots.push_back({kInf, std::get<NetworkParams>(scenario)});
  } else {
    const Schedule& schedule = std::get<Schedule>(scenario);
    t0 = schedule.start_time();
    mode = schedule.travel_time_mode;
    for (std::size_t k = 0; k < schedule.slots.size(); ++k) {
      double end = k + 1 < schedule.slots.size() ? schedule.slots[k].end : kInf;
      slots.push_back({end, schedule.slots[k].params});
    }
  }
  if (config.travel_time_mode) mode = *config.travel_time_mode;
  const int n_eff = config.n_override >= 0 ? config.n_override
                                           : scenario_cars(scenario);
  bool weighted = false;
  std::vector<Matrix> slot_rewards;
  for (auto& sv : slots) {
    sv.params.n_cars = n_eff;
    if (sv.params.rewards) weighted = true;
  }
  for (auto& sv : slots) slot_rewards.push_back(sv.params.effective_rewards());

  if (initial.total_cars() != n_eff)
    throw std::invalid_argument("simulate: initial state holds " +
                                std::to_string(initial.total_cars()) + " cars, expected " +
                                std::to_string(n_eff));

  const int reps = std::max(1, config.replications);
  std::vector<RepResult> results(reps);
  auto worker = [&](int k) {
    return run_one(slots, t0, policy, config, mode, initial, config.seed + k, weighted,
                   slot_rewards);
  };
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (reps == 1 || hw == 1) {
    for (int k = 0; k < reps; ++k) results[k] = worker(k);
  } else {
    std::vector<std::future<RepResult>> futures;
    futures.reserve(reps);
    for (int k = 0; k < reps; ++k)
      futures.push_back(std::async(std::launch::async, worker, k));
    for (int k = 0; k < reps; ++k) results[k] = futures[k].get();
  }

  SimMetrics metrics;
  metrics.replications = reps;
  metrics.requests.assign(r, 0.0);
  metrics.fulfilled.assign(r, 0.0);
  metrics.fulfilled_fraction.assign(r, 0.0);
  metrics.fraction_std.assign(r, 0.0);
  metrics.busy_fraction.assign(r, 0.0);
  metrics.avg_e = Matrix(r);
  metrics.avg_f = Matrix(r);
  metrics.rep_utilities.assign(reps, 0.0);

  std::vector<Vec> rep_fraction(reps, Vec(r, 0.0));
  for (int k = 0; k < reps; ++k) {
    const RepResult& rep = results[k];
    metrics.rep_utilities[k] = rep.utility;
    metrics.utility += rep.utility / reps;
    for (int i = 0; i < r; ++i) {
      metrics.requests[i] += rep.requests[i] / reps;
      metrics.fulfilled[i] += rep.fulfilled[i] / reps;
      rep_fraction[k][i] = rep.requests[i] > 0 ? rep.fulfilled[i] / rep.requests[i] : 0.0;
      metrics.fulfilled_fraction[i] += rep_fraction[k][i] / reps;
      metrics.busy_fraction[i] += rep.busy_time[i] / rep.window / reps;
    }
    double scale = 1.0 / (rep.window * n_eff * reps);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        metrics.avg_e(i, j) += rep.int_e(i, j) * scale;
        metrics.avg_f(i, j) += rep.int_f(i, j) * scale;
      }
  }
  if (reps > 1) {
    double su = 0;
    for (int k = 0; k < reps; ++k) {
      double d = metrics.rep_utilities[k] - metrics.utility;
      su += d * d;
    }
    metrics.utility_std = std::sqrt(su / (reps - 1));
    for (int i = 0; i < r; ++i) {
      double s = 0;
      for (int k = 0; k < reps; ++k) {
        double d = rep_fraction[k][i] - metrics.fulfilled_fraction[i];
        s += d * d;
      }
      metrics.fraction_std[i] = std::sqrt(s / (reps - 1));
    }
  }
  if (config.bucket_width > 0 && !results.empty()) {
    int n_buckets = static_cast<int>(results[0].bucket_requests.size());
    metrics.buckets.resize(n_buckets);
    for (int b = 0; b < n_buckets; ++b) {
      auto& bucket = metrics.buckets[b];
      bucket.start = t0 + b * config.bucket_width;
      bucket.end = std::min(t0 + config.horizon, bucket.start + config.bucket_width);
      for (int k = 0; k < reps; ++k) {
        bucket.requests += results[k].bucket_requests[b] / reps;
        bucket.fulfilled += results[k].bucket_fulfilled[b] / reps;
      }
      bucket.fraction = bucket.requests > 0 ? bucket.fulfilled / bucket.requests : 0.0;
    }
  }
  return metrics;
}

SimMetrics simulate(const Scenario& scenario, const Policy& policy, const SimConfig& config) {
  return simulate(scenario, policy, config,
                  initial_state_proportional(scenario, config.n_override));
}

}  // namespace rideshare
