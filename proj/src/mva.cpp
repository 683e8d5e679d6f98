#include "rideshare/mva.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rideshare/linalg.hpp"

namespace rideshare {

std::string Station::label() const {
  switch (role) {
    case Role::idle: return "idle(" + std::to_string(i) + ")";
    case Role::full_travel: return "full(" + std::to_string(i) + "," + std::to_string(j) + ")";
    case Role::empty_travel: return "empty(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return "?";
}

StationLayout station_layout(const NetworkParams& params, const RoutingMatrix& routing) {
  const int r = params.regions;
  const Matrix& q = routing.q;
  for (int i = 0; i < r; ++i) {
    if (!(params.lambda[i] > 0)) throw std::invalid_argument("station_layout: lambda must be positive");
    for (int j = 0; j < r; ++j)
      if (!(params.mu(i, j) > 0)) throw std::invalid_argument("station_layout: mu must be positive");
  }

  // A car's region-to-region chain is PQ; its stationary flow gives the idle
  // stations' visit ratios directly.
  Matrix region_chain(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double s = 0;
      for (int l = 0; l < r; ++l) s += params.p(i, l) * q(l, j);
      region_chain(i, j) = s;
    }
  Vec v_idle = chain_stationary(region_chain);
  double base = v_idle[0];
  for (auto& v : v_idle) v /= base;

  // full-car arrivals into region i per unit flow
  Vec drop(r, 0.0);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i) drop[i] += v_idle[k] * params.p(k, i);

  StationLayout layout;
  layout.idle_station_of.assign(r, -1);
  auto keep = [&](Station s) {
    if (s.visit_ratio <= 1e-14) return;
    if (s.role == Station::Role::idle) layout.idle_station_of[s.i] = static_cast<int>(layout.stations.size());
    layout.stations.push_back(s);
  };
  const double n = params.n_cars;
  for (int i = 0; i < r; ++i)
    keep({Station::Kind::single_server, Station::Role::idle, i, i, n * params.lambda[i], v_idle[i]});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      keep({Station::Kind::infinite_server, Station::Role::full_travel, i, j, params.mu(i, j),
            v_idle[i] * params.p(i, j)});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (j == i) continue;
      keep({Station::Kind::infinite_server, Station::Role::empty_travel, i, j, params.mu(i, j),
            drop[i] * q(i, j)});
    }

  double res = 0;
  for (int j = 0; j < r; ++j) {
    double inflow = 0;
    for (int k = 0; k < r; ++k) inflow += drop[k] * q(k, j);
    res = std::max(res, std::fabs(inflow - v_idle[j]));
  }
  layout.flow_balance_residual = res;
  return layout;
}

namespace {

MvaResult run_mva(const NetworkParams& params, const StationLayout& layout, int n_cars) {
  const int J = static_cast<int>(layout.stations.size());
  Vec length(J, 0.0), wait(J, 0.0);
  double throughput = 0;
  for (int n = 1; n <= n_cars; ++n) {
    double cycle = 0;
    for (int j = 0; j < J; ++j) {
      const Station& s = layout.stations[j];
      wait[j] = s.kind == Station::Kind::single_server ? (1.0 + length[j]) / s.rate : 1.0 / s.rate;
      cycle += s.visit_ratio * wait[j];
    }
    throughput = n / cycle;
    for (int j = 0; j < J; ++j) length[j] = throughput * layout.stations[j].visit_ratio * wait[j];
  }
  MvaResult result;
  result.mean_queue = length;
  result.throughput = throughput;
  result.availability.assign(params.regions, 0.0);
  for (int i = 0; i < params.regions; ++i) {
    int s = layout.idle_station_of[i];
    if (s < 0) continue;  // region never visited: availability stays 0
    result.availability[i] =
        throughput * layout.stations[s].visit_ratio / layout.stations[s].rate;
  }
  return result;
}

}  // namespace

MvaResult analyze(const NetworkParams& params, const RoutingMatrix& routing, int n_cars) {
  if (n_cars < 1) throw std::invalid_argument("analyze: n_cars must be >= 1");
  NetworkParams scaled = params;
  scaled.n_cars = n_cars;  // idle service rates are n_cars * lambda
  StationLayout layout = station_layout(scaled, routing);
  return run_mva(scaled, layout, n_cars);
}

std::vector<std::pair<int, Vec>> availability_curve(const NetworkParams& params,
                                                    const RoutingMatrix& routing,
                                                    const std::vector<int>& n_list) {
  std::vector<std::pair<int, Vec>> curve;
  curve.reserve(n_list.size());
  for (int n : n_list) curve.emplace_back(n, analyze(params, routing, n).availability);
  return curve;
}

}  // namespace rideshare
