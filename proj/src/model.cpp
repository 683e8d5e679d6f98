#include "rideshare/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rideshare/rng.hpp"

#include <json.hpp>

namespace rideshare {

namespace {

constexpr double kStochasticTol = 1e-9;

std::string idx1(int i) { return "[" + std::to_string(i) + "]"; }
std::string idx2(int i, int j) {
  return "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

void check_row_stochastic(const Matrix& m, const std::string& field, double tol,
                          std::vector<Violation>& out) {
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (m(i, j) < -tol)
        out.push_back({field, idx2(i, j), -m(i, j), field + idx2(i, j) + " negative"});
    }
    double res = m.row_sum(i) - 1.0;
    if (std::fabs(res) > tol)
      out.push_back({field, idx1(i), res,
                     field + " row " + std::to_string(i) + " sums to " +
                         std::to_string(1.0 + res) + " (residual " + std::to_string(res) + ")"});
  }
}

}  // namespace

int scenario_regions(const Scenario& s) {
  if (std::holds_alternative<NetworkParams>(s)) return std::get<NetworkParams>(s).regions;
  return std::get<Schedule>(s).regions();
}

int scenario_cars(const Scenario& s) {
  if (std::holds_alternative<NetworkParams>(s)) return std::get<NetworkParams>(s).n_cars;
  return std::get<Schedule>(s).n_cars();
}

const NetworkParams& scenario_first_params(const Scenario& s) {
  if (std::holds_alternative<NetworkParams>(s)) return std::get<NetworkParams>(s);
  return std::get<Schedule>(s).slots.front().params;
}

std::vector<Violation> validate(const NetworkParams& params) {
  std::vector<Violation> out;
  const int r = params.regions;
  if (r < 1) {
    out.push_back({"regions", "", static_cast<double>(r), "regions must be >= 1"});
    return out;
  }
  if (params.n_cars < 1)
    out.push_back({"n_cars", "", static_cast<double>(params.n_cars), "n_cars must be >= 1"});
  if (static_cast<int>(params.lambda.size()) != r)
    out.push_back({"lambda", "", 0.0, "lambda must have length regions"});
  if (params.mu.size() != r) out.push_back({"mu", "", 0.0, "mu must be regions x regions"});
  if (params.p.size() != r) out.push_back({"p", "", 0.0, "p must be regions x regions"});
  if (params.rewards && params.rewards->size() != r)
    out.push_back({"rewards", "", 0.0, "rewards must be regions x regions"});
  if (!out.empty()) return out;  // dimension errors make element checks moot

  for (int i = 0; i < r; ++i)
    if (!(params.lambda[i] > 0))
      out.push_back({"lambda", idx1(i), params.lambda[i],
                     "lambda" + idx1(i) + " not positive"});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (!(params.mu(i, j) > 0))
        out.push_back({"mu", idx2(i, j), params.mu(i, j), "mu" + idx2(i, j) + " not positive"});
  check_row_stochastic(params.p, "p", kStochasticTol, out);
  if (params.rewards)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if ((*params.rewards)(i, j) < 0)
          out.push_back({"rewards", idx2(i, j), (*params.rewards)(i, j),
                         "rewards" + idx2(i, j) + " negative"});
  return out;
}

std::vector<Violation> validate(const RoutingMatrix& routing, int regions) {
  std::vector<Violation> out;
  if (routing.q.size() != regions) {
    out.push_back({"q", "", 0.0, "q must be regions x regions"});
    return out;
  }
  check_row_stochastic(routing.q, "q", kStochasticTol, out);
  return out;
}

std::vector<Violation> validate(const Schedule& schedule) {
  std::vector<Violation> out;
  if (schedule.slots.empty()) {
    out.push_back({"schedule", "", 0.0, "schedule has no slots"});
    return out;
  }
  const int r = schedule.regions();
  const int n = schedule.n_cars();
  for (std::size_t k = 0; k < schedule.slots.size(); ++k) {
    const auto& slot = schedule.slots[k];
    if (!(slot.end > slot.start))
      out.push_back({"schedule", idx1(static_cast<int>(k)), slot.end - slot.start,
                     "slot interval must have positive length"});
    if (k > 0 && std::fabs(slot.start - schedule.slots[k - 1].end) > 1e-12)
      out.push_back({"schedule", idx1(static_cast<int>(k)), slot.start - schedule.slots[k - 1].end,
                     "slots must be contiguous"});
    if (slot.params.regions != r || slot.params.n_cars != n)
      out.push_back({"schedule", idx1(static_cast<int>(k)), 0.0,
                     "all slots must share regions and n_cars"});
    for (auto& v : validate(slot.params)) {
      v.field = "schedule" + idx1(static_cast<int>(k)) + "." + v.field;
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Violation> validate(const Scenario& scenario) {
  if (std::holds_alternative<NetworkParams>(scenario))
    return validate(std::get<NetworkParams>(scenario));
  return validate(std::get<Schedule>(scenario));
}

// ---------------------------------------------------------------------------
// Built-in scenarios
// ---------------------------------------------------------------------------

namespace {

Matrix inverse_elementwise(const Matrix& mean_travel) {
  Matrix mu(mean_travel.size());
  for (int i = 0; i < mean_travel.size(); ++i)
    for (int j = 0; j < mean_travel.size(); ++j) mu(i, j) = 1.0 / mean_travel(i, j);
  return mu;
}

NetworkParams two_region() {
  NetworkParams params;
  params.regions = 2;
  params.n_cars = 1200;
  // Region request rates are 800 and 400 per unit time with 1200 cars.
  params.lambda = {800.0 / 1200.0, 400.0 / 1200.0};
  params.p = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  params.mu = Matrix(2, 1.0);  // unit mean travel times; mu_ii unused (p_ii = 0)
  return params;
}

// Nine-region network estimated from a ridesharing order data set. The
// published destination rows carry third-decimal rounding (sums 0.999-1.004),
// so route demand rates lambda_i * p_ij are kept exactly as published: each
// row of p is renormalized and the row sum folds into lambda.
NetworkParams nine_region_didi() {
  NetworkParams params;
  params.regions = 9;
  params.n_cars = 2000;
  Vec lambda = {0.0131, 0.0624, 0.0381, 0.0652, 0.0870, 0.1178, 0.0762, 0.1438, 0.2751};
  Matrix p = Matrix::from_rows({
      {0.230, 0.297, 0.372, 0.004, 0.026, 0.029, 0.009, 0.018, 0.015},
      {0.044, 0.655, 0.146, 0.005, 0.079, 0.038, 0.018, 0.005, 0.011},
      {0.165, 0.291, 0.288, 0.007, 0.054, 0.126, 0.017, 0.025, 0.027},
      {0.0013, 0.010, 0.006, 0.139, 0.031, 0.185, 0.101, 0.117, 0.409},
      {0.005, 0.096, 0.026, 0.037, 0.25, 0.333, 0.218, 0.012, 0.027},
      {0.004, 0.031, 0.032, 0.088, 0.121, 0.426, 0.148, 0.059, 0.092},
      {0.002, 0.023, 0.011, 0.066, 0.142, 0.269, 0.399, 0.020, 0.069},
      {0.004, 0.008, 0.023, 0.067, 0.011, 0.095, 0.019, 0.400, 0.374},
      {0.001, 0.004, 0.005, 0.095, 0.010, 0.059, 0.030, 0.185, 0.610},
  });
  Matrix mean_travel = Matrix::from_rows({
      {0.83, 1.87, 1.07, 3.89, 3.25, 2.79, 4.25, 2.94, 4.37},
      {1.78, 0.89, 1.18, 3.24, 1.24, 1.99, 2.89, 3.46, 4.18},
      {1.02, 1.31, 0.78, 2.82, 1.45, 1.36, 3.26, 2.17, 3.04},
      {3.52, 3.13, 2.76, 0.93, 1.5, 1.26, 1.49, 1.75, 1.6},
      {2.86, 1.42, 1.64, 1.55, 0.84, 1.04, 1.45, 2.88, 2.89},
      {2.61, 2.17, 1.54, 1.31, 1.15, 0.81, 1.86, 1.78, 2.2},
      {4.38, 3.02, 2.79, 1.36, 1.35, 1.65, 0.94, 3.1, 3.0},
      {2.93, 3.06, 2.26, 1.75, 2.69, 1.62, 3.23, 0.9, 1.48},
      {3.58, 4.18, 2.8, 1.49, 2.46, 2.02, 2.72, 1.43, 1.01},
  });
  params.lambda.resize(9);
  for (int i = 0; i < 9; ++i) {
    double rs = p.row_sum(i);
    params.lambda[i] = lambda[i] * rs;
    for (int j = 0; j < 9; ++j) p(i, j) /= rs;
  }
  params.p = p;
  params.mu = inverse_elementwise(mean_travel);
  return params;
}

// Stylized five-region city (three suburbs, midtown, downtown) over an evening
// split into three two-hour slots with distinct traffic patterns. Times are
// clock hours; lambda is per hour, per car.
Schedule five_region_city() {
  auto slot_params = [](Vec lambda, Matrix p, Matrix mean_travel) {
    NetworkParams params;
    params.regions = 5;
    params.n_cars = 1000;
    params.lambda = std::move(lambda);
    params.p = std::move(p);
    params.mu = inverse_elementwise(mean_travel);
    return params;
  };

  Matrix travel_early = Matrix::from_rows({
      {0.15, 0.25, 1.25, 0.2, 0.4},
      {0.25, 0.10, 1.1, 0.1, 0.3},
      {1.25, 1.1, 0.1, 1.0, 0.65},
      {0.25, 0.15, 1.0, 0.15, 0.25},
      {0.5, 0.4, 0.75, 0.25, 0.2},
  });
  Matrix travel_late = Matrix::from_rows({
      {0.15, 0.25, 1.25, 0.2, 0.4},
      {0.25, 0.10, 1.1, 0.1, 0.3},
      {1.25, 1.1, 0.1, 1.0, 0.65},
      {0.2, 0.1, 1.0, 0.15, 0.25},
      {0.4, 0.3, 0.65, 0.25, 0.2},
  });

  Schedule schedule;
  schedule.slots.push_back(
      {17.0, 19.0,
       slot_params({0.108, 0.108, 0.108, 0.108, 1.08},
                   Matrix::from_rows({{0.6, 0.1, 0.0, 0.3, 0.0},
                                      {0.1, 0.6, 0.0, 0.3, 0.0},
                                      {0.0, 0.0, 0.7, 0.3, 0.0},
                                      {0.2, 0.2, 0.2, 0.2, 0.2},
                                      {0.3, 0.3, 0.3, 0.1, 0.0}}),
                   travel_early)});
  schedule.slots.push_back(
      {19.0, 21.0,
       slot_params({0.72, 0.48, 0.48, 0.48, 0.12},
                   Matrix::from_rows({{0.1, 0.0, 0.0, 0.9, 0.0},
                                      {0.0, 0.1, 0.0, 0.9, 0.0},
                                      {0.0, 0.0, 0.1, 0.9, 0.0},
                                      {0.05, 0.05, 0.05, 0.8, 0.05},
                                      {0.0, 0.0, 0.0, 0.9, 0.1}}),
                   travel_late)});
  schedule.slots.push_back(
      {21.0, 23.0,
       slot_params({0.12, 0.12, 0.12, 1.32, 0.12},
                   Matrix::from_rows({{0.9, 0.05, 0.0, 0.05, 0.0},
                                      {0.05, 0.9, 0.0, 0.05, 0.0},
                                      {0.0, 0.0, 0.9, 0.1, 0.0},
                                      {0.3, 0.3, 0.3, 0.05, 0.05},
                                      {0.0, 0.0, 0.0, 0.1, 0.9}}),
                   travel_late)});
  return schedule;
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
  if (name == "two_region") return two_region();
  if (name == "nine_region_didi") return nine_region_didi();
  if (name == "five_region_city") return five_region_city();
  throw std::invalid_argument("unknown builtin scenario: " + name);
}

NetworkParams perturb(const NetworkParams& params, double sigma, std::uint64_t seed) {
  if (sigma < 0 || sigma >= 1)
    throw std::invalid_argument("perturb: sigma must be in [0, 1)");
  const int r = params.regions;
  Rng rng(seed);
  Matrix eta(r), xi(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) eta(i, j) = rng.rademacher();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) xi(i, j) = rng.rademacher();

  NetworkParams out = params;
  for (int i = 0; i < r; ++i) {
    Vec rate(r);
    double sum = 0;
    for (int j = 0; j < r; ++j) {
      rate[j] = params.lambda[i] * params.p(i, j) * (1.0 + sigma * eta(i, j));
      sum += rate[j];
    }
    out.lambda[i] = sum;
    for (int j = 0; j < r; ++j) out.p(i, j) = rate[j] / sum;
    for (int j = 0; j < r; ++j)
      out.mu(i, j) = params.mu(i, j) / (1.0 + sigma * xi(i, j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario file I/O
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int regions, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != regions)
    throw std::runtime_error("scenario field '" + field + "': expected " +
                             std::to_string(regions) + " rows");
  Matrix m(regions);
  for (int i = 0; i < regions; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != regions)
      throw std::runtime_error("scenario field '" + field + "' row " + std::to_string(i) +
                               ": expected " + std::to_string(regions) + " entries");
    for (int jj = 0; jj < regions; ++jj) m(i, jj) = row[jj].get<double>();
  }
  return m;
}

Vec vec_from_json(const json& j, int regions, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != regions)
    throw std::runtime_error("scenario field '" + field + "': expected length " +
                             std::to_string(regions));
  Vec v(regions);
  for (int i = 0; i < regions; ++i) v[i] = j[i].get<double>();
  return v;
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) throw std::runtime_error("scenario missing field '" + field + "'");
  return *it;
}

Matrix mean_travel_of(const NetworkParams& params) {
  Matrix m(params.regions);
  for (int i = 0; i < params.regions; ++i)
    for (int j = 0; j < params.regions; ++j) m(i, j) = 1.0 / params.mu(i, j);
  return m;
}

NetworkParams params_from_json(const json& j, int regions, int n_cars) {
  NetworkParams params;
  params.regions = regions;
  params.n_cars = n_cars;
  params.lambda = vec_from_json(require(j, "lambda"), regions, "lambda");
  Matrix mean_travel = matrix_from_json(require(j, "mean_travel"), regions, "mean_travel");
  params.mu = Matrix(regions);
  for (int i = 0; i < regions; ++i)
    for (int jj = 0; jj < regions; ++jj) {
      if (!(mean_travel(i, jj) > 0))
        throw std::runtime_error("scenario field 'mean_travel' must be positive");
      params.mu(i, jj) = 1.0 / mean_travel(i, jj);
    }
  params.p = matrix_from_json(require(j, "p"), regions, "p");
  if (j.contains("rewards"))
    params.rewards = matrix_from_json(j["rewards"], regions, "rewards");
  return params;
}

TravelTimeMode mode_from_json(const json& j) {
  if (!j.contains("travel_time_mode")) return TravelTimeMode::exponential;
  std::string s = j["travel_time_mode"].get<std::string>();
  if (s == "exponential") return TravelTimeMode::exponential;
  if (s == "deterministic") return TravelTimeMode::deterministic;
  throw std::runtime_error("scenario field 'travel_time_mode': unknown value '" + s + "'");
}

}  // namespace

std::string scenario_to_json(const Scenario& scenario, const RoutingMatrix* routing) {
  json j;
  j["regions"] = scenario_regions(scenario);
  j["n_cars"] = scenario_cars(scenario);
  if (routing) j["q"] = matrix_to_json(routing->q);
  if (std::holds_alternative<NetworkParams>(scenario)) {
    const auto& params = std::get<NetworkParams>(scenario);
    j["lambda"] = params.lambda;
    j["mean_travel"] = matrix_to_json(mean_travel_of(params));
    j["p"] = matrix_to_json(params.p);
    if (params.rewards) j["rewards"] = matrix_to_json(*params.rewards);
  } else {
    const auto& schedule = std::get<Schedule>(scenario);
    j["travel_time_mode"] = schedule.travel_time_mode == TravelTimeMode::deterministic
                                ? "deterministic"
                                : "exponential";
    json slots = json::array();
    for (const auto& slot : schedule.slots) {
      json js;
      js["start"] = slot.start;
      js["end"] = slot.end;
      js["lambda"] = slot.params.lambda;
      js["mean_travel"] = matrix_to_json(mean_travel_of(slot.params));
      js["p"] = matrix_to_json(slot.params.p);
      if (slot.params.rewards) js["rewards"] = matrix_to_json(*slot.params.rewards);
      slots.push_back(js);
    }
    j["schedule"] = slots;
  }
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("scenario parse error: ") + err.what());
  }
  int regions = require(j, "regions").get<int>();
  int n_cars = require(j, "n_cars").get<int>();
  Scenario scenario;
  if (j.contains("schedule")) {
    Schedule schedule;
    schedule.travel_time_mode = mode_from_json(j);
    for (const auto& js : j["schedule"]) {
      ScheduleSlot slot;
      slot.start = require(js, "start").get<double>();
      slot.end = require(js, "end").get<double>();
      slot.params = params_from_json(js, regions, n_cars);
      schedule.slots.push_back(std::move(slot));
    }
    if (schedule.slots.empty()) throw std::runtime_error("scenario field 'schedule' is empty");
    scenario = schedule;
  } else {
    scenario = params_from_json(j, regions, n_cars);
  }
  auto violations = validate(scenario);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "scenario violates invariants:";
    for (const auto& v : violations) msg << "\n  " << v.message;
    throw std::runtime_error(msg.str());
  }
  return scenario;
}

std::optional<RoutingMatrix> routing_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("routing parse error: ") + err.what());
  }
  const json* arr = nullptr;
  if (j.is_array()) arr = &j;
  else if (j.contains("q")) arr = &j["q"];
  if (!arr) return std::nullopt;
  int r = static_cast<int>(arr->size());
  RoutingMatrix routing{matrix_from_json(*arr, r, "q")};
  auto violations = validate(routing, r);
  if (!violations.empty())
    throw std::runtime_error("routing matrix violates invariants: " + violations.front().message);
  return routing;
}

RoutingMatrix load_routing_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open routing file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto routing = routing_from_json(buf.str());
  if (!routing) throw std::runtime_error("no 'q' matrix in " + path);
  return *routing;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path,
                   const RoutingMatrix* routing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << scenario_to_json(scenario, routing) << "\n";
}

}  // namespace rideshare
