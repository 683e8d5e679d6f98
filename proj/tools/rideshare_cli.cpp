// Command-line front end: scenarios in, CSV reports out. Every output file
// begins with a `# manifest:` comment capturing the command, inputs, seeds and
// flags, so a run can be reproduced bit-for-bit with the same build.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rideshare/equilibrium.hpp"
#include "rideshare/fleet_sizing.hpp"
#include "rideshare/fluid_ode.hpp"
#include "rideshare/fluid_opt.hpp"
#include "rideshare/linprog.hpp"
#include "rideshare/model.hpp"
#include "rideshare/mva.hpp"
#include "rideshare/simulator.hpp"

namespace rs = rideshare;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "rideshare 1.0.0";

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitSimulation = 4;

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

rs::Scenario load_scenario_ref(const std::string& ref) {
  rs::Scenario scenario;
  if (ref.rfind("builtin:", 0) == 0)
    scenario = rs::builtin_scenario(ref.substr(8));
  else
    scenario = rs::load_scenario(ref);
  auto violations = rs::validate(scenario);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "scenario '" << ref << "' failed validation:";
    for (const auto& v : violations) msg << "\n  " << v.message;
    throw ValidationFailure(msg.str());
  }
  return scenario;
}

const rs::NetworkParams& require_static(const rs::Scenario& scenario, const std::string& cmd) {
  if (!std::holds_alternative<rs::NetworkParams>(scenario))
    throw ValidationFailure(cmd + " needs a static scenario, not a schedule");
  return std::get<rs::NetworkParams>(scenario);
}

// --q values: "optimal" (fluid LP), "identity", inline JSON, or a file path
rs::RoutingMatrix resolve_routing(const std::string& spec, const rs::NetworkParams& params) {
  if (spec == "optimal") {
    auto sol = rs::solve_fluid_optimum(params);
    return *sol.q_star;
  }
  if (spec == "identity") {
    rs::RoutingMatrix routing{rs::Matrix(params.regions)};
    for (int i = 0; i < params.regions; ++i) routing.q(i, i) = 1.0;
    return routing;
  }
  if (spec == "backhaul") return rs::backhaul_routing(params);
  rs::RoutingMatrix routing = spec.front() == '[' ? *rs::routing_from_json(spec)
                                                  : rs::load_routing_matrix(spec);
  auto violations = rs::validate(routing, params.regions);
  if (!violations.empty()) throw ValidationFailure("--q: " + violations.front().message);
  return routing;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw ValidationFailure("empty list argument: " + text);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

class Report {
 public:
  Report(const std::string& path, json manifest) : path_(path) {
    manifest["version"] = kVersion;
    if (path.empty() || path == "-") {
      out_ = &std::cout;
    } else {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
      out_ = &file_;
      manifest["outputs"] = json::array({path});
    }
    (*out_) << "# manifest: " << manifest.dump() << "\n";
    (*out_) << std::setprecision(12);
  }

  template <typename T>
  Report& operator<<(const T& v) {
    (*out_) << v;
    return *this;
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

void write_matrix_rows(Report& report, const std::string& tag, const rs::Matrix& m,
                       const std::string& slot = "") {
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      report << slot << "," << tag << "," << i << "," << j << "," << m(i, j) << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct OptimizeArgs {
  std::string scenario, rewards_path, out, q_out;
};

int cmd_optimize(const OptimizeArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  std::optional<rs::Matrix> rewards;
  if (!args.rewards_path.empty()) {
    auto loaded = rs::load_scenario(args.rewards_path);
    rewards = rs::scenario_first_params(loaded).rewards;
    if (!rewards) throw ValidationFailure("--rewards file has no rewards matrix");
  }

  json manifest{{"command", "optimize"}, {"scenario", args.scenario}};
  Report report(args.out, manifest);
  report << "slot,section,i,j,value\n";
  json qman{{"command", "optimize.q"}, {"scenario", args.scenario}};
  Report qreport(args.q_out, qman);
  qreport << "slot,i,j,value\n";

  auto emit = [&](const std::string& slot, const rs::NetworkParams& params) {
    rs::FluidSolution sol = rewards ? rs::solve_fluid_optimum(params, *rewards)
                                    : rs::solve_fluid_optimum(params);
    report << slot << ",value,,," << sol.value << "\n";
    for (int i = 0; i < params.regions; ++i)
      report << slot << ",a," << i << ",," << sol.a_bar[i] << "\n";
    write_matrix_rows(report, "e", sol.e_bar, slot);
    write_matrix_rows(report, "f", sol.f_bar, slot);
    for (int i = 0; i < params.regions; ++i)
      for (int j = 0; j < params.regions; ++j)
        qreport << slot << "," << i << "," << j << "," << sol.q_star->q(i, j) << "\n";
  };

  if (std::holds_alternative<rs::NetworkParams>(scenario)) {
    emit("", std::get<rs::NetworkParams>(scenario));
  } else {
    const auto& schedule = std::get<rs::Schedule>(scenario);
    for (std::size_t k = 0; k < schedule.slots.size(); ++k)
      emit(std::to_string(k), schedule.slots[k].params);
  }
  return 0;
}

struct MvaArgs {
  std::string scenario, q = "optimal", n_list, out;
};

int cmd_mva(const MvaArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  const auto& params = require_static(scenario, "mva");
  rs::RoutingMatrix routing = resolve_routing(args.q, params);
  std::vector<int> n_list =
      args.n_list.empty() ? std::vector<int>{params.n_cars} : parse_int_list(args.n_list);

  json manifest{{"command", "mva"}, {"scenario", args.scenario}, {"q", args.q},
                {"n_list", n_list}};
  Report report(args.out, manifest);
  report << "n";
  for (int i = 0; i < params.regions; ++i) report << ",availability_" << i;
  report << "\n";
  for (const auto& [n, availability] : rs::availability_curve(params, routing, n_list)) {
    report << n;
    for (double a : availability) report << "," << a;
    report << "\n";
  }
  return 0;
}

struct SimulateArgs {
  std::string scenario, policy = "static", q = "optimal", out, travel;
  double horizon = 200, warmup = -1, bucket = 0;
  int n = -1, reps = 1;
  std::uint64_t seed = 1;
};

rs::PolicyPtr resolve_policy(const std::string& spec, const rs::Scenario& scenario,
                             const std::string& q_spec) {
  if (spec == "static")
    return rs::policy_static(resolve_routing(q_spec, rs::scenario_first_params(scenario)));
  if (spec == "sw") return rs::policy_sw();
  if (spec.rfind("jlcr:", 0) == 0) return rs::policy_jlcr(std::stod(spec.substr(5)));
  if (spec == "standard") {
    if (!std::holds_alternative<rs::Schedule>(scenario))
      throw ValidationFailure("policy 'standard' needs a schedule scenario");
    const auto& schedule = std::get<rs::Schedule>(scenario);
    std::vector<std::pair<double, rs::RoutingMatrix>> table;
    for (const auto& slot : schedule.slots) {
      auto sol = rs::solve_fluid_optimum(slot.params);
      table.emplace_back(slot.start, *sol.q_star);
    }
    return rs::policy_lookahead(std::move(table));
  }
  if (spec.rfind("lookahead:", 0) == 0) {
    if (!std::holds_alternative<rs::Schedule>(scenario))
      throw ValidationFailure("policy 'lookahead' needs a schedule scenario");
    auto parts = parse_list(spec.substr(10));
    if (parts.size() != 2) throw ValidationFailure("lookahead policy wants lookahead:T,delta");
    return rs::policy_lookahead(
        rs::lookahead_table(std::get<rs::Schedule>(scenario), parts[1], parts[0]));
  }
  throw ValidationFailure("unknown policy: " + spec);
}

std::optional<rs::TravelTimeMode> parse_travel(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "exponential") return rs::TravelTimeMode::exponential;
  if (text == "deterministic") return rs::TravelTimeMode::deterministic;
  throw ValidationFailure("--travel must be exponential or deterministic");
}

int cmd_simulate(const SimulateArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  rs::PolicyPtr policy = resolve_policy(args.policy, scenario, args.q);

  rs::SimConfig config;
  config.horizon = args.horizon;
  config.warmup = args.warmup;
  config.seed = args.seed;
  config.replications = args.reps;
  config.n_override = args.n;
  config.bucket_width = args.bucket;
  config.travel_time_mode = parse_travel(args.travel);

  rs::SimMetrics metrics = rs::simulate(scenario, *policy, config);

  json manifest{{"command", "simulate"}, {"scenario", args.scenario},
                {"policy", args.policy}, {"seed", args.seed}, {"reps", args.reps},
                {"horizon", args.horizon}, {"warmup", args.warmup}, {"n", args.n}};
  Report report(args.out, manifest);
  report << "scope,key,requests,fulfilled,fraction,extra\n";
  for (int i = 0; i < static_cast<int>(metrics.requests.size()); ++i)
    report << "region," << i << "," << metrics.requests[i] << "," << metrics.fulfilled[i] << ","
           << metrics.fulfilled_fraction[i] << "," << metrics.fraction_std[i] << "\n";
  for (const auto& bucket : metrics.buckets)
    report << "bucket," << bucket.start << "," << bucket.requests << "," << bucket.fulfilled
           << "," << bucket.fraction << ",\n";
  double ci = metrics.replications > 1
                  ? 1.96 * metrics.utility_std / std::sqrt(metrics.replications)
                  : 0.0;
  report << "summary,utility,,," << metrics.utility << "," << ci << "\n";
  return 0;
}

struct CompareArgs {
  std::string scenario, policies = "static,jlcr:0,jlcr:0.5,jlcr:1,sw", n_list, out;
  double horizon = 200, warmup = -1;
  int reps = 5;
  std::uint64_t seed = 1;
};

int cmd_compare(const CompareArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  const auto& params = require_static(scenario, "compare");
  std::vector<int> n_list =
      args.n_list.empty() ? std::vector<int>{params.n_cars} : parse_int_list(args.n_list);

  rs::FluidSolution optimum = rs::solve_fluid_optimum(params);

  json manifest{{"command", "compare"}, {"scenario", args.scenario},
                {"policies", args.policies}, {"seed", args.seed}, {"reps", args.reps},
                {"horizon", args.horizon}};
  Report report(args.out, manifest);
  report << "policy,n,utility,std,ci95\n";
  report << "fluid_lp,," << optimum.value << ",,\n";

  std::stringstream ss(args.policies);
  std::string spec;
  while (std::getline(ss, spec, ',')) {
    rs::PolicyPtr policy = resolve_policy(spec, scenario, "optimal");
    for (int n : n_list) {
      rs::SimConfig config;
      config.horizon = args.horizon;
      config.warmup = args.warmup;
      config.seed = args.seed;
      config.replications = args.reps;
      config.n_override = n;
      rs::SimMetrics metrics = rs::simulate(scenario, *policy, config);
      double ci = metrics.replications > 1
                      ? 1.96 * metrics.utility_std / std::sqrt(metrics.replications)
                      : 0.0;
      report << spec << "," << n << "," << metrics.utility << "," << metrics.utility_std << ","
             << ci << "\n";
    }
  }
  return 0;
}

struct LookaheadEvalArgs {
  std::string scenario, t_list = "0.5", out, travel = "deterministic";
  double delta = 1.0 / 60.0, bucket = 1.0, warmup = 0;
  int n = -1, reps = 10;
  std::uint64_t seed = 1;
};

int cmd_lookahead_eval(const LookaheadEvalArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  if (!std::holds_alternative<rs::Schedule>(scenario))
    throw ValidationFailure("lookahead-eval needs a schedule scenario");
  const auto& schedule = std::get<rs::Schedule>(scenario);

  json manifest{{"command", "lookahead-eval"}, {"scenario", args.scenario},
                {"t_list", args.t_list}, {"delta", args.delta}, {"seed", args.seed},
                {"reps", args.reps}, {"n", args.n}, {"travel", args.travel}};
  Report report(args.out, manifest);
  report << "policy,bucket_start,bucket_end,requests,fulfilled,fraction\n";

  rs::SimConfig config;
  config.horizon = schedule.end_time() - schedule.start_time();
  config.warmup = args.warmup;
  config.seed = args.seed;
  config.replications = args.reps;
  config.n_override = args.n;
  config.bucket_width = args.bucket;
  config.travel_time_mode = parse_travel(args.travel);

  auto run = [&](const std::string& name, const rs::PolicyPtr& policy) {
    rs::SimMetrics metrics = rs::simulate(scenario, *policy, config);
    for (const auto& bucket : metrics.buckets)
      report << name << "," << bucket.start << "," << bucket.end << "," << bucket.requests
             << "," << bucket.fulfilled << "," << bucket.fraction << "\n";
    double req = 0, ful = 0;
    for (const auto& bucket : metrics.buckets) { req += bucket.requests; ful += bucket.fulfilled; }
    report << name << ",total,," << req << "," << ful << "," << (req > 0 ? ful / req : 0.0)
           << "\n";
  };

  run("standard", resolve_policy("standard", scenario, "optimal"));
  for (double horizon : parse_list(args.t_list)) {
    auto table = rs::lookahead_table(schedule, args.delta, horizon);
    std::ostringstream name;
    name << "lookahead_T=" << horizon;
    run(name.str(), rs::policy_lookahead(std::move(table)));
  }
  return 0;
}

struct RobustnessArgs {
  std::string scenario, sigma_list = "0.05,0.1", out;
  int reps = 300;
  std::uint64_t seed = 1;
};

int cmd_robustness(const RobustnessArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  const auto& params = require_static(scenario, "robustness");
  rs::FluidSolution optimum = rs::solve_fluid_optimum(params);

  json manifest{{"command", "robustness"}, {"scenario", args.scenario},
                {"sigma_list", args.sigma_list}, {"reps", args.reps}, {"seed", args.seed}};
  Report report(args.out, manifest);
  report << "sigma,reps,failures,mean,std,relative_suboptimality,optimal_fluid\n";

  for (double sigma : parse_list(args.sigma_list)) {
    double sum = 0, sumsq = 0;
    int ok = 0, failures = 0;
    for (int rep = 0; rep < args.reps; ++rep) {
      if (sigma == 0.0) {
        sum += optimum.value;
        sumsq += optimum.value * optimum.value;
        ++ok;
        continue;
      }
      rs::NetworkParams noisy = rs::perturb(params, sigma, args.seed + rep);
      try {
        rs::FluidSolution sol = rs::solve_fluid_optimum(noisy);
        rs::EquilibriumPoint point = rs::equilibrium_point(params, *sol.q_star);
        sum += rs::utility(point.a_bar, params);
        sumsq += rs::utility(point.a_bar, params) * rs::utility(point.a_bar, params);
        ++ok;
      } catch (const std::exception&) {
        ++failures;  // reducible chain under the noisy routing matrix
      }
    }
    double mean = ok > 0 ? sum / ok : 0.0;
    double var = ok > 1 ? (sumsq - ok * mean * mean) / (ok - 1) : 0.0;
    report << sigma << "," << ok << "," << failures << "," << mean << ","
           << std::sqrt(std::max(0.0, var)) << "," << (optimum.value - mean) / optimum.value
           << "," << optimum.value << "\n";
  }
  return 0;
}

struct FleetArgs {
  std::string scenario, out;
};

int cmd_fleet_size(const FleetArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  const auto& params = require_static(scenario, "fleet-size");
  rs::FleetSizingResult result = rs::min_fleet(params);
  if (result.triangle_ok) result = rs::repair_diagonal(result, params);

  json manifest{{"command", "fleet-size"}, {"scenario", args.scenario}};
  Report report(args.out, manifest);
  report << "slot,section,i,j,value\n";
  report << ",kappa,,," << result.kappa << "\n";
  report << ",verdict,,," << (result.kappa > 1.0 ? "undersupply" : "oversupply") << "\n";
  report << ",triangle_ok,,," << (result.triangle_ok ? 1 : 0) << "\n";
  write_matrix_rows(report, "q", result.q_kappa.q);
  write_matrix_rows(report, "e", result.e_kappa);
  write_matrix_rows(report, "f", result.f_kappa);
  return 0;
}

struct FluidArgs {
  std::string scenario, q = "optimal", init = "proportional", out;
  double t_end = 200, dt = 1e-3;
};

int cmd_fluid(const FluidArgs& args) {
  rs::Scenario scenario = load_scenario_ref(args.scenario);
  const auto& params = require_static(scenario, "fluid");
  rs::RoutingMatrix routing = resolve_routing(args.q, params);
  rs::EquilibriumPoint point = rs::equilibrium_point(params, routing);

  const int r = params.regions;
  rs::FluidState init{rs::Matrix(r), rs::Matrix(r)};
  if (args.init == "equilibrium") {
    init.e = point.e_bar;
    init.f = point.f_bar;
  } else if (args.init == "proportional") {
    rs::SystemState cars = rs::initial_state_proportional(params);
    for (int i = 0; i < r; ++i)
      init.e(i, i) = static_cast<double>(cars.e_count(i, i)) / params.n_cars;
  } else if (args.init.rfind("idle:", 0) == 0) {
    int region = std::stoi(args.init.substr(5));
    if (region < 0 || region >= r) throw ValidationFailure("--init idle region out of range");
    init.e(region, region) = 1.0;
  } else if (args.init.rfind("random:", 0) == 0) {
    init = rs::random_fluid_state(r, std::stoull(args.init.substr(7)));
  } else {
    throw ValidationFailure("--init must be equilibrium|proportional|idle:<r>|random:<seed>");
  }

  rs::IntegrateOptions options;
  options.t_end = args.t_end;
  options.dt = args.dt;
  options.monitor = &point;
  rs::FluidTrajectory traj = rs::integrate(init, params, routing, options);

  json manifest{{"command", "fluid"}, {"scenario", args.scenario}, {"q", args.q},
                {"init", args.init}, {"t_end", args.t_end}, {"dt", args.dt}};
  Report report(args.out, manifest);
  report << "time";
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) report << ",e_" << i << "_" << j;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) report << ",f_" << i << "_" << j;
  for (int i = 0; i < r; ++i) report << ",u_" << i;
  report << ",mass,lyapunov,distance\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    report << traj.times[k];
    for (double v : traj.states[k].e.data()) report << "," << v;
    for (double v : traj.states[k].f.data()) report << "," << v;
    for (double v : traj.u[k]) report << "," << v;
    report << "," << traj.states[k].mass() << "," << traj.lyapunov_values[k] << ","
           << traj.distances[k] << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-network ridesharing analysis: exact MVA, event simulation, "
               "fluid optimization, fluid ODE, and fleet sizing"};
  app.require_subcommand(1);

  OptimizeArgs optimize_args;
  auto* optimize = app.add_subcommand("optimize", "solve the fluid routing optimization");
  optimize->add_option("scenario", optimize_args.scenario, "path or builtin:<name>")->required();
  optimize->add_option("--rewards", optimize_args.rewards_path, "scenario file carrying rewards");
  optimize->add_option("--out", optimize_args.out, "solution CSV ('-' for stdout)");
  optimize->add_option("--q-out", optimize_args.q_out, "routing matrix CSV");

  MvaArgs mva_args;
  auto* mva = app.add_subcommand("mva", "exact stationary availability via mean value analysis");
  mva->add_option("scenario", mva_args.scenario)->required();
  mva->add_option("--q", mva_args.q, "optimal|identity|backhaul|file|inline JSON");
  mva->add_option("--n-list", mva_args.n_list, "comma-separated populations");
  mva->add_option("--out", mva_args.out);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "event-driven simulation of the car chain");
  simulate->add_option("scenario", sim_args.scenario)->required();
  simulate->add_option("--policy", sim_args.policy, "static|jlcr:<eta>|sw|lookahead:<T>,<delta>|standard");
  simulate->add_option("--q", sim_args.q, "routing for --policy static");
  simulate->add_option("--n", sim_args.n, "override car count");
  simulate->add_option("--horizon", sim_args.horizon);
  simulate->add_option("--warmup", sim_args.warmup, "negative: 10% of horizon");
  simulate->add_option("--seed", sim_args.seed);
  simulate->add_option("--reps", sim_args.reps);
  simulate->add_option("--travel", sim_args.travel, "exponential|deterministic");
  simulate->add_option("--bucket", sim_args.bucket, "per-bucket tallies of this width");
  simulate->add_option("--out", sim_args.out);

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "utility table across policies and fleet sizes");
  compare->add_option("scenario", compare_args.scenario)->required();
  compare->add_option("--policies", compare_args.policies);
  compare->add_option("--n-list", compare_args.n_list);
  compare->add_option("--horizon", compare_args.horizon);
  compare->add_option("--warmup", compare_args.warmup);
  compare->add_option("--seed", compare_args.seed);
  compare->add_option("--reps", compare_args.reps);
  compare->add_option("--out", compare_args.out);

  LookaheadEvalArgs look_args;
  auto* lookahead = app.add_subcommand("lookahead-eval",
                                       "per-hour utility of lookahead vs per-slot routing");
  lookahead->add_option("scenario", look_args.scenario)->required();
  lookahead->add_option("--t-list", look_args.t_list, "lookahead horizons");
  lookahead->add_option("--delta", look_args.delta, "re-solve spacing");
  lookahead->add_option("--bucket", look_args.bucket, "report bucket width");
  lookahead->add_option("--n", look_args.n);
  lookahead->add_option("--reps", look_args.reps);
  lookahead->add_option("--seed", look_args.seed);
  lookahead->add_option("--travel", look_args.travel);
  lookahead->add_option("--warmup", look_args.warmup);
  lookahead->add_option("--out", look_args.out);

  RobustnessArgs robust_args;
  auto* robustness = app.add_subcommand("robustness",
                                        "performance of routing computed from noisy parameters");
  robustness->add_option("scenario", robust_args.scenario)->required();
  robustness->add_option("--sigma-list", robust_args.sigma_list);
  robustness->add_option("--reps", robust_args.reps);
  robustness->add_option("--seed", robust_args.seed);
  robustness->add_option("--out", robust_args.out);

  FleetArgs fleet_args;
  auto* fleet = app.add_subcommand("fleet-size", "minimum fluid mass for full availability");
  fleet->add_option("scenario", fleet_args.scenario)->required();
  fleet->add_option("--out", fleet_args.out);

  FluidArgs fluid_args;
  auto* fluid = app.add_subcommand("fluid", "integrate the fluid model and track convergence");
  fluid->add_option("scenario", fluid_args.scenario)->required();
  fluid->add_option("--q", fluid_args.q);
  fluid->add_option("--t-end", fluid_args.t_end);
  fluid->add_option("--dt", fluid_args.dt);
  fluid->add_option("--init", fluid_args.init, "equilibrium|proportional|idle:<r>|random:<seed>");
  fluid->add_option("--out", fluid_args.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize) return cmd_optimize(optimize_args);
    if (*mva) return cmd_mva(mva_args);
    if (*simulate) return cmd_simulate(sim_args);
    if (*compare) return cmd_compare(compare_args);
    if (*lookahead) return cmd_lookahead_eval(look_args);
    if (*robustness) return cmd_robustness(robust_args);
    if (*fleet) return cmd_fleet_size(fleet_args);
    if (*fluid) return cmd_fluid(fluid_args);
  } catch (const ValidationFailure& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const rs::SolverError& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolver;
  } catch (const rs::SimulationError& err) {
    std::cerr << "simulation error: " << err.what() << "\n";
    return kExitSimulation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
