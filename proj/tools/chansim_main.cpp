#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chansim/analysis.hpp"
#include "chansim/congestion.hpp"
#include "chansim/io.hpp"
#include "chansim/replicator.hpp"
#include "chansim/sim.hpp"

namespace {

using namespace chansim;

int cmd_simulate(const std::string& config_path, std::int64_t seed_override,
                 std::int64_t horizon_override, const std::string& out_override) {
  ExperimentConfig config = load_config(config_path);
  if (seed_override >= 0) config.seeds = {static_cast<std::uint64_t>(seed_override)};
  if (horizon_override >= 0) config.horizon = horizon_override;
  const std::string out_dir = out_override.empty() ? config.output_dir : out_override;

  const BatchResult result = run_batch_to_dir(config, out_dir);
  std::cout << "wrote " << config.seeds.size() << " curve(s) to " << out_dir << "\n";
  std::cout << "v_star=" << result.optimum.v_star
            << " final_frac_optimal=" << result.final_fraction_optimal_mean
            << " final_decade_frac_optimal=" << result.final_decade_fraction_optimal;
  if (!std::isnan(result.exponent)) std::cout << " exponent=" << result.exponent;
  std::cout << "\n";
  return 0;
}

int cmd_optimal(const std::string& spec_path) {
  const GameSpec spec = load_spec(spec_path);
  const OptimalSolution opt = socially_optimal(spec);
  std::cout << optimum_to_json(opt).dump(2) << "\n";
  if (!opt.ties.empty())
    std::cerr << "warning: optimum is tied across " << opt.ties.size() + 1
              << " allocations; experiments on this spec should be flagged\n";
  return 0;
}

int cmd_pne(const std::string& spec_path, bool csv) {
  const GameSpec spec = load_spec(spec_path);
  const EquilibriumReport report = enumerate_pne(spec);
  std::cout << (csv ? equilibrium_to_csv(report) : equilibrium_to_json_lines(report));
  return 0;
}

int cmd_replicator(const std::string& spec_path, int starts, double step, double horizon,
                   std::uint64_t seed, const std::string& out_dir) {
  const GameSpec spec = load_spec(spec_path);
  Rng rng(seed);

  std::ofstream traces;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    traces.open(std::filesystem::path(out_dir) / "potential_traces.csv");
    traces << "start,step_index,potential\n";
  }
  std::cout << "start,limit_kind,converged,steps,final_field_norm,final_potential\n";
  for (int s = 0; s < starts; ++s) {
    MixedProfile p = MixedProfile::uniform(spec.num_users, spec.num_channels);
    for (int i = 0; i < spec.num_users; ++i) {
      double row = 0.0;
      for (int j = 0; j < spec.num_channels; ++j) {
        p.at(i, j) = 0.05 + rng.uniform01();
        row += p.at(i, j);
      }
      for (int j = 0; j < spec.num_channels; ++j) p.at(i, j) /= row;
    }
    const TrajectoryResult result = integrate(spec, p, step, horizon);
    if (traces.is_open())
      for (std::size_t k = 0; k < result.potential_trace.size(); ++k)
        traces << s << ',' << k << ',' << format_double(result.potential_trace[k]) << '\n';
    std::cout << s << ',' << to_string(result.limit_kind) << ','
              << (result.converged ? 1 : 0) << ',' << result.steps << ','
              << format_double(result.final_field_norm) << ','
              << format_double(result.potential_trace.back()) << '\n';
  }
  return 0;
}

int cmd_bounds(int users, int channels, double eps, double gamma, double gamma_prime, double a,
               std::int64_t horizon, int z_star) {
  if (!(gamma_prime < gamma)) {
    std::cerr << "error: bounds requires gamma_prime < gamma\n";
    return 1;
  }
  nlohmann::json line;

  line = {{"quantity", "tau"},
          {"value", tau_threshold(users, channels, eps, gamma, gamma_prime, a)}};
  std::cout << line.dump() << '\n';

  line = {{"quantity", "settle_expectation"}, {"value", settle_expectation(users, z_star)}};
  std::cout << line.dump() << '\n';

  for (int l = 1; l <= users; ++l) {
    line = {{"quantity", "occupancy_weight"},
            {"l", l},
            {"value", occupancy_weight(users, channels, l)}};
    std::cout << line.dump() << '\n';
  }

  const auto budget = bad_step_budget(horizon, users, gamma);
  line = {{"quantity", "exploration_budget"},
          {"n", horizon},
          {"exact_sum", budget.exact_sum},
          {"upper_bound", budget.upper_bound}};
  std::cout << line.dump() << '\n';

  for (double p : {0.25, 0.5, 0.75, 1.5, 2.0}) {
    const auto b = power_sum_bounds(horizon, p);
    line = {{"quantity", "power_sum"}, {"p", p},    {"n", horizon},
            {"lower", b.lower},        {"sum", b.sum}, {"upper", b.upper}};
    std::cout << line.dump() << '\n';
  }

  for (std::int64_t n : {std::int64_t{10}, std::int64_t{100}, std::int64_t{1000}}) {
    line = {{"quantity", "hoeffding"}, {"n", n}, {"eps", eps},
            {"value", hoeffding_bound(n, eps)}};
    std::cout << line.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decentralized multi-user channel allocation: simulation and analysis"};
  app.require_subcommand(1);

  std::string config_path, spec_path, out_dir;
  std::int64_t seed_override = -1, horizon_override = -1;

  auto* simulate = app.add_subcommand("simulate", "run a seeded Monte Carlo batch");
  simulate->add_option("--config", config_path, "experiment config (JSON)")->required();
  simulate->add_option("--seed", seed_override, "replace the config's seed list");
  simulate->add_option("--horizon", horizon_override, "override the horizon");
  simulate->add_option("--out", out_dir, "override the output directory");

  auto* optimal = app.add_subcommand("optimal", "print the socially optimal allocation");
  optimal->add_option("--spec", spec_path, "game spec (JSON)")->required();

  bool pne_csv = false;
  auto* pne = app.add_subcommand("pne", "enumerate pure Nash equilibria");
  pne->add_option("--spec", spec_path, "game spec (JSON)")->required();
  pne->add_flag("--csv", pne_csv, "emit CSV instead of JSON lines");

  int rep_starts = 10;
  double rep_step = 0.5, rep_horizon = 20000.0;
  std::uint64_t rep_seed = 1;
  auto* replicator = app.add_subcommand("replicator", "integrate replicator trajectories");
  replicator->add_option("--spec", spec_path, "game spec (JSON)")->required();
  replicator->add_option("--starts", rep_starts, "number of random interior starts");
  replicator->add_option("--step", rep_step, "integration step");
  replicator->add_option("--horizon", rep_horizon, "integration horizon (time units)");
  replicator->add_option("--seed", rep_seed, "seed for the random starts");
  replicator->add_option("--out", out_dir, "directory for potential traces");

  int b_users = 2, b_channels = 2, b_zstar = 2;
  double b_eps = 0.05, b_gamma = 0.02, b_gamma_prime = 0.01, b_a = 1.0;
  std::int64_t b_horizon = 10000;
  auto* bounds = app.add_subcommand("bounds", "print bound quantities as JSON lines");
  bounds->add_option("--users", b_users, "number of users M");
  bounds->add_option("--channels", b_channels, "number of channels N");
  bounds->add_option("--eps", b_eps, "estimation accuracy epsilon");
  bounds->add_option("--gamma", b_gamma, "exponent shift gamma");
  bounds->add_option("--gamma-prime", b_gamma_prime, "secondary shift gamma' < gamma");
  bounds->add_option("--a", b_a, "log-term constant a");
  bounds->add_option("--horizon", b_horizon, "horizon for sums");
  bounds->add_option("--zstar", b_zstar, "support size of the optimal allocation");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(config_path, seed_override, horizon_override, out_dir);
    if (optimal->parsed()) return cmd_optimal(spec_path);
    if (pne->parsed()) return cmd_pne(spec_path, pne_csv);
    if (replicator->parsed())
      return cmd_replicator(spec_path, rep_starts, rep_step, rep_horizon, rep_seed, out_dir);
    if (bounds->parsed())
      return cmd_bounds(b_users, b_channels, b_eps, b_gamma, b_gamma_prime, b_a, b_horizon,
                        b_zstar);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
