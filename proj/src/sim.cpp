#include "chansim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <memory>
#include <stdexcept>

#include "chansim/io.hpp"

namespace chansim {

namespace {

bool compatible(AgentKind agent, CaseKind c) {
  return (agent == AgentKind::kExp3 && c == CaseKind::kC1) ||
         (agent == AgentKind::kRla && c == CaseKind::kC2) ||
         (agent == AgentKind::kRs && c == CaseKind::kC3);
}

}  // namespace

void ExperimentConfig::validate() const {
  spec.validate();
  if (horizon < 0) throw std::invalid_argument("ExperimentConfig: horizon must be >= 0");
  if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: at least one seed required");
  if (cadence < 0) throw std::invalid_argument("ExperimentConfig: cadence must be >= 0");
  if (case_kind == CaseKind::kC3 && !spec.is_case3())
    throw std::invalid_argument("ExperimentConfig: case C3 requires a case-3-valid spec");
  if (!compatible(agent.kind, case_kind) && !allow_case_mismatch)
    throw std::invalid_argument(
        "ExperimentConfig: agent/case pairing is Exp3-C1, RLA-C2, RS-C3; set "
        "allow_case_mismatch to override");
}

std::vector<std::int64_t> sample_times(std::int64_t horizon, std::int64_t cadence) {
  std::vector<std::int64_t> times;
  if (horizon <= 0) return times;
  if (cadence > 0) {
    for (std::int64_t t = cadence; t <= horizon; t += cadence) times.push_back(t);
    if (times.empty() || times.back() != horizon) times.push_back(horizon);
    return times;
  }
  // dense up to 1e4, then keep 4 significant digits of t
  const std::int64_t dense = std::min<std::int64_t>(horizon, 10'000);
  times.reserve(dense + 16'000);
  for (std::int64_t t = 1; t <= dense; ++t) times.push_back(t);
  std::int64_t step = 10;
  for (std::int64_t decade = 10'000; decade < horizon; decade *= 10, step *= 10)
    for (std::int64_t t = decade + step; t <= std::min(decade * 10, horizon); t += step)
      times.push_back(t);
  if (times.back() != horizon) times.push_back(horizon);
  return times;
}

RunTrace run_once(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const GameSpec& spec = config.spec;
  const int M = spec.num_users;
  const int N = spec.num_channels;

  Rng env_rng(derive_seed(seed, 0));
  std::vector<Rng> agent_rngs;
  std::vector<std::unique_ptr<Agent>> agents;
  agent_rngs.reserve(M);
  agents.reserve(M);
  for (int i = 0; i < M; ++i) {
    agent_rngs.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(i) + 1));
    agents.push_back(make_agent(config.agent, config.case_kind, spec));
  }

  RunTrace trace;
  trace.num_users = M;
  trace.num_channels = N;
  trace.seed = seed;
  trace.spec_id = spec.id();
  trace.occupancy.reserve(config.horizon * N);
  trace.realized_welfare.reserve(config.horizon);
  trace.expected_welfare.reserve(config.horizon);
  trace.explore_flag.reserve(config.horizon * M);

  ActionProfile profile(M);
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    for (int i = 0; i < M; ++i) profile[i] = agents[i]->act(t, agent_rngs[i]);
    const Allocation k = occupancy_of(profile, N);
    const auto rates = sample_rates(spec, env_rng);  // one shared draw per channel
    const auto payoffs = realized_payoffs(spec, profile, rates);

    double realized = 0.0;
    for (double h : payoffs) realized += h;
    trace.realized_welfare.push_back(realized);
    trace.expected_welfare.push_back(social_welfare(spec, k));
    trace.occupancy.insert(trace.occupancy.end(), k.begin(), k.end());
    for (int i = 0; i < M; ++i)
      trace.explore_flag.push_back(agents[i]->explored() ? 1 : 0);

    for (int i = 0; i < M; ++i) {
      Feedback fb;
      fb.payoff = payoffs[i];
      if (config.case_kind == CaseKind::kC2) fb.occupancy = k[profile[i]];
      agents[i]->observe(fb);
    }
  }
  return trace;
}

namespace {

struct SeedCurves {
  RegretCurve curve;
};

BatchResult aggregate(const ExperimentConfig& config, const OptimalSolution& optimum,
                      const std::vector<RegretCurve>& curves,
                      const std::vector<RunTrace>& traces) {
  BatchResult result;
  result.optimum = optimum;
  result.times = sample_times(config.horizon, config.cadence);
  const std::size_t rows = result.times.size();
  const double num_seeds = static_cast<double>(curves.size());

  auto mean_std = [&](auto getter, std::vector<double>& mean, std::vector<double>& stdev) {
    mean.assign(rows, 0.0);
    stdev.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t idx = static_cast<std::size_t>(result.times[r]) - 1;
      double s = 0.0, ss = 0.0;
      for (const RegretCurve& c : curves) {
        const double v = getter(c)[idx];
        s += v;
        ss += v * v;
      }
      mean[r] = s / num_seeds;
      stdev[r] = curves.size() > 1
                     ? std::sqrt(std::max(0.0, (ss - s * s / num_seeds) / (num_seeds - 1.0)))
                     : 0.0;
    }
  };
  mean_std([](const RegretCurve& c) -> const std::vector<double>& { return c.regret_expected; },
           result.regret_expected_mean, result.regret_expected_std);
  mean_std([](const RegretCurve& c) -> const std::vector<double>& { return c.regret_realized; },
           result.regret_realized_mean, result.regret_realized_std);
  std::vector<double> unused;
  mean_std([](const RegretCurve& c) -> const std::vector<double>& { return c.fraction_optimal; },
           result.fraction_optimal_mean, unused);

  if (!result.fraction_optimal_mean.empty())
    result.final_fraction_optimal_mean = result.fraction_optimal_mean.back();

  // fraction of steps at k* within (horizon/10, horizon], averaged over seeds
  if (config.horizon > 0) {
    const std::int64_t lo = config.horizon / 10;
    double acc = 0.0;
    for (const RunTrace& trace : traces) {
      std::int64_t optimal_steps = 0;
      for (std::int64_t t = lo; t < config.horizon; ++t) {
        const auto occ = trace.occupancy_at(t);
        if (std::equal(occ.begin(), occ.end(), optimum.k_star.begin())) ++optimal_steps;
      }
      acc += static_cast<double>(optimal_steps) / static_cast<double>(config.horizon - lo);
    }
    result.final_decade_fraction_optimal = acc / num_seeds;
  }

  // exponent of the mean expected-welfare regret over the trailing half
  result.exponent = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> fit_times, fit_values;
  for (std::size_t r = 0; r < rows; ++r) {
    if (result.times[r] * 2 >= config.horizon) {
      fit_times.push_back(static_cast<double>(result.times[r]));
      fit_values.push_back(result.regret_expected_mean[r]);
    }
  }
  if (fit_times.size() >= 2) {
    try {
      result.exponent = exponent_fit(fit_times, fit_values, fit_times.size());
    } catch (const std::domain_error&) {
      // nonpositive regret in the window; fraction-optimal reported instead
    }
  }
  return result;
}

}  // namespace

BatchResult run_batch(const ExperimentConfig& config) {
  config.validate();
  const OptimalSolution optimum = socially_optimal(config.spec);

  std::vector<std::future<RunTrace>> futures;
  futures.reserve(config.seeds.size());
  for (std::uint64_t seed : config.seeds)
    futures.push_back(
        std::async(std::launch::async, [&config, seed] { return run_once(config, seed); }));

  std::vector<RunTrace> traces;
  std::vector<RegretCurve> curves;
  traces.reserve(config.seeds.size());
  for (auto& f : futures) {
    traces.push_back(f.get());
    curves.push_back(regret(traces.back(), optimum));
  }
  return aggregate(config, optimum, curves, traces);
}

BatchResult run_batch_to_dir(const ExperimentConfig& config, const std::string& out_dir) {
  config.validate();
  const OptimalSolution optimum = socially_optimal(config.spec);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("run_batch: cannot create output directory '" + out_dir +
                             "': " + ec.message());

  std::vector<std::future<RunTrace>> futures;
  for (std::uint64_t seed : config.seeds)
    futures.push_back(
        std::async(std::launch::async, [&config, seed] { return run_once(config, seed); }));

  const auto times = sample_times(config.horizon, config.cadence);
  std::vector<RunTrace> traces;
  std::vector<RegretCurve> curves;
  for (std::size_t s = 0; s < futures.size(); ++s) {
    traces.push_back(futures[s].get());
    curves.push_back(regret(traces.back(), optimum));

    const auto path = fs::path(out_dir) / ("curve_seed" + std::to_string(config.seeds[s]) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("run_batch: cannot write '" + path.string() + "'");
    out << "t,regret_expected,regret_realized,frac_optimal\n";
    const RegretCurve& c = curves.back();
    for (std::int64_t t : times) {
      const auto idx = static_cast<std::size_t>(t) - 1;
      out << t << ',' << format_double(c.regret_expected[idx]) << ','
          << format_double(c.regret_realized[idx]) << ','
          << format_double(c.fraction_optimal[idx]) << '\n';
    }
  }

  BatchResult result = aggregate(config, optimum, curves, traces);

  {
    const auto path = fs::path(out_dir) / "aggregate.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("run_batch: cannot write '" + path.string() + "'");
    out << "t,regret_expected_mean,regret_expected_std,regret_realized_mean,"
           "regret_realized_std,frac_optimal_mean\n";
    for (std::size_t r = 0; r < result.times.size(); ++r)
      out << result.times[r] << ',' << format_double(result.regret_expected_mean[r]) << ','
          << format_double(result.regret_expected_std[r]) << ','
          << format_double(result.regret_realized_mean[r]) << ','
          << format_double(result.regret_realized_std[r]) << ','
          << format_double(result.fraction_optimal_mean[r]) << '\n';
  }

  {
    nlohmann::json summary;
    summary["spec_id"] = config.spec.id();
    summary["optimum"] = optimum_to_json(optimum);
    summary["horizon"] = config.horizon;
    summary["seeds"] = config.seeds;
    summary["exponent"] = std::isnan(result.exponent)
                              ? nlohmann::json()
                              : nlohmann::json(result.exponent);
    summary["final_fraction_optimal_mean"] = result.final_fraction_optimal_mean;
    summary["final_decade_fraction_optimal"] = result.final_decade_fraction_optimal;
    const auto path = fs::path(out_dir) / "summary.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("run_batch: cannot write '" + path.string() + "'");
    out << summary.dump(2) << '\n';
  }
  return result;
}

}  // namespace chansim
