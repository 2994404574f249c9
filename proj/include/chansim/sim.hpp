#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chansim/analysis.hpp"
#include "chansim/game.hpp"
#include "chansim/learners.hpp"

namespace chansim {

struct ExperimentConfig {
  GameSpec spec;
  CaseKind case_kind = CaseKind::kC1;
  AgentParams agent;
  std::int64_t horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
  // 0 = every step up to 1e4, then log-spaced (4 significant digits of t).
  std::int64_t cadence = 0;
  bool allow_case_mismatch = false;

  void validate() const;
};

// Subsampling grid for curve output.
std::vector<std::int64_t> sample_times(std::int64_t horizon, std::int64_t cadence);

// One synchronous-round simulation: all agents act, one shared rate draw per
// channel, payoffs and case-appropriate feedback delivered. Bit-reproducible
// per (config, seed).
RunTrace run_once(const ExperimentConfig& config, std::uint64_t seed);

struct BatchResult {
  OptimalSolution optimum;
  std::vector<std::int64_t> times;
  std::vector<double> regret_expected_mean, regret_expected_std;
  std::vector<double> regret_realized_mean, regret_realized_std;
  std::vector<double> fraction_optimal_mean;
  // Slope of mean expected-welfare regret over the trailing half of the
  // horizon; NaN when the fit is undefined (nonpositive regret in window).
  double exponent = 0.0;
  double final_fraction_optimal_mean = 0.0;        // cumulative, at the horizon
  double final_decade_fraction_optimal = 0.0;      // within (horizon/10, horizon]
};

// Runs every seed (parallel fan-out), aggregates curves in seed order.
BatchResult run_batch(const ExperimentConfig& config);

// Same, plus CSV/JSON artifacts under out_dir:
//   curve_seed<seed>.csv : t,regret_expected,regret_realized,frac_optimal
//   aggregate.csv        : t + mean/std columns
//   summary.json         : optimum, exponent, fractions, seeds
BatchResult run_batch_to_dir(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace chansim
