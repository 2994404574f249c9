#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chansim/game.hpp"

namespace chansim {

// Time-indexed record of one simulation run.
struct RunTrace {
  int num_users = 0;
  int num_channels = 0;
  std::vector<int> occupancy;             // stride num_channels
  std::vector<double> realized_welfare;   // sum of delivered payoffs
  std::vector<double> expected_welfare;   // sum_j mu_j K_j g_j(K_j)
  std::vector<std::uint8_t> explore_flag; // stride num_users
  std::uint64_t seed = 0;
  std::string spec_id;

  std::int64_t length() const { return static_cast<std::int64_t>(realized_welfare.size()); }
  std::span<const int> occupancy_at(std::int64_t t) const {  // t is 0-based here
    return {occupancy.data() + t * num_channels, static_cast<std::size_t>(num_channels)};
  }
  int explore_count(std::int64_t t) const;
};

struct RegretCurve {
  std::vector<double> regret_expected;   // prefix sums of v* - expected welfare
  std::vector<double> regret_realized;   // prefix sums of v* - realized welfare
  std::vector<double> fraction_optimal;  // cumulative fraction of steps at k*
};

RegretCurve regret(const RunTrace& trace, const OptimalSolution& optimum);

// Least-squares slope of log(value) vs log(time) over the trailing `window`
// points. Throws std::domain_error on nonpositive values in the window.
double exponent_fit(const std::vector<double>& times, const std::vector<double>& values,
                    std::size_t window);

// exp(-2 n eps^2)
double hoeffding_bound(std::int64_t n, double eps);

struct PowerSumBounds {
  double lower = 0.0;
  double sum = 0.0;
  double upper = 0.0;
};

// ((n+1)^{1-p}-1)/(1-p) < sum_{t=1}^n t^{-p} < 1 + (n^{1-p}-1)/(1-p),
// valid for p > 0, p != 1.
PowerSumBounds power_sum_bounds(std::int64_t n, double p);

// Exact C(n, k); 0 when k < 0 or k > n. Throws on uint64 overflow.
std::uint64_t binomial(int n, int k);

// p_l = C(M-1,l-1) C(M+N-l-2,N-2) / C(M+N-1,N-1), exact integer arithmetic
// before conversion. Requires N >= 2.
double occupancy_weight(int num_users, int num_channels, int l);

// Smallest t with, for all l in 1..M:
//   p_l ((t+1)^{1/2+gamma} - 1) / (t (1/2+gamma)) - a ln t / (t eps^2) >= t^{-1/2+gamma'}.
// Found by doubling plus bisection; for thresholds beyond 2^53 the boundary is
// resolved to double precision. Throws when the cap is exceeded.
double tau_threshold(int num_users, int num_channels, double eps, double gamma,
                     double gamma_prime, double a, double cap = 1e24);

// C(M+z*-1, z*-1) - 1, exact.
double settle_expectation(int num_users, int z_star);

struct ExplorationBudget {
  double exact_sum = 0.0;    // sum_t 1 - (1 - t^{-(1/2M)+gamma/M})^M
  double upper_bound = 0.0;  // M * power-sum upper bound
};

ExplorationBudget bad_step_budget(std::int64_t n, int num_users, double gamma);

}  // namespace chansim
