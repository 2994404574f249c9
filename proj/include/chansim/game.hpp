#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chansim/rng.hpp"

namespace chansim {

// Occupancy vector k = (k_1..k_N), sums to the number of users.
using Allocation = std::vector<int>;
// Per-user channel choice, 0-based channel indices.
using ActionProfile = std::vector<int>;

enum class RateKind { kConstant, kBernoulli, kUniform };

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

// Environment model: M users, N channels, mean rates and per-occupancy
// interference tables.
struct GameSpec {
  int num_users = 0;
  int num_channels = 0;
  std::vector<double> means;                      // mu_j in [0,1]
  std::vector<std::vector<double>> interference;  // g[j][n-1] for n in 1..M
  RateKind rate_kind = RateKind::kConstant;

  // Throws std::invalid_argument on malformed fields.
  void validate() const;

  // Constant rates, mu_j > 0, every g_j strictly decreasing in occupancy.
  bool is_case3() const;

  // v_j(k) = mu_j g_j(k), occupancy k in 1..M.
  double value(int channel, int occupancy) const {
    return means[channel] * interference[channel][occupancy - 1];
  }

  std::string id() const;
};

struct OptimalSolution {
  Allocation k_star;
  double v_star = 0.0;
  std::vector<double> v_star_j;  // per-user payoff per channel; NaN where k*_j = 0
  int support = 0;               // z*: channels with k*_j >= 1
  double margin = 0.0;           // certified stability margin; 0 when tied
  std::vector<Allocation> ties;  // co-optimal allocations other than k_star
};

int count_users(const ActionProfile& profile, int channel);
Allocation occupancy_of(const ActionProfile& profile, int num_channels);

// One draw of the channel rate vector r_j(t), shared by all users in a round.
std::vector<double> sample_rates(const GameSpec& spec, Rng& rng);

// Per-user payoff r_{sigma_i} g_{sigma_i}(occupancy of sigma_i).
std::vector<double> realized_payoffs(const GameSpec& spec, const ActionProfile& profile,
                                     const std::vector<double>& rates);

// C(M+N-1, N-1); throws on overflow.
std::uint64_t composition_count(int users, int channels);

// All compositions of `users` into `channels` nonnegative parts, first part
// descending, so (M,0,...,0) comes first. Throws when the count exceeds cap.
std::vector<Allocation> enumerate_allocations(int users, int channels,
                                              std::uint64_t cap = kDefaultEnumerationCap);

double social_welfare(const GameSpec& spec, const Allocation& k);

// sum_j k_j * value[j][k_j - 1]; empty channels contribute 0.
double table_welfare(const std::vector<std::vector<double>>& value, const Allocation& k);

// Lexicographically-first argmax of table_welfare over all allocations.
Allocation best_allocation(const std::vector<std::vector<double>>& value, int users);

OptimalSolution socially_optimal(const GameSpec& spec,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// Certified lower bound: min over suboptimal k of (v* - welfare(k)) / (2M).
// Throws std::runtime_error when the optimum is not unique.
double stability_margin(const GameSpec& spec);

}  // namespace chansim
