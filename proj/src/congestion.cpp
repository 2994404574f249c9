#include "chansim/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chansim {

namespace {

constexpr double kImprovementThreshold = 1e-12;

// Utility of `user` if it unilaterally moves to `target`, given current
// occupancies.
double deviation_utility(const GameSpec& spec, const ActionProfile& profile,
                         const Allocation& k, int user, int target) {
  const int occ = (profile[user] == target) ? k[target] : k[target] + 1;
  return spec.value(target, occ);
}

}  // namespace

double expected_utility(const GameSpec& spec, const ActionProfile& profile, int user) {
  const int j = profile[user];
  return spec.value(j, count_users(profile, j));
}

double rosenthal_potential(const GameSpec& spec, const ActionProfile& profile) {
  const Allocation k = occupancy_of(profile, spec.num_channels);
  double phi = 0.0;
  for (int j = 0; j < spec.num_channels; ++j)
    for (int l = 1; l <= k[j]; ++l) phi += spec.value(j, l);
  return phi;
}

bool is_pne(const GameSpec& spec, const ActionProfile& profile) {
  const Allocation k = occupancy_of(profile, spec.num_channels);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double current = spec.value(profile[i], k[profile[i]]);
    for (int c = 0; c < spec.num_channels; ++c) {
      if (c == profile[i]) continue;
      if (deviation_utility(spec, profile, k, static_cast<int>(i), c) >
          current + kImprovementThreshold)
        return false;
    }
  }
  return true;
}

EquilibriumReport enumerate_pne(const GameSpec& spec, std::uint64_t cap) {
  spec.validate();
  std::uint64_t total = 1;
  for (int i = 0; i < spec.num_users; ++i) {
    total *= static_cast<std::uint64_t>(spec.num_channels);
    if (total > cap) throw std::runtime_error("enumerate_pne: N^M exceeds scan cap");
  }

  EquilibriumReport report;
  ActionProfile profile(spec.num_users, 0);
  for (std::uint64_t idx = 0;; ++idx) {
    if (is_pne(spec, profile)) {
      report.pne_profiles.push_back(profile);
      report.potential_values.push_back(rosenthal_potential(spec, profile));
      Allocation k = occupancy_of(profile, spec.num_channels);
      if (std::find(report.pne_occupancies.begin(), report.pne_occupancies.end(), k) ==
          report.pne_occupancies.end())
        report.pne_occupancies.push_back(k);
    }
    // odometer increment
    int pos = 0;
    while (pos < spec.num_users) {
      if (++profile[pos] < spec.num_channels) break;
      profile[pos++] = 0;
    }
    if (pos == spec.num_users) break;
  }

  const OptimalSolution opt = socially_optimal(spec);
  report.contains_optimum =
      std::find(report.pne_occupancies.begin(), report.pne_occupancies.end(), opt.k_star) !=
      report.pne_occupancies.end();
  return report;
}

std::vector<ActionProfile> best_response_path(const GameSpec& spec, ActionProfile start,
                                              Rng& rng) {
  spec.validate();
  std::vector<ActionProfile> path{start};
  ActionProfile cur = std::move(start);

  // strict potential increase bounds the path by the number of profiles
  constexpr std::int64_t kSafetyCap = 10'000'000;
  for (std::int64_t iter = 0; iter < kSafetyCap; ++iter) {
    const Allocation k = occupancy_of(cur, spec.num_channels);
    std::vector<int> movers;
    for (int i = 0; i < spec.num_users; ++i) {
      const double current = spec.value(cur[i], k[cur[i]]);
      for (int c = 0; c < spec.num_channels; ++c) {
        if (c == cur[i]) continue;
        if (deviation_utility(spec, cur, k, i, c) > current + kImprovementThreshold) {
          movers.push_back(i);
          break;
        }
      }
    }
    if (movers.empty()) return path;

    const int user = movers[rng.uniform_int(static_cast<int>(movers.size()))];
    const double current = spec.value(cur[user], k[cur[user]]);
    std::vector<int> improving;
    for (int c = 0; c < spec.num_channels; ++c) {
      if (c == cur[user]) continue;
      if (deviation_utility(spec, cur, k, user, c) > current + kImprovementThreshold)
        improving.push_back(c);
    }
    cur[user] = improving[rng.uniform_int(static_cast<int>(improving.size()))];
    path.push_back(cur);
  }
  throw std::runtime_error("best_response_path: safety cap exceeded");
}

}  // namespace chansim
