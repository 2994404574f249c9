#pragma once

#include <cstdint>
#include <vector>

#include "chansim/game.hpp"
#include "chansim/rng.hpp"

namespace chansim {

struct EquilibriumReport {
  std::vector<ActionProfile> pne_profiles;
  std::vector<Allocation> pne_occupancies;  // deduplicated
  std::vector<double> potential_values;     // one per PNE profile
  bool contains_optimum = false;            // some PNE occupancy equals k*
};

// mu_j g_j(n_j) for the channel picked by `user`.
double expected_utility(const GameSpec& spec, const ActionProfile& profile, int user);

// Rosenthal potential: sum_j sum_{l=1}^{K_j} mu_j g_j(l).
double rosenthal_potential(const GameSpec& spec, const ActionProfile& profile);

// No user has a strictly improving unilateral deviation (threshold 1e-12).
bool is_pne(const GameSpec& spec, const ActionProfile& profile);

// Exhaustive scan over all N^M profiles. Throws when N^M exceeds cap.
EquilibriumReport enumerate_pne(const GameSpec& spec, std::uint64_t cap = 1'000'000);

// Asynchronous better-reply path: random user, random improving move,
// strictly increasing potential, terminates at a PNE.
std::vector<ActionProfile> best_response_path(const GameSpec& spec, ActionProfile start,
                                              Rng& rng);

}  // namespace chansim
