#pragma once

#include <cstdint>
#include <vector>

#include "chansim/game.hpp"

namespace chansim {

// Mixed strategy profile, one probability row per user.
struct MixedProfile {
  int num_users = 0;
  int num_channels = 0;
  std::vector<double> p;  // row-major M x N

  double& at(int user, int channel) { return p[user * num_channels + channel]; }
  double at(int user, int channel) const { return p[user * num_channels + channel]; }

  // Rows sum to 1 within 1e-10, entries nonnegative.
  void validate() const;

  static MixedProfile uniform(int num_users, int num_channels);
  static MixedProfile pure(const ActionProfile& profile, int num_channels);
};

enum class LimitKind { kPurePne, kPureNonPne, kMixed, kNotConverged };

const char* to_string(LimitKind kind);

struct TrajectoryResult {
  MixedProfile final_profile;
  bool converged = false;
  LimitKind limit_kind = LimitKind::kNotConverged;
  std::vector<double> potential_trace;  // expected Rosenthal potential, per step
  std::int64_t steps = 0;
  double final_field_norm = 0.0;
  double max_simplex_drift = 0.0;  // worst |row sum - 1| seen before projection
};

// PMF of a sum of independent Bernoulli(probs[i]) over 0..probs.size(),
// exact dynamic-programming convolution.
std::vector<double> poisson_binomial(const std::vector<double>& probs);

// gbar_ij = sum_k P(K'_j(i) = k) g_j(k+1), K'_j(i) the occupancy of channel j
// by users other than i.
double expected_interference(const GameSpec& spec, const MixedProfile& profile, int user,
                             int channel);

// xi_ij = (1/N) p_ij sum_l p_il (ubar_ij - ubar_il), ubar_ij = mu_j gbar_ij.
// Row-major M x N.
std::vector<double> replicator_rhs(const GameSpec& spec, const MixedProfile& profile);

// E[phi(sigma)] under the product distribution of the profile.
double expected_potential(const GameSpec& spec, const MixedProfile& profile);

// Fixed-step RK4 with post-step projection onto the simplex. Converged when
// max|xi| < convergence_tol. Throws on non-finite values.
TrajectoryResult integrate(const GameSpec& spec, MixedProfile start, double step,
                           double horizon, double convergence_tol = 1e-9,
                           double purity_tol = 1e-6);

enum class Stability { kStable, kUnstable, kDegenerate };

const char* to_string(Stability s);

// Numeric Jacobian of the replicator field at a fixed point, classified by
// eigenvalue real parts. Throws if the profile is not a fixed point.
Stability jacobian_stability(const GameSpec& spec, const MixedProfile& fixed_point,
                             double fd_step = 1e-6, double eig_tol = 1e-6);

}  // namespace chansim
