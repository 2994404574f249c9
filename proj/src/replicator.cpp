#include "chansim/replicator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "chansim/congestion.hpp"

namespace chansim {

void MixedProfile::validate() const {
  if (static_cast<int>(p.size()) != num_users * num_channels)
    throw std::invalid_argument("MixedProfile: size mismatch");
  for (int i = 0; i < num_users; ++i) {
    double row = 0.0;
    for (int j = 0; j < num_channels; ++j) {
      if (at(i, j) < 0.0) throw std::invalid_argument("MixedProfile: negative entry");
      row += at(i, j);
    }
    if (std::abs(row - 1.0) > 1e-10)
      throw std::invalid_argument("MixedProfile: row does not sum to 1");
  }
}

MixedProfile MixedProfile::uniform(int num_users, int num_channels) {
  MixedProfile m{num_users, num_channels,
                 std::vector<double>(static_cast<std::size_t>(num_users) * num_channels,
                                     1.0 / num_channels)};
  return m;
}

MixedProfile MixedProfile::pure(const ActionProfile& profile, int num_channels) {
  MixedProfile m{static_cast<int>(profile.size()), num_channels,
                 std::vector<double>(profile.size() * num_channels, 0.0)};
  for (std::size_t i = 0; i < profile.size(); ++i) m.at(static_cast<int>(i), profile[i]) = 1.0;
  return m;
}

const char* to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::kPurePne: return "pure-PNE";
    case LimitKind::kPureNonPne: return "pure-non-PNE";
    case LimitKind::kMixed: return "mixed";
    case LimitKind::kNotConverged: return "not-converged";
  }
  return "?";
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::kStable: return "stable";
    case Stability::kUnstable: return "unstable";
    case Stability::kDegenerate: return "degenerate";
  }
  return "?";
}

std::vector<double> poisson_binomial(const std::vector<double>& probs) {
  std::vector<double> d(probs.size() + 1, 0.0);
  d[0] = 1.0;
  std::size_t upper = 0;
  for (double q : probs) {
    ++upper;
    for (std::size_t k = upper; k >= 1; --k) d[k] = d[k] * (1.0 - q) + d[k - 1] * q;
    d[0] *= (1.0 - q);
  }
  return d;
}

double expected_interference(const GameSpec& spec, const MixedProfile& profile, int user,
                             int channel) {
  std::vector<double> others;
  others.reserve(profile.num_users - 1);
  for (int m = 0; m < profile.num_users; ++m)
    if (m != user) others.push_back(profile.at(m, channel));
  const auto dist = poisson_binomial(others);
  double g = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k)
    g += dist[k] * spec.interference[channel][k];  // g_j(k+1)
  return g;
}

namespace {

// ubar[i][j] = mu_j gbar_ij for all users/channels
std::vector<double> expected_utilities(const GameSpec& spec, const MixedProfile& p) {
  std::vector<double> ubar(static_cast<std::size_t>(p.num_users) * p.num_channels);
  for (int i = 0; i < p.num_users; ++i)
    for (int j = 0; j < p.num_channels; ++j)
      ubar[i * p.num_channels + j] = spec.means[j] * expected_interference(spec, p, i, j);
  return ubar;
}

std::vector<double> rhs_of(const GameSpec& spec, const MixedProfile& p) {
  const auto ubar = expected_utilities(spec, p);
  std::vector<double> xi(ubar.size());
  for (int i = 0; i < p.num_users; ++i) {
    double avg = 0.0;
    for (int l = 0; l < p.num_channels; ++l)
      avg += p.at(i, l) * ubar[i * p.num_channels + l];
    for (int j = 0; j < p.num_channels; ++j)
      xi[i * p.num_channels + j] =
          p.at(i, j) * (ubar[i * p.num_channels + j] - avg) / p.num_channels;
  }
  return xi;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> replicator_rhs(const GameSpec& spec, const MixedProfile& profile) {
  spec.validate();
  return rhs_of(spec, profile);
}

double expected_potential(const GameSpec& spec, const MixedProfile& profile) {
  double phi = 0.0;
  for (int j = 0; j < profile.num_channels; ++j) {
    std::vector<double> qs(profile.num_users);
    for (int i = 0; i < profile.num_users; ++i) qs[i] = profile.at(i, j);
    const auto dist = poisson_binomial(qs);
    // tail[l] = P(K_j >= l)
    double tail = 0.0;
    std::vector<double> tails(dist.size());
    for (std::size_t k = dist.size(); k-- > 0;) {
      tail += dist[k];
      tails[k] = tail;
    }
    for (int l = 1; l <= profile.num_users; ++l)
      phi += spec.means[j] * tails[l] * spec.interference[j][l - 1];
  }
  return phi;
}

TrajectoryResult integrate(const GameSpec& spec, MixedProfile start, double step,
                           double horizon, double convergence_tol, double purity_tol) {
  spec.validate();
  start.validate();
  if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");

  const int M = start.num_users;
  const int N = start.num_channels;
  const std::size_t dim = start.p.size();
  MixedProfile p = std::move(start);
  MixedProfile scratch = p;

  TrajectoryResult result;
  result.potential_trace.push_back(expected_potential(spec, p));

  const auto max_steps = static_cast<std::int64_t>(horizon / step);
  std::vector<double> field = rhs_of(spec, p);
  for (std::int64_t s = 0; s < max_steps; ++s) {
    if (max_abs(field) < convergence_tol) {
      result.converged = true;
      break;
    }
    const auto& k1 = field;
    for (std::size_t d = 0; d < dim; ++d) scratch.p[d] = p.p[d] + 0.5 * step * k1[d];
    const auto k2 = rhs_of(spec, scratch);
    for (std::size_t d = 0; d < dim; ++d) scratch.p[d] = p.p[d] + 0.5 * step * k2[d];
    const auto k3 = rhs_of(spec, scratch);
    for (std::size_t d = 0; d < dim; ++d) scratch.p[d] = p.p[d] + step * k3[d];
    const auto k4 = rhs_of(spec, scratch);
    for (std::size_t d = 0; d < dim; ++d)
      p.p[d] += (step / 6.0) * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);

    // project back onto the simplex: clip, renormalize
    for (int i = 0; i < M; ++i) {
      double row = 0.0;
      for (int j = 0; j < N; ++j) row += p.at(i, j);
      result.max_simplex_drift = std::max(result.max_simplex_drift, std::abs(row - 1.0));
      row = 0.0;
      for (int j = 0; j < N; ++j) {
        if (p.at(i, j) < 0.0) p.at(i, j) = 0.0;
        row += p.at(i, j);
      }
      if (!(row > 0.0) || !std::isfinite(row))
        throw std::runtime_error("integrate: non-finite state (step too large)");
      for (int j = 0; j < N; ++j) p.at(i, j) /= row;
    }

    ++result.steps;
    result.potential_trace.push_back(expected_potential(spec, p));
    field = rhs_of(spec, p);
  }

  result.final_field_norm = max_abs(field);
  result.converged = result.converged || result.final_field_norm < convergence_tol;

  if (!result.converged) {
    result.limit_kind = LimitKind::kNotConverged;
  } else {
    bool pure = true;
    ActionProfile rounded(M);
    for (int i = 0; i < M; ++i) {
      int arg = 0;
      for (int j = 1; j < N; ++j)
        if (p.at(i, j) > p.at(i, arg)) arg = j;
      rounded[i] = arg;
      if (p.at(i, arg) < 1.0 - purity_tol) pure = false;
    }
    if (!pure)
      result.limit_kind = LimitKind::kMixed;
    else
      result.limit_kind =
          is_pne(spec, rounded) ? LimitKind::kPurePne : LimitKind::kPureNonPne;
  }

  result.final_profile = std::move(p);
  return result;
}

Stability jacobian_stability(const GameSpec& spec, const MixedProfile& fixed_point,
                             double fd_step, double eig_tol) {
  spec.validate();
  if (max_abs(rhs_of(spec, fixed_point)) >= 1e-9)
    throw std::invalid_argument("jacobian_stability: profile is not a fixed point");

  const int dim = fixed_point.num_users * fixed_point.num_channels;
  Eigen::MatrixXd jac(dim, dim);
  MixedProfile work = fixed_point;
  for (int col = 0; col < dim; ++col) {
    const double original = work.p[col];
    work.p[col] = original + fd_step;
    const auto plus = rhs_of(spec, work);
    work.p[col] = original - fd_step;
    const auto minus = rhs_of(spec, work);
    work.p[col] = original;
    for (int row = 0; row < dim; ++row)
      jac(row, col) = (plus[row] - minus[row]) / (2.0 * fd_step);
  }

  const Eigen::EigenSolver<Eigen::MatrixXd> solver(jac, /*computeEigenvectors=*/false);
  double max_re = -std::numeric_limits<double>::infinity();
  bool has_zero = false;
  for (int k = 0; k < dim; ++k) {
    const double re = solver.eigenvalues()[k].real();
    max_re = std::max(max_re, re);
    if (std::abs(re) <= eig_tol) has_zero = true;
  }
  if (max_re > eig_tol) return Stability::kUnstable;
  return has_zero ? Stability::kDegenerate : Stability::kStable;
}

}  // namespace chansim
