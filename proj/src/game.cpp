#include "chansim/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chansim {

namespace {

constexpr double kTieTolerance = 1e-12;

void check(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void GameSpec::validate() const {
  check(num_users >= 1, "GameSpec: num_users must be >= 1");
  check(num_channels >= 1, "GameSpec: num_channels must be >= 1");
  check(static_cast<int>(means.size()) == num_channels, "GameSpec: means size != num_channels");
  check(static_cast<int>(interference.size()) == num_channels,
        "GameSpec: interference size != num_channels");
  for (double mu : means) check(mu >= 0.0 && mu <= 1.0, "GameSpec: mean outside [0,1]");
  for (const auto& g : interference) {
    check(static_cast<int>(g.size()) == num_users, "GameSpec: interference row size != num_users");
    for (double v : g) check(v >= 0.0 && v <= 1.0, "GameSpec: interference outside [0,1]");
  }
}

bool GameSpec::is_case3() const {
  if (rate_kind != RateKind::kConstant) return false;
  for (double mu : means)
    if (!(mu > 0.0)) return false;
  for (const auto& g : interference)
    for (std::size_t n = 1; n < g.size(); ++n)
      if (!(g[n] < g[n - 1])) return false;
  return true;
}

std::string GameSpec::id() const {
  const char* kind = rate_kind == RateKind::kConstant   ? "constant"
                     : rate_kind == RateKind::kBernoulli ? "bernoulli"
                                                         : "uniform";
  return "M" + std::to_string(num_users) + "N" + std::to_string(num_channels) + "-" + kind;
}

int count_users(const ActionProfile& profile, int channel) {
  int n = 0;
  for (int c : profile) n += (c == channel);
  return n;
}

Allocation occupancy_of(const ActionProfile& profile, int num_channels) {
  Allocation k(num_channels, 0);
  for (int c : profile) ++k[c];
  return k;
}

std::vector<double> sample_rates(const GameSpec& spec, Rng& rng) {
  std::vector<double> r(spec.num_channels);
  for (int j = 0; j < spec.num_channels; ++j) {
    const double mu = spec.means[j];
    switch (spec.rate_kind) {
      case RateKind::kConstant:
        r[j] = mu;
        break;
      case RateKind::kBernoulli:
        r[j] = rng.bernoulli(mu) ? 1.0 : 0.0;
        break;
      case RateKind::kUniform: {
        // Uniform on [max(0, 2mu-1), min(1, 2mu)]: mean mu, support in [0,1].
        const double lo = std::max(0.0, 2.0 * mu - 1.0);
        const double hi = std::min(1.0, 2.0 * mu);
        r[j] = lo + (hi - lo) * rng.uniform01();
        break;
      }
    }
  }
  return r;
}

std::vector<double> realized_payoffs(const GameSpec& spec, const ActionProfile& profile,
                                     const std::vector<double>& rates) {
  const Allocation k = occupancy_of(profile, spec.num_channels);
  std::vector<double> h(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const int j = profile[i];
    h[i] = rates[j] * spec.interference[j][k[j] - 1];
  }
  return h;
}

std::uint64_t composition_count(int users, int channels) {
  // C(users + channels - 1, channels - 1) with overflow check
  std::uint64_t result = 1;
  const int n = users + channels - 1;
  const int k = std::min(channels - 1, users);
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("composition_count: overflow");
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

namespace {

void compose(int remaining, int channel, int num_channels, Allocation& cur,
             std::vector<Allocation>& out) {
  if (channel == num_channels - 1) {
    cur[channel] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[channel] = k;
    compose(remaining - k, channel + 1, num_channels, cur, out);
  }
}

}  // namespace

std::vector<Allocation> enumerate_allocations(int users, int channels, std::uint64_t cap) {
  if (users < 1 || channels < 1)
    throw std::invalid_argument("enumerate_allocations: users and channels must be >= 1");
  const std::uint64_t count = composition_count(users, channels);
  if (count > cap) throw std::runtime_error("enumerate_allocations: instance exceeds enumeration cap");
  std::vector<Allocation> out;
  out.reserve(count);
  Allocation cur(channels, 0);
  compose(users, 0, channels, cur, out);
  return out;
}

double social_welfare(const GameSpec& spec, const Allocation& k) {
  double w = 0.0;
  for (int j = 0; j < spec.num_channels; ++j)
    if (k[j] > 0) w += spec.means[j] * k[j] * spec.interference[j][k[j] - 1];
  return w;
}

double table_welfare(const std::vector<std::vector<double>>& value, const Allocation& k) {
  double w = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j)
    if (k[j] > 0) w += k[j] * value[j][k[j] - 1];
  return w;
}

Allocation best_allocation(const std::vector<std::vector<double>>& value, int users) {
  const auto allocations = enumerate_allocations(users, static_cast<int>(value.size()));
  const Allocation* best = &allocations.front();
  double best_value = table_welfare(value, *best);
  for (const Allocation& k : allocations) {
    const double w = table_welfare(value, k);
    if (w > best_value) {
      best_value = w;
      best = &k;
    }
  }
  return *best;
}

OptimalSolution socially_optimal(const GameSpec& spec, std::uint64_t cap) {
  spec.validate();
  const auto allocations = enumerate_allocations(spec.num_users, spec.num_channels, cap);

  OptimalSolution opt;
  opt.v_star = -std::numeric_limits<double>::infinity();
  for (const Allocation& k : allocations) {
    const double w = social_welfare(spec, k);
    if (w > opt.v_star) {
      opt.v_star = w;
      opt.k_star = k;
    }
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (const Allocation& k : allocations) {
    if (k == opt.k_star) continue;
    const double gap = opt.v_star - social_welfare(spec, k);
    if (gap <= kTieTolerance)
      opt.ties.push_back(k);
    else
      min_gap = std::min(min_gap, gap);
  }

  opt.v_star_j.assign(spec.num_channels, std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < spec.num_channels; ++j) {
    if (opt.k_star[j] > 0) {
      opt.v_star_j[j] = spec.value(j, opt.k_star[j]);
      ++opt.support;
    }
  }

  if (opt.ties.empty() && std::isfinite(min_gap))
    opt.margin = min_gap / (2.0 * spec.num_users);
  else if (opt.ties.empty())
    opt.margin = std::numeric_limits<double>::infinity();  // single allocation exists
  else
    opt.margin = 0.0;
  return opt;
}

double stability_margin(const GameSpec& spec) {
  const OptimalSolution opt = socially_optimal(spec);
  if (!opt.ties.empty())
    throw std::runtime_error("stability_margin: optimum is not unique (zero welfare gap)");
  return opt.margin;
}

}  // namespace chansim
