#include "chansim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chansim {

int RunTrace::explore_count(std::int64_t t) const {
  int n = 0;
  for (int i = 0; i < num_users; ++i) n += explore_flag[t * num_users + i];
  return n;
}

RegretCurve regret(const RunTrace& trace, const OptimalSolution& optimum) {
  const std::int64_t n = trace.length();
  RegretCurve curve;
  curve.regret_expected.resize(n);
  curve.regret_realized.resize(n);
  curve.fraction_optimal.resize(n);
  double cum_expected = 0.0, cum_realized = 0.0;
  std::int64_t optimal_steps = 0;
  for (std::int64_t t = 0; t < n; ++t) {
    cum_expected += optimum.v_star - trace.expected_welfare[t];
    cum_realized += optimum.v_star - trace.realized_welfare[t];
    const auto occ = trace.occupancy_at(t);
    if (std::equal(occ.begin(), occ.end(), optimum.k_star.begin())) ++optimal_steps;
    curve.regret_expected[t] = cum_expected;
    curve.regret_realized[t] = cum_realized;
    curve.fraction_optimal[t] = static_cast<double>(optimal_steps) / static_cast<double>(t + 1);
  }
  return curve;
}

double exponent_fit(const std::vector<double>& times, const std::vector<double>& values,
                    std::size_t window) {
  if (times.size() != values.size())
    throw std::invalid_argument("exponent_fit: times/values size mismatch");
  if (window < 2 || window > values.size())
    throw std::invalid_argument("exponent_fit: bad window");
  const std::size_t start = values.size() - window;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = start; k < values.size(); ++k) {
    if (!(values[k] > 0.0))
      throw std::domain_error("exponent_fit: nonpositive value in window");
    const double x = std::log(times[k]);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(window);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double hoeffding_bound(std::int64_t n, double eps) {
  if (n < 0 || eps < 0.0) throw std::invalid_argument("hoeffding_bound: n, eps must be >= 0");
  return std::exp(-2.0 * static_cast<double>(n) * eps * eps);
}

PowerSumBounds power_sum_bounds(std::int64_t n, double p) {
  if (!(p > 0.0) || p == 1.0)
    throw std::invalid_argument("power_sum_bounds: requires p > 0, p != 1");
  if (n < 1) throw std::invalid_argument("power_sum_bounds: n must be >= 1");
  PowerSumBounds b;
  for (std::int64_t t = 1; t <= n; ++t) b.sum += std::pow(static_cast<double>(t), -p);
  b.lower = (std::pow(static_cast<double>(n + 1), 1.0 - p) - 1.0) / (1.0 - p);
  b.upper = 1.0 + (std::pow(static_cast<double>(n), 1.0 - p) - 1.0) / (1.0 - p);
  return b;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("binomial: overflow");
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

double occupancy_weight(int num_users, int num_channels, int l) {
  if (num_channels < 2)
    throw std::invalid_argument("occupancy_weight: requires num_channels >= 2");
  if (l < 1 || l > num_users) throw std::invalid_argument("occupancy_weight: l outside 1..M");
  const std::uint64_t numerator =
      binomial(num_users - 1, l - 1) * binomial(num_users + num_channels - l - 2, num_channels - 2);
  const std::uint64_t denominator = binomial(num_users + num_channels - 1, num_channels - 1);
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

namespace {

bool tau_condition(double t, int num_users, int num_channels, double eps, double gamma,
                   double gamma_prime, double a) {
  const double rhs = std::pow(t, -0.5 + gamma_prime);
  for (int l = 1; l <= num_users; ++l) {
    const double p_l = occupancy_weight(num_users, num_channels, l);
    const double lhs = p_l * (std::pow(t + 1.0, 0.5 + gamma) - 1.0) / (t * (0.5 + gamma)) -
                       a * std::log(t) / (t * eps * eps);
    if (!(lhs >= rhs)) return false;
  }
  return true;
}

}  // namespace

double tau_threshold(int num_users, int num_channels, double eps, double gamma,
                     double gamma_prime, double a, double cap) {
  if (!(eps > 0.0)) throw std::invalid_argument("tau_threshold: eps must be > 0");
  if (!(a > 0.0)) throw std::invalid_argument("tau_threshold: a must be > 0");
  if (!(gamma_prime > 0.0 && gamma_prime < gamma))
    throw std::invalid_argument("tau_threshold: requires 0 < gamma' < gamma");

  if (tau_condition(1.0, num_users, num_channels, eps, gamma, gamma_prime, a)) return 1.0;

  // Thresholds can be astronomically large (the LHS only overtakes the RHS at
  // rate t^{gamma-gamma'}), so scan by doubling and bisect the boundary.
  double hi = 2.0;
  while (!tau_condition(hi, num_users, num_channels, eps, gamma, gamma_prime, a)) {
    hi *= 2.0;
    if (hi > cap) throw std::runtime_error("tau_threshold: search cap exceeded");
  }
  double lo = hi / 2.0;
  while (hi - lo > 1.0 && std::nextafter(lo, hi) < hi) {
    const double mid = lo + (hi - lo) / 2.0;
    if (tau_condition(mid, num_users, num_channels, eps, gamma, gamma_prime, a))
      hi = mid;
    else
      lo = mid;
  }
  return std::ceil(hi);
}

double settle_expectation(int num_users, int z_star) {
  if (z_star < 1) throw std::invalid_argument("settle_expectation: z_star must be >= 1");
  return static_cast<double>(binomial(num_users + z_star - 1, z_star - 1)) - 1.0;
}

ExplorationBudget bad_step_budget(std::int64_t n, int num_users, double gamma) {
  if (n < 1) throw std::invalid_argument("bad_step_budget: n must be >= 1");
  const double p = 1.0 / (2.0 * num_users) - gamma / num_users;
  ExplorationBudget budget;
  for (std::int64_t t = 1; t <= n; ++t) {
    const double q = std::pow(static_cast<double>(t), -p);
    budget.exact_sum += 1.0 - std::pow(1.0 - q, num_users);
  }
  budget.upper_bound = num_users * power_sum_bounds(n, p).upper;
  return budget;
}

}  // namespace chansim
