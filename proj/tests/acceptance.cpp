// Acceptance gate: one line per criterion, exit code = number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "chansim/analysis.hpp"
#include "chansim/congestion.hpp"
#include "chansim/learners.hpp"
#include "chansim/replicator.hpp"
#include "chansim/sim.hpp"

using namespace chansim;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

GameSpec reference_spec(RateKind kind) {
  GameSpec spec;
  spec.num_users = 2;
  spec.num_channels = 2;
  spec.means = {1.0, 0.6};
  spec.interference = {{1.0, 0.7}, {1.0, 0.7}};
  spec.rate_kind = kind;
  return spec;
}

GameSpec random_spec(Rng& rng, int max_users, int max_channels, double lo = 0.0) {
  GameSpec spec;
  spec.num_users = 1 + rng.uniform_int(max_users);
  spec.num_channels = 1 + rng.uniform_int(max_channels);
  spec.means.resize(spec.num_channels);
  spec.interference.resize(spec.num_channels);
  for (int j = 0; j < spec.num_channels; ++j) {
    spec.means[j] = lo + (1.0 - lo) * rng.uniform01();
    spec.interference[j].resize(spec.num_users);
    for (int n = 0; n < spec.num_users; ++n)
      spec.interference[j][n] = lo + (1.0 - lo) * rng.uniform01();
  }
  return spec;
}

bool for_each_profile(const GameSpec& spec, const std::function<bool(const ActionProfile&)>& f) {
  ActionProfile profile(spec.num_users, 0);
  for (;;) {
    if (!f(profile)) return false;
    int pos = 0;
    while (pos < spec.num_users) {
      if (++profile[pos] < spec.num_channels) break;
      profile[pos++] = 0;
    }
    if (pos == spec.num_users) return true;
  }
}

// 1. socially_optimal equals the argmax over all N^M profiles
void criterion_oracle_equivalence() {
  Rng rng(101);
  bool ok = true;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const GameSpec spec = random_spec(rng, 4, 4);
    const auto opt = socially_optimal(spec);
    double best = -1.0;
    for_each_profile(spec, [&](const ActionProfile& profile) {
      best = std::max(best, social_welfare(spec, occupancy_of(profile, spec.num_channels)));
      return true;
    });
    if (opt.v_star != best || social_welfare(spec, opt.k_star) != best) ok = false;
  }
  report(1, ok, "allocation optimum equals full profile-scan oracle on 200 instances",
         ok ? "exact match" : "mismatch found");
}

// 2. potential identity and better-reply termination
void criterion_potential_identity() {
  Rng rng(102);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const GameSpec spec = random_spec(rng, 3, 3);
    ok = for_each_profile(spec, [&](const ActionProfile& profile) {
      const double phi = rosenthal_potential(spec, profile);
      for (int i = 0; i < spec.num_users; ++i) {
        for (int c = 0; c < spec.num_channels; ++c) {
          ActionProfile deviated = profile;
          deviated[i] = c;
          const double dphi = rosenthal_potential(spec, deviated) - phi;
          const double du = expected_utility(spec, deviated, i) -
                            expected_utility(spec, profile, i);
          if (std::abs(dphi - du) > 1e-12) return false;
        }
      }
      return true;
    });
    if (!ok) break;
    ActionProfile start(spec.num_users);
    for (int& c : start) c = rng.uniform_int(spec.num_channels);
    const auto path = best_response_path(spec, start, rng);
    if (path.empty() || !is_pne(spec, path.back())) ok = false;
  }
  report(2, ok, "potential difference equals deviator utility difference; paths end at PNE",
         ok ? "100 instances, tolerance 1e-12" : "identity violated");
}

// 3. replicator trajectories: >= 95% pure-PNE limits, monotone potential
void criterion_replicator_convergence() {
  Rng rng(103);
  int total = 0, pure_pne = 0;
  bool monotone = true;
  for (int inst = 0; inst < 100; ++inst) {
    const GameSpec spec = random_spec(rng, 3, 3, 0.02);
    for (int start_idx = 0; start_idx < 10; ++start_idx) {
      MixedProfile start = MixedProfile::uniform(spec.num_users, spec.num_channels);
      for (int i = 0; i < spec.num_users; ++i) {
        double row = 0.0;
        for (int j = 0; j < spec.num_channels; ++j) {
          start.at(i, j) = 0.05 + rng.uniform01();
          row += start.at(i, j);
        }
        for (int j = 0; j < spec.num_channels; ++j) start.at(i, j) /= row;
      }
      const auto result = integrate(spec, start, 0.5, 20000.0);
      ++total;
      if (result.converged && result.limit_kind == LimitKind::kPurePne) ++pure_pne;
      for (std::size_t k = 1; k < result.potential_trace.size(); ++k)
        if (result.potential_trace[k] < result.potential_trace[k - 1] - 1e-7)
          monotone = false;
    }
  }
  const double frac = static_cast<double>(pure_pne) / total;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "pure-PNE fraction %.3f of %d, monotone=%s", frac,
                total, monotone ? "yes" : "no");
  report(3, frac >= 0.95 && monotone,
         "replicator limits are pure PNE >= 95% with non-decreasing potential", detail);
}

// 4. discrete Exp3 one-step drift matches gamma * replicator field
void criterion_exp3_drift() {
  Rng rng(104);
  bool ok = true;
  double worst_ratio = 0.0;
  const double allowance_c = 10.0;  // second-order curvature with entries >= 0.15
  for (int pair = 0; pair < 10 && ok; ++pair) {
    GameSpec spec = random_spec(rng, 3, 3, 0.05);
    if (spec.num_channels < 2) spec = reference_spec(RateKind::kConstant);
    spec.rate_kind = RateKind::kConstant;
    const int M = spec.num_users, N = spec.num_channels;
    MixedProfile profile = MixedProfile::uniform(M, N);
    for (int i = 0; i < M; ++i) {
      double row = 0.0;
      for (int j = 0; j < N; ++j) {
        profile.at(i, j) = 0.15 + rng.uniform01();
        row += profile.at(i, j);
      }
      for (int j = 0; j < N; ++j) profile.at(i, j) /= row;
    }
    const auto xi = replicator_rhs(spec, profile);

    for (double gamma : {0.01, 0.001}) {
      // weights reproducing the profile exactly under p = (1-g) w/sum + g/N
      std::vector<std::vector<double>> weights(M, std::vector<double>(N));
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j)
          weights[i][j] = (profile.at(i, j) - gamma / N) / (1.0 - gamma);

      const int samples = 100'000;
      std::vector<double> s(M * N, 0.0), ss(M * N, 0.0);
      std::vector<int> actions(M);
      for (int trial = 0; trial < samples; ++trial) {
        std::vector<Exp3Agent> agents;
        agents.reserve(M);
        for (int i = 0; i < M; ++i) agents.emplace_back(weights[i], gamma);
        for (int i = 0; i < M; ++i) actions[i] = agents[i].act(1, rng);
        const auto rates = spec.means;  // constant-rate draw
        const auto payoffs = realized_payoffs(spec, actions, rates);
        for (int i = 0; i < M; ++i) {
          Feedback fb;
          fb.payoff = payoffs[i];
          agents[i].observe(fb);
          const auto p_new = agents[i].probabilities();
          for (int j = 0; j < N; ++j) {
            const double d = p_new[j] - profile.at(i, j);
            s[i * N + j] += d;
            ss[i * N + j] += d * d;
          }
        }
      }
      for (int e = 0; e < M * N && ok; ++e) {
        const double mean = s[e] / samples;
        const double var = std::max(0.0, ss[e] / samples - mean * mean);
        const double se = std::sqrt(var / samples);
        const double err = std::abs(mean - gamma * xi[e]);
        const double budget = 3.0 * se + allowance_c * gamma * gamma;
        worst_ratio = std::max(worst_ratio, err / budget);
        if (err > budget) ok = false;
      }
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "worst error / (3se + %.0f*gamma^2) = %.3f",
                allowance_c, worst_ratio);
  report(4, ok, "Exp3 one-step expected increment matches gamma * xi", detail);
}

// 5. RLA on the reference spec: final-decade optimality and regret exponent
void criterion_rla_regret() {
  ExperimentConfig config;
  config.spec = reference_spec(RateKind::kBernoulli);
  config.case_kind = CaseKind::kC2;
  config.agent.kind = AgentKind::kRla;
  config.agent.gamma = 0.02;
  config.horizon = 100'000;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) config.seeds.push_back(seed);
  const auto batch = run_batch(config);

  char detail[96];
  std::snprintf(detail, sizeof(detail), "final-decade fraction %.4f",
                batch.final_decade_fraction_optimal);
  report(5, batch.final_decade_fraction_optimal >= 0.9,
         "RLA final-decade fraction-of-time-optimal >= 0.9", detail);
  std::snprintf(detail, sizeof(detail), "fitted exponent %.4f",
                batch.exponent);
  report(5, !std::isnan(batch.exponent) && batch.exponent <= 0.80,
         "RLA mean expected-welfare regret exponent <= 0.80", detail);
}

// 6. RS reaches and holds the optimum on 50 random case-3 specs
void criterion_rs_convergence() {
  Rng rng(106);
  bool ok = true;
  double total_t_opt = 0.0;
  const std::int64_t horizon = 100'000;
  for (int inst = 0; inst < 50 && ok; ++inst) {
    GameSpec spec;
    for (;;) {
      spec = random_spec(rng, 3, 3, 0.1);
      for (auto& g : spec.interference) std::sort(g.begin(), g.end(), std::greater<>());
      spec.rate_kind = RateKind::kConstant;
      // distinct payoffs across all (channel, occupancy) pairs
      std::vector<double> payoffs;
      for (int j = 0; j < spec.num_channels; ++j)
        for (int n = 1; n <= spec.num_users; ++n) payoffs.push_back(spec.value(j, n));
      std::sort(payoffs.begin(), payoffs.end());
      bool distinct = true;
      for (std::size_t k = 1; k < payoffs.size(); ++k)
        if (payoffs[k] - payoffs[k - 1] < 1e-6) distinct = false;
      if (distinct && spec.is_case3()) break;
    }
    ExperimentConfig config;
    config.spec = spec;
    config.case_kind = CaseKind::kC3;
    config.agent.kind = AgentKind::kRs;
    config.horizon = horizon;
    config.seeds = {static_cast<std::uint64_t>(inst) + 1};
    const auto trace = run_once(config, config.seeds[0]);
    const auto opt = socially_optimal(spec);

    std::int64_t t_opt = horizon;  // first step after which occupancy stays at k*
    for (std::int64_t t = horizon - 1; t >= 0; --t) {
      const auto occ = trace.occupancy_at(t);
      if (!std::equal(occ.begin(), occ.end(), opt.k_star.begin())) break;
      t_opt = t;
    }
    if (t_opt >= horizon) ok = false;
    total_t_opt += static_cast<double>(t_opt + 1);
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "mean T_OPT = %.1f steps over 50 specs",
                total_t_opt / 50.0);
  report(6, ok, "RS reaches and holds k* on every random case-3 spec", detail);
}

// 7. Hoeffding lower-tail bound dominates heterogeneous-Bernoulli experiments
void criterion_hoeffding() {
  Rng rng(107);
  bool ok = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int n : {10, 100, 1000}) {
    std::vector<double> q(n);
    double qbar = 0.0;
    for (double& v : q) {
      v = rng.uniform01();
      qbar += v;
    }
    qbar /= n;
    const int trials = 100'000;
    std::vector<double> deviations(trials);
    for (int trial = 0; trial < trials; ++trial) {
      double xbar = 0.0;
      for (double p : q) xbar += rng.bernoulli(p) ? 1.0 : 0.0;
      deviations[trial] = xbar / n - qbar;
    }
    for (double eps : {0.05, 0.1, 0.2}) {
      int hits = 0;
      for (double d : deviations)
        if (d <= -eps) ++hits;
      const double tail = static_cast<double>(hits) / trials;
      const double bound = hoeffding_bound(n, eps);
      worst_margin = std::min(worst_margin, bound - tail);
      if (tail > bound) ok = false;
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "min (bound - tail) = %.4f", worst_margin);
  report(7, ok, "empirical lower tails never exceed exp(-2 n eps^2)", detail);
}

// 8. bound arithmetic: strict sandwich sweep plus exact hand values
void criterion_bound_arithmetic() {
  bool ok = true;
  for (double p : {0.25, 0.5, 0.75, 1.5, 2.0}) {
    for (std::int64_t n = 1; n <= 10'000; ++n) {
      const auto b = power_sum_bounds(n, p);
      if (!(b.lower < b.sum && (n == 1 ? b.sum <= b.upper : b.sum < b.upper))) ok = false;
    }
  }
  if (occupancy_weight(2, 2, 1) != 1.0 / 3.0) ok = false;
  if (occupancy_weight(2, 2, 2) != 1.0 / 3.0) ok = false;
  if (settle_expectation(2, 2) != 2.0) ok = false;
  if (settle_expectation(3, 2) != 3.0) ok = false;
  if (settle_expectation(5, 1) != 0.0) ok = false;
  report(8, ok, "power-sum sandwich holds on the sweep; exact combinatorial hand values",
         ok ? "p in {0.25,0.5,0.75,1.5,2}, n up to 1e4" : "violation found");
}

// 9. byte-identical CSV on repeated runs
void criterion_determinism() {
  ExperimentConfig config;
  config.spec = reference_spec(RateKind::kBernoulli);
  config.case_kind = CaseKind::kC2;
  config.agent.kind = AgentKind::kRla;
  config.agent.gamma = 0.02;
  config.horizon = 5'000;
  config.seeds = {3, 4};

  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "chansim_acceptance";
  fs::remove_all(base);
  run_batch_to_dir(config, (base / "a").string());
  run_batch_to_dir(config, (base / "b").string());

  bool ok = true;
  for (const char* name :
       {"curve_seed3.csv", "curve_seed4.csv", "aggregate.csv", "summary.json"}) {
    std::ifstream fa(base / "a" / name, std::ios::binary);
    std::ifstream fb(base / "b" / name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (!fa || !fb || sa.str() != sb.str() || sa.str().empty()) ok = false;
  }
  fs::remove_all(base);
  report(9, ok, "repeated (config, seed) runs produce byte-identical artifacts",
         ok ? "4 files compared" : "difference found");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_oracle_equivalence();
  criterion_potential_identity();
  criterion_replicator_convergence();
  criterion_exp3_drift();
  criterion_rla_regret();
  criterion_rs_convergence();
  criterion_hoeffding();
  criterion_bound_arithmetic();
  criterion_determinism();
  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::printf("%d failure(s), %llds total\n", failures, static_cast<long long>(dt));
  return failures;
}
