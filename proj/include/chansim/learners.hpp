#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "chansim/game.hpp"
#include "chansim/rng.hpp"

namespace chansim {

// Information regimes: C1 payoff-only feedback, C2 payoff + occupancy with
// known M, C3 constant rates with known M.
enum class CaseKind { kC1, kC2, kC3 };

enum class AgentKind { kExp3, kRla, kRs };

struct AgentParams {
  AgentKind kind = AgentKind::kExp3;
  double gamma = 0.0;  // Exp3 exploration rate, or RLA exponent shift; unused by RS
};

struct Feedback {
  double payoff = 0.0;
  std::optional<int> occupancy;  // total users on the played channel (C2 only)
};

// Per-user online learner. One simulation round is act() for every agent,
// environment resolution, then observe() for every agent.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void reset() = 0;
  virtual int act(std::int64_t t, Rng& rng) = 0;
  virtual void observe(const Feedback& fb) = 0;
  // Whether the last act() was a uniform randomization over all channels.
  virtual bool explored() const { return false; }
};

class Exp3Agent : public Agent {
 public:
  Exp3Agent(int num_channels, double gamma);
  Exp3Agent(std::vector<double> weights, double gamma);

  void reset() override;
  int act(std::int64_t t, Rng& rng) override;
  void observe(const Feedback& fb) override;

  // p_j = (1-gamma) w_j / sum(w) + gamma / N
  std::vector<double> probabilities() const;
  const std::vector<double>& weights() const { return weights_; }
  double gamma() const { return gamma_; }

 private:
  int num_channels_;
  double gamma_;
  std::vector<double> weights_;
  int last_channel_ = -1;
  double last_prob_ = 0.0;
};

// Weight multiplier of one Exp3 update at sampling probability `prob`.
double exp3_multiplier(double gamma, double payoff, double prob, int num_channels);

class RlaAgent : public Agent {
 public:
  RlaAgent(int num_users, int num_channels, double gamma);

  void reset() override;
  int act(std::int64_t t, Rng& rng) override;
  void observe(const Feedback& fb) override;  // requires fb.occupancy
  bool explored() const override { return explored_; }

  double explore_probability(std::int64_t t) const;
  // argmax_k sum_j k_j u_{j,k_j}, lexicographically-first tie break.
  const Allocation& estimate() const { return k_hat_; }
  const std::vector<std::vector<double>>& sample_means() const { return mean_; }
  const std::vector<std::vector<std::int64_t>>& counts() const { return count_; }

  // Test hook: replace the arm-mean table and recompute the estimate.
  void load_sample_means(std::vector<std::vector<double>> means);

 private:
  void recompute_estimate();

  int num_users_;
  int num_channels_;
  double gamma_;
  std::vector<std::vector<double>> mean_;        // [channel][occupancy-1]
  std::vector<std::vector<std::int64_t>> count_;
  Allocation k_hat_;
  std::vector<int> support_;  // channels with k_hat_j >= 1
  int last_channel_ = -1;
  int last_occupancy_ = 0;
  bool explored_ = false;
};

class RsAgent : public Agent {
 public:
  RsAgent(int num_users, int num_channels);

  void reset() override;
  int act(std::int64_t t, Rng& rng) override;
  void observe(const Feedback& fb) override;
  bool explored() const override { return explored_; }

  bool exploiting() const { return exploiting_; }
  int distinct_observed() const { return distinct_; }
  // Per-channel stay threshold v*_j once exploiting; +inf on channels
  // unoccupied in the learned optimum.
  const std::vector<double>& thresholds() const { return threshold_; }
  const Allocation& learned_optimum() const { return k_hat_; }

 private:
  int num_users_;
  int num_channels_;
  std::vector<std::vector<double>> observed_;  // distinct payoffs, sorted descending
  int distinct_ = 0;
  bool exploiting_ = false;
  std::vector<double> threshold_;
  Allocation k_hat_;
  int last_channel_ = -1;
  double last_payoff_ = 0.0;
  bool explored_ = false;
};

// Builds a fresh agent. Validates params for the kind and, for RS, that the
// spec is case-3 valid. Agents only receive what the case's information
// model allows (N for C1; N and M for C2/C3).
std::unique_ptr<Agent> make_agent(const AgentParams& params, CaseKind kind,
                                  const GameSpec& spec);

}  // namespace chansim
