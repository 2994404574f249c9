#include "chansim/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chansim {

namespace {

constexpr double kWeightRenormThreshold = 1e150;

int sample_from(const std::vector<double>& probs, Rng& rng) {
  double u = rng.uniform01();
  for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
    u -= probs[j];
    if (u < 0.0) return static_cast<int>(j);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

// ---------------------------------------------------------------- Exp3

Exp3Agent::Exp3Agent(int num_channels, double gamma)
    : num_channels_(num_channels), gamma_(gamma), weights_(num_channels, 1.0) {
  if (num_channels < 1) throw std::invalid_argument("Exp3Agent: num_channels must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("Exp3Agent: gamma must be in [0,1)");
}

Exp3Agent::Exp3Agent(std::vector<double> weights, double gamma)
    : num_channels_(static_cast<int>(weights.size())), gamma_(gamma), weights_(std::move(weights)) {
  if (num_channels_ < 1) throw std::invalid_argument("Exp3Agent: empty weight vector");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("Exp3Agent: gamma must be in [0,1)");
  for (double w : weights_)
    if (!(w > 0.0)) throw std::invalid_argument("Exp3Agent: weights must be positive");
}

void Exp3Agent::reset() {
  std::fill(weights_.begin(), weights_.end(), 1.0);
  last_channel_ = -1;
  last_prob_ = 0.0;
}

std::vector<double> Exp3Agent::probabilities() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  std::vector<double> p(num_channels_);
  for (int j = 0; j < num_channels_; ++j)
    p[j] = (1.0 - gamma_) * weights_[j] / total + gamma_ / num_channels_;
  return p;
}

int Exp3Agent::act(std::int64_t /*t*/, Rng& rng) {
  const auto p = probabilities();
  last_channel_ = sample_from(p, rng);
  last_prob_ = p[last_channel_];
  return last_channel_;
}

double exp3_multiplier(double gamma, double payoff, double prob, int num_channels) {
  return std::exp(gamma * payoff / (prob * num_channels));
}

void Exp3Agent::observe(const Feedback& fb) {
  if (!(fb.payoff >= 0.0 && fb.payoff <= 1.0))
    throw std::invalid_argument("Exp3Agent: payoff outside [0,1]");
  if (last_channel_ < 0) throw std::logic_error("Exp3Agent: observe before act");
  weights_[last_channel_] *= exp3_multiplier(gamma_, fb.payoff, last_prob_, num_channels_);

  // probabilities are invariant under common weight scaling
  const double max_w = *std::max_element(weights_.begin(), weights_.end());
  if (max_w > kWeightRenormThreshold)
    for (double& w : weights_) w /= max_w;
}

// ---------------------------------------------------------------- RLA

RlaAgent::RlaAgent(int num_users, int num_channels, double gamma)
    : num_users_(num_users), num_channels_(num_channels), gamma_(gamma) {
  if (num_users < 1 || num_channels < 1)
    throw std::invalid_argument("RlaAgent: num_users and num_channels must be >= 1");
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("RlaAgent: gamma must be in (0, 1/2)");
  reset();
}

void RlaAgent::reset() {
  mean_.assign(num_channels_, std::vector<double>(num_users_, 0.0));
  count_.assign(num_channels_, std::vector<std::int64_t>(num_users_, 0));
  last_channel_ = -1;
  last_occupancy_ = 0;
  explored_ = false;
  recompute_estimate();
}

double RlaAgent::explore_probability(std::int64_t t) const {
  return std::pow(static_cast<double>(t), -(1.0 / (2.0 * num_users_) - gamma_ / num_users_));
}

void RlaAgent::recompute_estimate() {
  k_hat_ = best_allocation(mean_, num_users_);
  support_.clear();
  for (int j = 0; j < num_channels_; ++j)
    if (k_hat_[j] > 0) support_.push_back(j);
}

int RlaAgent::act(std::int64_t t, Rng& rng) {
  if (rng.bernoulli(explore_probability(t))) {
    explored_ = true;
    last_channel_ = rng.uniform_int(num_channels_);
    return last_channel_;
  }
  explored_ = false;
  if (last_channel_ >= 0 && k_hat_[last_channel_] > 0 &&
      last_occupancy_ == k_hat_[last_channel_])
    return last_channel_;  // settled on a channel consistent with the estimate
  last_channel_ = support_[rng.uniform_int(static_cast<int>(support_.size()))];
  return last_channel_;
}

void RlaAgent::observe(const Feedback& fb) {
  if (!fb.occupancy.has_value())
    throw std::invalid_argument("RlaAgent: occupancy feedback required (case C2)");
  if (last_channel_ < 0) throw std::logic_error("RlaAgent: observe before act");
  const int occ = *fb.occupancy;
  if (occ < 1 || occ > num_users_)
    throw std::invalid_argument("RlaAgent: occupancy outside 1..M");
  last_occupancy_ = occ;
  auto& c = count_[last_channel_][occ - 1];
  auto& u = mean_[last_channel_][occ - 1];
  ++c;
  u += (fb.payoff - u) / static_cast<double>(c);  // streaming arithmetic mean
  recompute_estimate();
}

void RlaAgent::load_sample_means(std::vector<std::vector<double>> means) {
  mean_ = std::move(means);
  recompute_estimate();
}

// ---------------------------------------------------------------- RS

RsAgent::RsAgent(int num_users, int num_channels)
    : num_users_(num_users), num_channels_(num_channels) {
  if (num_users < 1 || num_channels < 1)
    throw std::invalid_argument("RsAgent: num_users and num_channels must be >= 1");
  reset();
}

void RsAgent::reset() {
  observed_.assign(num_channels_, {});
  distinct_ = 0;
  exploiting_ = false;
  threshold_.assign(num_channels_, std::numeric_limits<double>::infinity());
  k_hat_.clear();
  last_channel_ = -1;
  last_payoff_ = 0.0;
  explored_ = false;
}

int RsAgent::act(std::int64_t /*t*/, Rng& rng) {
  if (!exploiting_ || last_payoff_ < threshold_[last_channel_]) {
    explored_ = true;
    last_channel_ = rng.uniform_int(num_channels_);
  } else {
    explored_ = false;
  }
  return last_channel_;
}

void RsAgent::observe(const Feedback& fb) {
  if (last_channel_ < 0) throw std::logic_error("RsAgent: observe before act");
  last_payoff_ = fb.payoff;
  if (exploiting_) return;

  auto& b = observed_[last_channel_];
  // constant rates: repeated payoffs are bitwise identical
  if (std::find(b.begin(), b.end(), fb.payoff) == b.end()) {
    b.insert(std::upper_bound(b.begin(), b.end(), fb.payoff, std::greater<>()), fb.payoff);
    ++distinct_;
    if (distinct_ == num_users_ * num_channels_) {
      // descending order recovers v_j(1) > ... > v_j(M) exactly
      k_hat_ = best_allocation(observed_, num_users_);
      for (int j = 0; j < num_channels_; ++j)
        threshold_[j] = k_hat_[j] > 0 ? observed_[j][k_hat_[j] - 1]
                                      : std::numeric_limits<double>::infinity();
      exploiting_ = true;
    }
  }
}

// ---------------------------------------------------------------- factory

std::unique_ptr<Agent> make_agent(const AgentParams& params, CaseKind kind,
                                  const GameSpec& spec) {
  spec.validate();
  switch (params.kind) {
    case AgentKind::kExp3:
      (void)kind;  // C1 agents see only N
      return std::make_unique<Exp3Agent>(spec.num_channels, params.gamma);
    case AgentKind::kRla:
      return std::make_unique<RlaAgent>(spec.num_users, spec.num_channels, params.gamma);
    case AgentKind::kRs:
      if (!spec.is_case3())
        throw std::invalid_argument(
            "make_agent: RS requires a case-3 spec (constant rates, positive means, "
            "strictly decreasing interference)");
      return std::make_unique<RsAgent>(spec.num_users, spec.num_channels);
  }
  throw std::invalid_argument("make_agent: unknown agent kind");
}

}  // namespace chansim
