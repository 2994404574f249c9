#include "chansim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chansim {

namespace {

std::string rate_kind_name(RateKind kind) {
  switch (kind) {
    case RateKind::kConstant: return "constant";
    case RateKind::kBernoulli: return "bernoulli";
    case RateKind::kUniform: return "uniform";
  }
  return "?";
}

RateKind rate_kind_from(const std::string& name) {
  if (name == "constant") return RateKind::kConstant;
  if (name == "bernoulli") return RateKind::kBernoulli;
  if (name == "uniform") return RateKind::kUniform;
  throw std::invalid_argument("unknown rate_kind '" + name + "'");
}

std::string case_name(CaseKind kind) {
  switch (kind) {
    case CaseKind::kC1: return "C1";
    case CaseKind::kC2: return "C2";
    case CaseKind::kC3: return "C3";
  }
  return "?";
}

CaseKind case_from(const std::string& name) {
  if (name == "C1") return CaseKind::kC1;
  if (name == "C2") return CaseKind::kC2;
  if (name == "C3") return CaseKind::kC3;
  throw std::invalid_argument("unknown case '" + name + "' (expected C1, C2 or C3)");
}

std::string agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kExp3: return "exp3";
    case AgentKind::kRla: return "rla";
    case AgentKind::kRs: return "rs";
  }
  return "?";
}

AgentKind agent_from(const std::string& name) {
  if (name == "exp3") return AgentKind::kExp3;
  if (name == "rla") return AgentKind::kRla;
  if (name == "rs") return AgentKind::kRs;
  throw std::invalid_argument("unknown agent kind '" + name + "'");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::json spec_to_json(const GameSpec& spec) {
  return nlohmann::json{{"num_users", spec.num_users},
                        {"num_channels", spec.num_channels},
                        {"means", spec.means},
                        {"interference", spec.interference},
                        {"rate_kind", rate_kind_name(spec.rate_kind)}};
}

GameSpec spec_from_json(const nlohmann::json& j) {
  GameSpec spec;
  spec.num_users = j.at("num_users").get<int>();
  spec.num_channels = j.at("num_channels").get<int>();
  spec.means = j.at("means").get<std::vector<double>>();
  spec.interference = j.at("interference").get<std::vector<std::vector<double>>>();
  spec.rate_kind = rate_kind_from(j.value("rate_kind", "constant"));
  spec.validate();
  return spec;
}

GameSpec load_spec(const std::string& path) { return spec_from_json(read_json_file(path)); }

nlohmann::json config_to_json(const ExperimentConfig& config) {
  return nlohmann::json{{"spec", spec_to_json(config.spec)},
                        {"case", case_name(config.case_kind)},
                        {"agent", {{"kind", agent_name(config.agent.kind)},
                                   {"gamma", config.agent.gamma}}},
                        {"horizon", config.horizon},
                        {"seeds", config.seeds},
                        {"output_dir", config.output_dir},
                        {"cadence", config.cadence},
                        {"allow_case_mismatch", config.allow_case_mismatch}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  config.spec = spec_from_json(j.at("spec"));
  config.case_kind = case_from(j.at("case").get<std::string>());
  const auto& agent = j.at("agent");
  config.agent.kind = agent_from(agent.at("kind").get<std::string>());
  config.agent.gamma = agent.value("gamma", 0.0);
  config.horizon = j.at("horizon").get<std::int64_t>();
  config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  config.output_dir = j.value("output_dir", "out");
  config.cadence = j.value("cadence", std::int64_t{0});
  config.allow_case_mismatch = j.value("allow_case_mismatch", false);
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(read_json_file(path));
}

nlohmann::json optimum_to_json(const OptimalSolution& opt) {
  nlohmann::json v_star_j = nlohmann::json::array();
  for (double v : opt.v_star_j)
    v_star_j.push_back(std::isnan(v) ? nlohmann::json() : nlohmann::json(v));
  return nlohmann::json{{"k_star", opt.k_star},
                        {"v_star", opt.v_star},
                        {"v_star_j", v_star_j},
                        {"support", opt.support},
                        {"margin", opt.margin},
                        {"ties", opt.ties}};
}

std::string equilibrium_to_json_lines(const EquilibriumReport& report) {
  std::ostringstream out;
  for (std::size_t k = 0; k < report.pne_profiles.size(); ++k)
    out << nlohmann::json{{"profile", report.pne_profiles[k]},
                          {"occupancy", occupancy_of(report.pne_profiles[k],
                                                     static_cast<int>(
                                                         report.pne_occupancies.front().size()))},
                          {"potential", report.potential_values[k]}}
               .dump()
        << '\n';
  out << nlohmann::json{{"pne_count", report.pne_profiles.size()},
                        {"distinct_occupancies", report.pne_occupancies.size()},
                        {"contains_optimum", report.contains_optimum}}
             .dump()
      << '\n';
  return out.str();
}

std::string equilibrium_to_csv(const EquilibriumReport& report) {
  std::ostringstream out;
  out << "profile;occupancy;potential\n";
  for (std::size_t k = 0; k < report.pne_profiles.size(); ++k) {
    const auto& profile = report.pne_profiles[k];
    for (std::size_t i = 0; i < profile.size(); ++i)
      out << (i ? " " : "") << profile[i];
    out << ';';
    const auto occ =
        occupancy_of(profile, static_cast<int>(report.pne_occupancies.front().size()));
    for (std::size_t j = 0; j < occ.size(); ++j) out << (j ? " " : "") << occ[j];
    out << ';' << format_double(report.potential_values[k]) << '\n';
  }
  return out.str();
}

}  // namespace chansim
