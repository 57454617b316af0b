#include "misdef/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "misdef/error.hpp"

namespace misdef {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_strategy: return "invalid_strategy";
    case ErrorCode::structure: return "structure";
    case ErrorCode::domain: return "domain";
    case ErrorCode::resource: return "resource";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

GameInstance::GameInstance(int num_channels, int num_voters, int attacker_budget,
                           int defender_budget, std::vector<Edge> edges)
    : num_channels_(num_channels),
      num_voters_(num_voters),
      attacker_budget_(attacker_budget),
      defender_budget_(defender_budget),
      edges_(std::move(edges)) {
  if (num_channels_ <= 0 || num_voters_ <= 0) {
    throw Error(ErrorCode::invalid_argument, "instance dimensions must be positive");
  }
  for (const Edge& e : edges_) {
    if (e.channel < 0 || e.channel >= num_channels_ || e.voter < 0 || e.voter >= num_voters_) {
      throw Error(ErrorCode::invalid_argument,
                  "edge endpoint out of range: channel " + std::to_string(e.channel) +
                      ", voter " + std::to_string(e.voter));
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.voter < b.voter;
  });
  by_channel_.resize(num_channels_);
  by_voter_.resize(num_voters_);
  for (const Edge& e : edges_) {
    by_channel_[e.channel].push_back({e.voter, e.p, e.q});
    by_voter_[e.voter].push_back({e.channel, e.p, e.q});
  }
  for (const auto& incident : by_voter_) {
    if (incident.size() > 1) {
      disjoint_ = false;
      break;
    }
  }
}

const std::vector<GameInstance::IncidentEdge>& GameInstance::channel_edges(int channel) const {
  if (channel < 0 || channel >= num_channels_) {
    throw Error(ErrorCode::invalid_argument, "channel index out of range");
  }
  return by_channel_[channel];
}

const std::vector<GameInstance::IncidentEdge>& GameInstance::voter_edges(int voter) const {
  if (voter < 0 || voter >= num_voters_) {
    throw Error(ErrorCode::invalid_argument, "voter index out of range");
  }
  return by_voter_[voter];
}

GameInstance GameInstance::with_budgets(int attacker_budget, int defender_budget) const {
  return GameInstance(num_channels_, num_voters_, attacker_budget, defender_budget, edges_);
}

PureStrategy::PureStrategy(std::vector<int> channels) : channels_(std::move(channels)) {
  std::sort(channels_.begin(), channels_.end());
  channels_.erase(std::unique(channels_.begin(), channels_.end()), channels_.end());
  if (!channels_.empty() && channels_.front() < 0) {
    throw Error(ErrorCode::invalid_strategy, "negative channel index");
  }
}

PureStrategy PureStrategy::first_k(int k) {
  std::vector<int> ids(std::max(k, 0));
  std::iota(ids.begin(), ids.end(), 0);
  return PureStrategy(std::move(ids));
}

bool PureStrategy::contains(int channel) const {
  return std::binary_search(channels_.begin(), channels_.end(), channel);
}

MixedStrategy::MixedStrategy(std::vector<PureStrategy> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty() || support_.size() != weights_.size()) {
    throw Error(ErrorCode::invalid_strategy, "mixed strategy needs matching nonempty support and weights");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw Error(ErrorCode::invalid_strategy, "mixed strategy weights must be finite and nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_strategy, "mixed strategy weights must sum to 1");
  }
}

MixedStrategy MixedStrategy::uniform(const std::vector<PureStrategy>& history) {
  if (history.empty()) {
    throw Error(ErrorCode::invalid_strategy, "cannot build a mixture from an empty history");
  }
  std::map<PureStrategy, long> counts;
  for (const PureStrategy& s : history) ++counts[s];
  MixedStrategy result;
  const double unit = 1.0 / static_cast<double>(history.size());
  for (const auto& [s, c] : counts) {
    result.support_.push_back(s);
    result.weights_.push_back(unit * static_cast<double>(c));
  }
  return result;
}

ValidationReport validate_instance(const GameInstance& inst) {
  ValidationReport report;
  report.disjoint = inst.disjoint();
  auto flag = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (inst.attacker_budget() < 1 || inst.attacker_budget() > inst.num_channels()) {
    flag("attacker budget " + std::to_string(inst.attacker_budget()) +
         " outside [1, " + std::to_string(inst.num_channels()) + "]");
  }
  if (inst.defender_budget() < 1 || inst.defender_budget() > inst.num_channels()) {
    flag("defender budget " + std::to_string(inst.defender_budget()) +
         " outside [1, " + std::to_string(inst.num_channels()) + "]");
  }
  const Edge* prev = nullptr;
  for (const Edge& e : inst.edges()) {
    if (e.p < 0.0 || e.p > 1.0 || !std::isfinite(e.p)) {
      flag("edge (" + std::to_string(e.channel) + ", " + std::to_string(e.voter) +
           ") has switch probability outside [0, 1]");
    }
    if (e.q < 0.0 || e.q > 1.0 || !std::isfinite(e.q)) {
      flag("edge (" + std::to_string(e.channel) + ", " + std::to_string(e.voter) +
           ") has immunization probability outside [0, 1]");
    }
    if (prev != nullptr && prev->channel == e.channel && prev->voter == e.voter) {
      flag("duplicate edge (" + std::to_string(e.channel) + ", " + std::to_string(e.voter) + ")");
    }
    prev = &e;
  }
  return report;
}

std::vector<double> preference_weights(const KnownPreferences& known) {
  std::vector<double> w(known.theta.size());
  for (std::size_t v = 0; v < known.theta.size(); ++v) {
    w[v] = known.theta[v] ? 1.0 : 0.0;
  }
  return w;
}

std::vector<double> substitute_marginals(const MarginalPreferences& marginals) {
  for (double p : marginals.probs) {
    if (p < 0.0 || p > 1.0 || !std::isfinite(p)) {
      throw Error(ErrorCode::domain, "marginal probabilities must lie in [0, 1]");
    }
  }
  return marginals.probs;
}

void check_strategy(const PureStrategy& s, int limit, const char* what) {
  if (!s.empty() && s.channels().back() >= limit) {
    throw Error(ErrorCode::invalid_strategy,
                std::string(what) + " contains channel " + std::to_string(s.channels().back()) +
                    " but the instance has " + std::to_string(limit) + " channels");
  }
}

}  // namespace misdef
