#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace misdef {

/// One advertising-channel -> voter link. p is the probability the attacker's
/// message switches the voter when the channel is attacked; q is the
/// probability the voter becomes immune when the channel is preemptively
/// covered by the defender. Absent edges behave as p = q = 0.
struct Edge {
  int channel = 0;
  int voter = 0;
  double p = 0.0;
  double q = 0.0;
};

/// Bipartite channel/voter game instance. Immutable after construction; all
/// evaluators and solvers take it by const reference and may be called
/// concurrently on the same object.
class GameInstance {
 public:
  struct IncidentEdge {
    int other = 0;  // voter id in channel lists, channel id in voter lists
    double p = 0.0;
    double q = 0.0;
  };

  /// Throws ErrorCode::invalid_argument for nonpositive dimensions or edge
  /// endpoints out of range. Value-level problems (probabilities outside
  /// [0,1], budget overflow, duplicate edges) remain representable and are
  /// reported by validate_instance.
  GameInstance(int num_channels, int num_voters, int attacker_budget,
               int defender_budget, std::vector<Edge> edges);

  int num_channels() const { return num_channels_; }
  int num_voters() const { return num_voters_; }
  int attacker_budget() const { return attacker_budget_; }
  int defender_budget() const { return defender_budget_; }

  /// Edges in canonical (channel, voter) order.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<IncidentEdge>& channel_edges(int channel) const;
  const std::vector<IncidentEdge>& voter_edges(int voter) const;

  /// True when every voter touches at most one channel.
  bool disjoint() const { return disjoint_; }

  /// Copy with different budgets (used by budget sweeps).
  GameInstance with_budgets(int attacker_budget, int defender_budget) const;

 private:
  int num_channels_;
  int num_voters_;
  int attacker_budget_;
  int defender_budget_;
  std::vector<Edge> edges_;
  std::vector<std::vector<IncidentEdge>> by_channel_;
  std::vector<std::vector<IncidentEdge>> by_voter_;
  bool disjoint_ = true;
};

// Voter preference models. Known: observed 0/1 leanings (1 = initially favors
// the defended candidate, so reachable voters can be switched). Marginals:
// independent per-voter probabilities of leaning 1. Sampled: posterior draws
// of full leaning vectors. Adversarial: a nominal vector that may be wrong in
// up to `radius` positions.
struct KnownPreferences {
  std::vector<std::uint8_t> theta;
};
struct MarginalPreferences {
  std::vector<double> probs;
};
struct SampledPreferences {
  std::vector<std::vector<std::uint8_t>> samples;
};
struct AdversarialPreferences {
  std::vector<std::uint8_t> nominal;
  int radius = 0;
};
using PreferenceModel = std::variant<KnownPreferences, MarginalPreferences,
                                     SampledPreferences, AdversarialPreferences>;

/// Sorted duplicate-free channel subset.
class PureStrategy {
 public:
  PureStrategy() = default;
  explicit PureStrategy(std::vector<int> channels);

  static PureStrategy first_k(int k);

  const std::vector<int>& channels() const { return channels_; }
  int size() const { return static_cast<int>(channels_.size()); }
  bool empty() const { return channels_.empty(); }
  bool contains(int channel) const;

  auto begin() const { return channels_.begin(); }
  auto end() const { return channels_.end(); }

  friend bool operator==(const PureStrategy&, const PureStrategy&) = default;
  friend auto operator<=>(const PureStrategy& a, const PureStrategy& b) {
    return a.channels_ <=> b.channels_;
  }

 private:
  std::vector<int> channels_;
};

/// Finite-support distribution over pure strategies. Weights are validated to
/// be nonnegative and to sum to 1 within 1e-9.
class MixedStrategy {
 public:
  MixedStrategy(std::vector<PureStrategy> support, std::vector<double> weights);

  /// Uniform distribution over a play history; duplicate sets are merged.
  static MixedStrategy uniform(const std::vector<PureStrategy>& history);

  const std::vector<PureStrategy>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  int size() const { return static_cast<int>(support_.size()); }

 private:
  MixedStrategy() = default;
  std::vector<PureStrategy> support_;
  std::vector<double> weights_;
};

/// Fractional channel-selection point in the capped simplex
/// { x : 0 <= x_u <= 1, sum_u x_u <= budget }.
struct MarginalVector {
  std::vector<double> x;
  double budget = 0.0;
};

/// Finite mixture of marginal vectors (the attacker object produced by the
/// gradient-based solvers: one iterate per round, uniform weights).
struct MarginalMixture {
  std::vector<std::vector<double>> vectors;
  std::vector<double> weights;
  double budget = 0.0;
};

struct ValidationReport {
  bool ok = true;
  bool disjoint = true;
  std::vector<std::string> violations;
};

/// Diagnoses value-level invariant violations (probability ranges, budget
/// bounds, duplicate edges). Never throws on violations; reports them all.
ValidationReport validate_instance(const GameInstance& instance);

/// Known 0/1 leanings as real-valued voter weights.
std::vector<double> preference_weights(const KnownPreferences& known);

/// Certainty-equivalence substitution: under independent voter leanings the
/// expected payoff equals the payoff with per-voter probabilities used as
/// weights, so marginals drop into every evaluator unchanged.
std::vector<double> substitute_marginals(const MarginalPreferences& marginals);

/// Throws ErrorCode::invalid_strategy unless all indices are in [0, limit).
void check_strategy(const PureStrategy& s, int limit, const char* what);

}  // namespace misdef
