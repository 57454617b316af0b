#include "misdef/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "misdef/error.hpp"
#include "misdef/rng.hpp"

namespace misdef {

namespace {

void check_weights(const GameInstance& inst, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
  }
}

// Multiplies per-voter products of (1 - q) over the covered channels.
void apply_defense(const GameInstance& inst, const PureStrategy& defense,
                   std::vector<double>& factor) {
  for (int u : defense) {
    for (const auto& e : inst.channel_edges(u)) factor[e.other] *= 1.0 - e.q;
  }
}

// Multiplies per-voter products of (1 - p) over the attacked channels.
void apply_attack_failure(const GameInstance& inst, const PureStrategy& attack,
                          std::vector<double>& failure) {
  for (int u : attack) {
    for (const auto& e : inst.channel_edges(u)) failure[e.other] *= 1.0 - e.p;
  }
}

void check_marginal(const GameInstance& inst, const MarginalVector& attack) {
  if (static_cast<int>(attack.x.size()) != inst.num_channels()) {
    throw Error(ErrorCode::domain, "marginal vector size must equal the channel count");
  }
  double total = 0.0;
  for (double xi : attack.x) {
    if (!(xi >= -1e-9 && xi <= 1.0 + 1e-9)) {
      throw Error(ErrorCode::domain, "marginal coordinates must lie in [0, 1]");
    }
    total += xi;
  }
  if (total > attack.budget + 1e-9) {
    throw Error(ErrorCode::domain, "marginal vector exceeds its budget");
  }
}

}  // namespace

double payoff(const GameInstance& inst, std::span<const double> weights,
              const PureStrategy& defense, const PureStrategy& attack) {
  check_weights(inst, weights);
  check_strategy(defense, inst.num_channels(), "defense");
  check_strategy(attack, inst.num_channels(), "attack");
  std::vector<double> defense_prod(inst.num_voters(), 1.0);
  std::vector<double> attack_fail(inst.num_voters(), 1.0);
  apply_defense(inst, defense, defense_prod);
  apply_attack_failure(inst, attack, attack_fail);
  double total = 0.0;
  for (int v = 0; v < inst.num_voters(); ++v) {
    total += weights[v] * defense_prod[v] * (1.0 - attack_fail[v]);
  }
  return total;
}

std::vector<double> attack_success(const GameInstance& inst, const PureStrategy& attack) {
  check_strategy(attack, inst.num_channels(), "attack");
  std::vector<double> failure(inst.num_voters(), 1.0);
  apply_attack_failure(inst, attack, failure);
  for (double& f : failure) f = 1.0 - f;
  return failure;
}

std::vector<double> attack_success(const GameInstance& inst, const MixedStrategy& attack) {
  std::vector<double> profile(inst.num_voters(), 0.0);
  std::vector<double> failure(inst.num_voters());
  for (int i = 0; i < attack.size(); ++i) {
    std::fill(failure.begin(), failure.end(), 1.0);
    apply_attack_failure(inst, attack.support()[i], failure);
    const double w = attack.weights()[i];
    for (int v = 0; v < inst.num_voters(); ++v) profile[v] += w * (1.0 - failure[v]);
  }
  return profile;
}

std::vector<double> attack_success(const GameInstance& inst, std::span<const double> marginals) {
  if (static_cast<int>(marginals.size()) != inst.num_channels()) {
    throw Error(ErrorCode::domain, "marginal vector size must equal the channel count");
  }
  std::vector<double> profile(inst.num_voters(), 0.0);
  for (int v = 0; v < inst.num_voters(); ++v) {
    double fail = 1.0;
    for (const auto& e : inst.voter_edges(v)) fail *= 1.0 - marginals[e.other] * e.p;
    profile[v] = 1.0 - fail;
  }
  return profile;
}

std::vector<double> attack_success(const GameInstance& inst, const MarginalMixture& attack) {
  if (attack.vectors.empty() || attack.vectors.size() != attack.weights.size()) {
    throw Error(ErrorCode::invalid_strategy, "marginal mixture needs matching nonempty vectors and weights");
  }
  std::vector<double> profile(inst.num_voters(), 0.0);
  for (std::size_t i = 0; i < attack.vectors.size(); ++i) {
    std::vector<double> one = attack_success(inst, std::span<const double>(attack.vectors[i]));
    const double w = attack.weights[i];
    for (int v = 0; v < inst.num_voters(); ++v) profile[v] += w * one[v];
  }
  return profile;
}

std::vector<double> defense_factor(const GameInstance& inst, const PureStrategy& defense) {
  check_strategy(defense, inst.num_channels(), "defense");
  std::vector<double> factor(inst.num_voters(), 1.0);
  apply_defense(inst, defense, factor);
  return factor;
}

std::vector<double> defense_factor(const GameInstance& inst, const MixedStrategy& defense) {
  std::vector<double> profile(inst.num_voters(), 0.0);
  std::vector<double> factor(inst.num_voters());
  for (int i = 0; i < defense.size(); ++i) {
    std::fill(factor.begin(), factor.end(), 1.0);
    apply_defense(inst, defense.support()[i], factor);
    const double w = defense.weights()[i];
    for (int v = 0; v < inst.num_voters(); ++v) profile[v] += w * factor[v];
  }
  return profile;
}

namespace {

double profile_payoff(std::span<const double> weights, std::span<const double> defense_profile,
                      std::span<const double> success_profile) {
  double total = 0.0;
  for (std::size_t v = 0; v < weights.size(); ++v) {
    total += weights[v] * defense_profile[v] * success_profile[v];
  }
  return total;
}

}  // namespace

double expected_payoff(const GameInstance& inst, std::span<const double> weights,
                       const MixedStrategy& defense, const PureStrategy& attack) {
  check_weights(inst, weights);
  return profile_payoff(weights, defense_factor(inst, defense), attack_success(inst, attack));
}

double expected_payoff(const GameInstance& inst, std::span<const double> weights,
                       const PureStrategy& defense, const MixedStrategy& attack) {
  check_weights(inst, weights);
  return profile_payoff(weights, defense_factor(inst, defense), attack_success(inst, attack));
}

double expected_payoff(const GameInstance& inst, std::span<const double> weights,
                       const MixedStrategy& defense, const MixedStrategy& attack) {
  check_weights(inst, weights);
  return profile_payoff(weights, defense_factor(inst, defense), attack_success(inst, attack));
}

DisjointDecomposition disjoint_decompose(const GameInstance& inst,
                                         std::span<const double> weights) {
  check_weights(inst, weights);
  if (!inst.disjoint()) {
    throw Error(ErrorCode::structure,
                "linear decomposition requires every voter to touch at most one channel");
  }
  DisjointDecomposition d;
  d.attack_value.assign(inst.num_channels(), 0.0);
  d.overlap_loss.assign(inst.num_channels(), 0.0);
  for (const Edge& e : inst.edges()) {
    d.attack_value[e.channel] += weights[e.voter] * e.p;
    d.overlap_loss[e.channel] += weights[e.voter] * e.p * e.q;
  }
  return d;
}

std::vector<double> singleton_attack_values(const GameInstance& inst,
                                            std::span<const double> weights,
                                            const PureStrategy& defense) {
  check_weights(inst, weights);
  std::vector<double> defense_prod(inst.num_voters(), 1.0);
  apply_defense(inst, defense, defense_prod);
  std::vector<double> values(inst.num_channels(), 0.0);
  for (int u = 0; u < inst.num_channels(); ++u) {
    double r = 0.0;
    for (const auto& e : inst.channel_edges(u)) {
      r += weights[e.other] * e.p * defense_prod[e.other];
    }
    values[u] = r;
  }
  return values;
}

std::vector<double> singleton_defense_values(const GameInstance& inst,
                                             std::span<const double> weights,
                                             const PureStrategy& attack) {
  check_weights(inst, weights);
  std::vector<double> success = attack_success(inst, attack);
  std::vector<double> values(inst.num_channels(), 0.0);
  for (int u = 0; u < inst.num_channels(); ++u) {
    double r = 0.0;
    for (const auto& e : inst.channel_edges(u)) {
      r += weights[e.other] * e.q * success[e.other];
    }
    values[u] = r;
  }
  return values;
}

double multilinear_extension(const GameInstance& inst, std::span<const double> weights,
                             const MarginalVector& attack, const PureStrategy& defense) {
  check_weights(inst, weights);
  check_marginal(inst, attack);
  std::vector<double> defense_prod(inst.num_voters(), 1.0);
  apply_defense(inst, defense, defense_prod);
  double total = 0.0;
  for (int v = 0; v < inst.num_voters(); ++v) {
    double fail = 1.0;
    for (const auto& e : inst.voter_edges(v)) fail *= 1.0 - attack.x[e.other] * e.p;
    total += weights[v] * defense_prod[v] * (1.0 - fail);
  }
  return total;
}

std::vector<double> multilinear_gradient(const GameInstance& inst,
                                         std::span<const double> weights,
                                         const MarginalVector& attack,
                                         const PureStrategy& defense) {
  check_weights(inst, weights);
  check_marginal(inst, attack);
  std::vector<double> defense_prod(inst.num_voters(), 1.0);
  apply_defense(inst, defense, defense_prod);

  std::vector<double> grad(inst.num_channels(), 0.0);
  std::vector<double> prefix, suffix;
  for (int v = 0; v < inst.num_voters(); ++v) {
    const auto& incident = inst.voter_edges(v);
    if (incident.empty()) continue;
    const double wd = weights[v] * defense_prod[v];
    const std::size_t d = incident.size();
    prefix.assign(d + 1, 1.0);
    suffix.assign(d + 1, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
      prefix[i + 1] = prefix[i] * (1.0 - attack.x[incident[i].other] * incident[i].p);
    }
    for (std::size_t i = d; i-- > 0;) {
      suffix[i] = suffix[i + 1] * (1.0 - attack.x[incident[i].other] * incident[i].p);
    }
    for (std::size_t i = 0; i < d; ++i) {
      grad[incident[i].other] += wd * incident[i].p * prefix[i] * suffix[i + 1];
    }
  }
  return grad;
}

double blocked_influence(const GameInstance& inst, std::span<const double> coefficients,
                         const PureStrategy& defense) {
  if (static_cast<int>(coefficients.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "coefficient vector size must equal the voter count");
  }
  std::vector<double> defense_prod(inst.num_voters(), 1.0);
  apply_defense(inst, defense, defense_prod);
  double total = 0.0;
  for (int v = 0; v < inst.num_voters(); ++v) {
    total += coefficients[v] * (1.0 - defense_prod[v]);
  }
  return total;
}

double blocked_influence(const GameInstance& inst, std::span<const double> weights,
                         const PureStrategy& defense, const MixedStrategy& attack) {
  check_weights(inst, weights);
  std::vector<double> c = attack_success(inst, attack);
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];
  return blocked_influence(inst, std::span<const double>(c), defense);
}

double blocked_influence(const GameInstance& inst, std::span<const double> weights,
                         const PureStrategy& defense, const MarginalVector& attack) {
  check_weights(inst, weights);
  check_marginal(inst, attack);
  std::vector<double> c = attack_success(inst, std::span<const double>(attack.x));
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];
  return blocked_influence(inst, std::span<const double>(c), defense);
}

AdversarialExtension adversarial_extend(const GameInstance& inst,
                                        std::span<const std::uint8_t> nominal, int radius) {
  if (static_cast<int>(nominal.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "nominal preference size must equal the voter count");
  }
  if (radius < 0 || radius > inst.num_voters()) {
    throw Error(ErrorCode::config, "flip radius must lie in [0, voters]");
  }
  const int m = inst.num_channels();
  const int n = inst.num_voters();
  std::vector<Edge> edges;
  edges.reserve(inst.edges().size() + static_cast<std::size_t>(n));
  for (const Edge& e : inst.edges()) {
    edges.push_back({e.channel, e.voter, nominal[e.voter] ? e.p : 0.0, e.q});
  }
  for (int v = 0; v < n; ++v) {
    edges.push_back({m + v, v, 1.0, 0.0});
  }
  AdversarialExtension ext{
      GameInstance(m + n, n, inst.attacker_budget(), inst.defender_budget(), std::move(edges)),
      std::vector<double>(static_cast<std::size_t>(n), 1.0), m, radius};
  return ext;
}

MonteCarloResult monte_carlo_payoff(const GameInstance& inst, std::span<const double> weights,
                                    const PureStrategy& defense, const PureStrategy& attack,
                                    std::int64_t trials, std::uint64_t seed) {
  check_weights(inst, weights);
  check_strategy(defense, inst.num_channels(), "defense");
  check_strategy(attack, inst.num_channels(), "attack");
  if (trials < 1) throw Error(ErrorCode::invalid_argument, "trial count must be positive");

  Rng rng(seed);
  std::vector<std::uint8_t> immunized(inst.num_voters());
  std::vector<std::uint8_t> reached(inst.num_voters());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::fill(immunized.begin(), immunized.end(), std::uint8_t{0});
    std::fill(reached.begin(), reached.end(), std::uint8_t{0});
    for (int u : defense) {
      for (const auto& e : inst.channel_edges(u)) {
        if (rng.bernoulli(e.q)) immunized[e.other] = 1;
      }
    }
    for (int u : attack) {
      for (const auto& e : inst.channel_edges(u)) {
        if (rng.bernoulli(e.p)) reached[e.other] = 1;
      }
    }
    double value = 0.0;
    for (int v = 0; v < inst.num_voters(); ++v) {
      if (reached[v] && !immunized[v]) value += weights[v];
    }
    sum += value;
    sum_sq += value * value;
  }
  MonteCarloResult result;
  result.trials = trials;
  result.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    const double variance =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(trials)) /
                          static_cast<double>(trials - 1));
    result.standard_error = std::sqrt(variance / static_cast<double>(trials));
  }
  return result;
}

}  // namespace misdef
