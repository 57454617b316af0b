#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "misdef/model.hpp"

namespace misdef {

// All evaluators take per-voter weights w in [0,1]^n: 0/1 leanings for known
// preferences, probabilities under the independent-marginals model, and 1s on
// adversarially extended instances. Every function is pure.

/// Expected number of switched voters:
///   f(S_d, S_a) = sum_v w_v * prod_{u in S_d} (1 - q_uv) * (1 - prod_{u in S_a} (1 - p_uv)).
double payoff(const GameInstance& inst, std::span<const double> weights,
              const PureStrategy& defense, const PureStrategy& attack);

double expected_payoff(const GameInstance& inst, std::span<const double> weights,
                       const MixedStrategy& defense, const PureStrategy& attack);
double expected_payoff(const GameInstance& inst, std::span<const double> weights,
                       const PureStrategy& defense, const MixedStrategy& attack);
double expected_payoff(const GameInstance& inst, std::span<const double> weights,
                       const MixedStrategy& defense, const MixedStrategy& attack);

/// Per-voter probability that the attack reaches (and would switch) the voter.
std::vector<double> attack_success(const GameInstance& inst, const PureStrategy& attack);
std::vector<double> attack_success(const GameInstance& inst, const MixedStrategy& attack);
/// Independent-inclusion semantics: 1 - prod_u (1 - x_u p_uv).
std::vector<double> attack_success(const GameInstance& inst, std::span<const double> marginals);
std::vector<double> attack_success(const GameInstance& inst, const MarginalMixture& attack);

/// Per-voter expected defense factor prod_{u in S_d} (1 - q_uv).
std::vector<double> defense_factor(const GameInstance& inst, const PureStrategy& defense);
std::vector<double> defense_factor(const GameInstance& inst, const MixedStrategy& defense);

/// Linear coefficients for voter-disjoint instances:
///   attack_value[u]  = sum_{v in V_u} w_v p_uv        (value of attacking u alone)
///   overlap_loss[u]  = sum_{v in V_u} w_v p_uv q_uv   (amount removed when u is also defended)
/// so f(S_d, S_a) = sum_{u in S_a} attack_value[u] - sum_{u in S_a ∩ S_d} overlap_loss[u].
struct DisjointDecomposition {
  std::vector<double> attack_value;
  std::vector<double> overlap_loss;
};
/// Throws ErrorCode::structure when some voter touches more than one channel.
DisjointDecomposition disjoint_decompose(const GameInstance& inst,
                                         std::span<const double> weights);

/// Value of attacking each channel alone given a fixed defense,
/// r[u] = f(S_d, {u}). On disjoint instances r[u] = attack_value[u] - 1[u in S_d] * overlap_loss[u].
std::vector<double> singleton_attack_values(const GameInstance& inst,
                                            std::span<const double> weights,
                                            const PureStrategy& defense);

/// Influence blocked by each channel alone given a fixed attack,
/// r[u] = f('no defense', S_a) - f({u}, S_a). On disjoint instances
/// r[u] = 1[u in S_a] * overlap_loss[u].
std::vector<double> singleton_defense_values(const GameInstance& inst,
                                             std::span<const double> weights,
                                             const PureStrategy& attack);

/// Multilinear extension of the attacker set function under independent
/// channel inclusion x, with the defense fixed:
///   F(x | S_d) = sum_v w_v prod_{u in S_d}(1 - q_uv) (1 - prod_u (1 - x_u p_uv)).
/// Throws ErrorCode::domain when x is infeasible for its stated budget.
double multilinear_extension(const GameInstance& inst, std::span<const double> weights,
                             const MarginalVector& attack, const PureStrategy& defense);

/// Gradient of the multilinear extension. Per voter the leave-one-out products
/// are formed from prefix/suffix partial products, so zero factors need no
/// special casing and no division is performed. O(total edges) per call.
std::vector<double> multilinear_gradient(const GameInstance& inst,
                                         std::span<const double> weights,
                                         const MarginalVector& attack,
                                         const PureStrategy& defense);

/// Expected influence blocked by the defense against a randomized attacker:
///   g(S_d) = E[f(no defense, S_a)] - E[f(S_d, S_a)]
///          = sum_v w_v A_v (1 - prod_{u in S_d}(1 - q_uv)),
/// where A_v is the attack-success profile. Monotone submodular in S_d.
double blocked_influence(const GameInstance& inst, std::span<const double> weights,
                         const PureStrategy& defense, const MixedStrategy& attack);
double blocked_influence(const GameInstance& inst, std::span<const double> weights,
                         const PureStrategy& defense, const MarginalVector& attack);
/// Same quantity from a precomputed per-voter coefficient vector c_v = w_v A_v.
double blocked_influence(const GameInstance& inst, std::span<const double> coefficients,
                         const PureStrategy& defense);

/// Robust-preference reformulation: pseudo channel m+v targets voter v alone
/// with p = 1, q = 0, real edges carry p~_uv = nominal_v * p_uv, and voter
/// weights become all-ones. Standard evaluators on the extension reproduce
/// exactly the game in which the attacker may both flip up to `radius`
/// doubtful voters and reach them directly, while cover of a voter's real
/// channels still protects it. Budgets: attacker `k_a` over real channels plus
/// `radius` pseudo channels (a two-block partition), defender unchanged.
struct AdversarialExtension {
  GameInstance instance;        // m + n channels, same n voters
  std::vector<double> weights;  // all ones
  int real_channels = 0;
  int flip_budget = 0;
};
AdversarialExtension adversarial_extend(const GameInstance& inst,
                                        std::span<const std::uint8_t> nominal,
                                        int radius);

struct MonteCarloResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::int64_t trials = 0;
};
/// Simulation cross-check of payoff: per trial, draw all immunization events
/// for covered channels, then all reach events for attacked channels; a voter
/// counts w_v when reached and not immunized.
MonteCarloResult monte_carlo_payoff(const GameInstance& inst,
                                    std::span<const double> weights,
                                    const PureStrategy& defense,
                                    const PureStrategy& attack,
                                    std::int64_t trials, std::uint64_t seed);

}  // namespace misdef
