#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "misdef/model.hpp"
#include "misdef/projections.hpp"

namespace misdef {

enum class UpdateRule { euclidean, exponentiated };
enum class MarginalInit {
  spread,        // x0_u = 1 / (m * k_a) on every coordinate
  uniform_mass,  // x0_u = k_a / m (full budget spread uniformly)
};

/// Online mirror ascent over the attacker's capped simplex against a greedy
/// best-responding defender. General (non-disjoint) instances.
struct MirrorConfig {
  long iterations = 50;
  double step_size = 0.0;        // 0 = derive (0.05 when T == 50, else 1/(L sqrt(2T)))
  UpdateRule update_rule = UpdateRule::euclidean;
  EntropicMode entropic_mode = EntropicMode::closed_form;
  double budget_expansion = 1.0; // defender greedy budget ceil(alpha * k_d), alpha >= 1
  double epsilon = 0.1;          // additive target used by derived budgets/iterations
  MarginalInit init = MarginalInit::spread;
  bool lazy_greedy = false;
};

/// Constants of the regret bound for each geometry: gradient-norm bound L and
/// feasible-set diameter D, from b = max_u f(no defense, {u}):
///   exponentiated: L = b,          D = k_a log m
///   euclidean:     L = b sqrt(m),  D = sqrt(k_a)
struct RegretConstants {
  double gradient_bound = 0.0;      // L
  double diameter = 0.0;            // D
  double max_single_channel = 0.0;  // b
};
RegretConstants regret_constants(const GameInstance& inst, std::span<const double> weights,
                                 UpdateRule rule, int attacker_budget);

double derived_step_size(const RegretConstants& constants, long iterations);

/// Iterations sufficient for additive accuracy eps in the averaged-iterate
/// bound sqrt(2) L D / sqrt(T) <= eps / 4: T = ceil((4 sqrt(2) L D / eps)^2).
long mirror_iterations_for_epsilon(const RegretConstants& constants, double epsilon);

/// Greedy maximization of blocked influence given per-voter coefficients
/// c_v = w_v * (attack success on v). Stops early when no candidate improves.
/// Ties toward the lower index. candidate_channels restricts the universe
/// (-1 = all channels). The lazy variant (stale-bound priority queue) returns
/// the identical set.
PureStrategy greedy_best_response(const GameInstance& inst,
                                  std::span<const double> coefficients, int budget,
                                  bool lazy = false, int candidate_channels = -1);
PureStrategy greedy_best_response(const GameInstance& inst, std::span<const double> weights,
                                  const MixedStrategy& attack, int budget, bool lazy = false,
                                  int candidate_channels = -1);
PureStrategy greedy_best_response(const GameInstance& inst, std::span<const double> weights,
                                  const MarginalVector& attack, int budget, bool lazy = false,
                                  int candidate_channels = -1);

struct MirrorTrace {
  std::vector<PureStrategy> defender_history;  // S_d^t, t = 1..T
  MarginalMixture attacker_iterates;           // x played each round (uniform weights)
  std::vector<double> final_marginal;
  std::vector<double> iteration_values;        // F(x^{t-1} | S_d^t)
  std::vector<double> greedy_values;           // g(S_d^t | x^{t-1})
  RegretConstants constants;
  double step_size = 0.0;
  long iterations = 0;

  MixedStrategy defender_mixture() const;
  /// The attacker's output strategy: the post-run marginal as a one-vector
  /// mixture. Certificates use it for the lower bound (any fixed attack
  /// lower-bounds the game value; the final iterate is the tightest here).
  MarginalMixture final_mixture() const;
};

/// Alternate greedy defender response and projected (or exponentiated)
/// gradient steps on the multilinear extension; returns the uniform mixture
/// over defender responses plus the attacker iterate trace.
MirrorTrace online_gradient_solve(const GameInstance& inst, std::span<const double> weights,
                                  const MirrorConfig& cfg);

struct AsymmetricMirrorTrace {
  std::vector<PureStrategy> defender_history;
  std::vector<MarginalMixture> per_sample_iterates;  // [sample]
  std::vector<std::vector<double>> final_marginals;  // [sample] post-run x
  std::vector<double> iteration_values;              // averaged over samples
  RegretConstants constants;
  double step_size = 0.0;
  long iterations = 0;

  MixedStrategy defender_mixture() const;
};

/// One attacker marginal per preference sample; the defender responds to the
/// average blocked-influence objective. Deterministic, so equal samples
/// reproduce online_gradient_solve exactly.
AsymmetricMirrorTrace og_asymmetric(const GameInstance& inst,
                                    const std::vector<std::vector<double>>& sample_weights,
                                    const MirrorConfig& cfg);

struct AdversarialMirrorTrace {
  MirrorTrace trace;             // defender history over real channels; x over m + n coords
  int real_channels = 0;
  int flip_budget = 0;
};

/// Robust variant on the adversarial extension: the marginal lives on m + n
/// coordinates with block budgets (k_a, radius) and is projected per block;
/// the greedy defender is restricted to real channels. The initial point is
/// the spread init projected onto the block polytope, so radius = 0 matches
/// online_gradient_solve iterate-for-iterate.
AdversarialMirrorTrace og_adversarial(const GameInstance& inst,
                                      std::span<const std::uint8_t> nominal, int radius,
                                      const MirrorConfig& cfg);

/// Sample count from the informational-asymmetry concentration bound
/// (constant 1, natural logarithms):
///   N = ceil(n^2 m T / eps^2 * ln(1/delta) * ln m).
/// Exposed so reports can cite the theoretical N; experiments default to a
/// configured practical N.
double sample_count_asymmetric(int num_voters, int num_channels, long iterations,
                               double epsilon, double delta);

}  // namespace misdef
