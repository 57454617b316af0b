#pragma once

#include <cstdint>
#include <vector>

#include "misdef/model.hpp"

namespace misdef {

/// Follow-the-perturbed-leader self-play on voter-disjoint instances. Both
/// players keep cumulative linear reward vectors and each round pick the
/// budget-size set maximizing cumulative reward plus a fresh uniform
/// perturbation in [0, perturbation_scale]^m.
struct FtplConfig {
  double epsilon = 0.1;            // additive equilibrium target
  long iterations = 0;             // 0 = derive from epsilon
  double perturbation_scale = 0.0; // 0 = 1 / epsilon
  std::uint64_t seed = 0;
};

/// Round count sufficient for an epsilon-equilibrium of the empirical
/// mixtures: ceil(4 n^2 max(k_a [+ flip_radius if adversarial], k_d) / eps^2).
long iterations_for_epsilon(int num_voters, int attacker_budget, int defender_budget,
                            double epsilon, bool adversarial = false, int flip_radius = 0);

struct FtplTrace {
  std::vector<PureStrategy> attacker_history;   // t = 1..T
  std::vector<PureStrategy> defender_history;   // t = 1..T
  std::vector<double> attacker_cumulative;      // final cumulative reward vectors
  std::vector<double> defender_cumulative;
  double realized_total_payoff = 0.0;           // sum_t f(S_d^t, S_a^t)
  long iterations = 0;

  MixedStrategy attacker_mixture() const;       // uniform over history, merged
  MixedStrategy defender_mixture() const;
};

/// Self-play under one weight vector. Throws ErrorCode::structure on
/// non-disjoint instances.
FtplTrace ftpl_solve(const GameInstance& inst, std::span<const double> weights,
                     const FtplConfig& cfg);

struct FtplAsymmetricTrace {
  std::vector<PureStrategy> defender_history;
  std::vector<std::vector<PureStrategy>> attacker_histories;  // [sample][t]
  std::vector<double> defender_cumulative;
  long iterations = 0;

  MixedStrategy defender_mixture() const;
};

/// Informational asymmetry: one attacker instance per preference sample, each
/// best-responding under its own weights; the defender follows the average of
/// the per-sample reward vectors. All per-sample perturbation streams are
/// seeded identically, so N = 1 degenerates bitwise to ftpl_solve and a run
/// with identical samples reproduces it exactly whenever averaging N equal
/// reward vectors is exact (any N that is a power of two).
FtplAsymmetricTrace ftpl_asymmetric(const GameInstance& inst,
                                    const std::vector<std::vector<double>>& sample_weights,
                                    const FtplConfig& cfg);

struct FtplAdversarialTrace {
  std::vector<PureStrategy> attacker_history;  // sets over m + n extended channels
  std::vector<PureStrategy> defender_history;  // sets over the m real channels
  std::vector<double> attacker_cumulative;
  std::vector<double> defender_cumulative;
  double realized_total_payoff = 0.0;
  long iterations = 0;
  int real_channels = 0;
  int flip_budget = 0;

  MixedStrategy attacker_mixture() const;
  MixedStrategy defender_mixture() const;
};

/// Robust-preference variant on the adversarial extension: the attacker picks
/// the top-k_a real channels and, independently, the top-radius pseudo
/// channels each round. Per-round rewards are the singleton-attack values on
/// the extension (exactly the disjoint linear rewards on the real block), so
/// radius = 0 reproduces ftpl_solve trace-for-trace.
FtplAdversarialTrace ftpl_adversarial(const GameInstance& inst,
                                      std::span<const std::uint8_t> nominal, int radius,
                                      const FtplConfig& cfg);

}  // namespace misdef
