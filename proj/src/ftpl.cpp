#include "misdef/ftpl.hpp"

#include <cmath>
#include <string>

#include "misdef/error.hpp"
#include "misdef/payoff.hpp"
#include "misdef/projections.hpp"
#include "misdef/rng.hpp"

namespace misdef {

namespace {

struct ResolvedFtpl {
  long iterations = 0;
  double scale = 0.0;
};

ResolvedFtpl resolve(const FtplConfig& cfg, const GameInstance& inst, bool adversarial,
                     int flip_radius) {
  if (cfg.iterations < 0) {
    throw Error(ErrorCode::config, "iteration count must be nonnegative");
  }
  if (cfg.perturbation_scale < 0.0 || !std::isfinite(cfg.perturbation_scale)) {
    throw Error(ErrorCode::config, "perturbation scale must be finite and nonnegative");
  }
  ResolvedFtpl r;
  if (cfg.iterations > 0) {
    r.iterations = cfg.iterations;
  } else {
    if (!(cfg.epsilon > 0.0)) {
      throw Error(ErrorCode::config, "epsilon must be positive to derive the iteration count");
    }
    r.iterations =
        iterations_for_epsilon(inst.num_voters(), inst.attacker_budget(),
                               inst.defender_budget(), cfg.epsilon, adversarial, flip_radius);
  }
  if (cfg.perturbation_scale > 0.0) {
    r.scale = cfg.perturbation_scale;
  } else {
    if (!(cfg.epsilon > 0.0)) {
      throw Error(ErrorCode::config, "epsilon must be positive to derive the perturbation scale");
    }
    r.scale = 1.0 / cfg.epsilon;
  }
  return r;
}

// Cumulative reward plus a fresh uniform perturbation per coordinate, drawn in
// ascending coordinate order.
PureStrategy perturbed_leader(std::span<const double> cumulative, double scale, int k, Rng& rng,
                              std::vector<double>& scores) {
  scores.resize(cumulative.size());
  for (std::size_t u = 0; u < cumulative.size(); ++u) {
    scores[u] = cumulative[u] + rng.uniform(0.0, scale);
  }
  return top_k(scores, k);
}

void require_disjoint(const GameInstance& inst) {
  if (!inst.disjoint()) {
    throw Error(ErrorCode::structure,
                "the perturbed-leader solver needs a voter-disjoint instance; use the "
                "gradient-based solver instead");
  }
}

}  // namespace

long iterations_for_epsilon(int num_voters, int attacker_budget, int defender_budget,
                            double epsilon, bool adversarial, int flip_radius) {
  if (num_voters < 1 || attacker_budget < 0 || defender_budget < 0 || flip_radius < 0) {
    throw Error(ErrorCode::invalid_argument, "dimensions and budgets must be nonnegative");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  }
  const double attack_size =
      adversarial ? attacker_budget + flip_radius : attacker_budget;
  const double k = std::max(attack_size, static_cast<double>(defender_budget));
  const double n = static_cast<double>(num_voters);
  const double t = std::ceil(4.0 * n * n * k / (epsilon * epsilon));
  if (!(t >= 1.0)) return 1;
  if (t > 1e18) {
    throw Error(ErrorCode::resource, "derived iteration count exceeds 1e18");
  }
  return static_cast<long>(t);
}

MixedStrategy FtplTrace::attacker_mixture() const { return MixedStrategy::uniform(attacker_history); }
MixedStrategy FtplTrace::defender_mixture() const { return MixedStrategy::uniform(defender_history); }
MixedStrategy FtplAsymmetricTrace::defender_mixture() const {
  return MixedStrategy::uniform(defender_history);
}
MixedStrategy FtplAdversarialTrace::attacker_mixture() const {
  return MixedStrategy::uniform(attacker_history);
}
MixedStrategy FtplAdversarialTrace::defender_mixture() const {
  return MixedStrategy::uniform(defender_history);
}

FtplTrace ftpl_solve(const GameInstance& inst, std::span<const double> weights,
                     const FtplConfig& cfg) {
  require_disjoint(inst);
  if (static_cast<int>(weights.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
  }
  const ResolvedFtpl r = resolve(cfg, inst, false, 0);
  const int m = inst.num_channels();

  Rng attacker_rng(derive_seed(cfg.seed, "ftpl-attacker"));
  Rng defender_rng(derive_seed(cfg.seed, "ftpl-defender"));
  std::vector<double> cum_attack(m, 0.0), cum_defend(m, 0.0);
  std::vector<double> scores;

  FtplTrace trace;
  trace.iterations = r.iterations;
  trace.attacker_history.reserve(r.iterations);
  trace.defender_history.reserve(r.iterations);
  for (long t = 0; t < r.iterations; ++t) {
    PureStrategy attack =
        perturbed_leader(cum_attack, r.scale, inst.attacker_budget(), attacker_rng, scores);
    PureStrategy defense =
        perturbed_leader(cum_defend, r.scale, inst.defender_budget(), defender_rng, scores);

    const std::vector<double> attack_reward = singleton_attack_values(inst, weights, defense);
    const std::vector<double> defend_reward = singleton_defense_values(inst, weights, attack);
    for (int u = 0; u < m; ++u) {
      cum_attack[u] += attack_reward[u];
      cum_defend[u] += defend_reward[u];
    }
    trace.realized_total_payoff += payoff(inst, weights, defense, attack);
    trace.attacker_history.push_back(std::move(attack));
    trace.defender_history.push_back(std::move(defense));
  }
  trace.attacker_cumulative = std::move(cum_attack);
  trace.defender_cumulative = std::move(cum_defend);
  return trace;
}

FtplAsymmetricTrace ftpl_asymmetric(const GameInstance& inst,
                                    const std::vector<std::vector<double>>& sample_weights,
                                    const FtplConfig& cfg) {
  require_disjoint(inst);
  if (sample_weights.empty()) {
    throw Error(ErrorCode::invalid_argument, "at least one preference sample is required");
  }
  for (const auto& w : sample_weights) {
    if (static_cast<int>(w.size()) != inst.num_voters()) {
      throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
    }
  }
  const ResolvedFtpl r = resolve(cfg, inst, false, 0);
  const int m = inst.num_channels();
  const std::size_t samples = sample_weights.size();
  const double inv_samples = 1.0 / static_cast<double>(samples);

  // Every per-sample attacker uses the same derived seed: with one sample (or
  // identical samples) the run coincides with ftpl_solve.
  std::vector<Rng> attacker_rngs(samples, Rng(derive_seed(cfg.seed, "ftpl-attacker")));
  Rng defender_rng(derive_seed(cfg.seed, "ftpl-defender"));
  std::vector<std::vector<double>> cum_attack(samples, std::vector<double>(m, 0.0));
  std::vector<double> cum_defend(m, 0.0);
  std::vector<double> scores;

  FtplAsymmetricTrace trace;
  trace.iterations = r.iterations;
  trace.attacker_histories.resize(samples);
  for (auto& h : trace.attacker_histories) h.reserve(r.iterations);
  trace.defender_history.reserve(r.iterations);
  std::vector<PureStrategy> attacks(samples);
  for (long t = 0; t < r.iterations; ++t) {
    for (std::size_t j = 0; j < samples; ++j) {
      attacks[j] = perturbed_leader(cum_attack[j], r.scale, inst.attacker_budget(),
                                    attacker_rngs[j], scores);
    }
    PureStrategy defense =
        perturbed_leader(cum_defend, r.scale, inst.defender_budget(), defender_rng, scores);

    std::vector<double> defend_reward(m, 0.0);
    for (std::size_t j = 0; j < samples; ++j) {
      const std::vector<double> attack_reward =
          singleton_attack_values(inst, sample_weights[j], defense);
      for (int u = 0; u < m; ++u) cum_attack[j][u] += attack_reward[u];
      const std::vector<double> dr = singleton_defense_values(inst, sample_weights[j], attacks[j]);
      for (int u = 0; u < m; ++u) defend_reward[u] += dr[u];
      trace.attacker_histories[j].push_back(std::move(attacks[j]));
    }
    for (int u = 0; u < m; ++u) cum_defend[u] += defend_reward[u] * inv_samples;
    trace.defender_history.push_back(std::move(defense));
  }
  trace.defender_cumulative = std::move(cum_defend);
  return trace;
}

FtplAdversarialTrace ftpl_adversarial(const GameInstance& inst,
                                      std::span<const std::uint8_t> nominal, int radius,
                                      const FtplConfig& cfg) {
  require_disjoint(inst);
  const AdversarialExtension ext = adversarial_extend(inst, nominal, radius);
  const ResolvedFtpl r = resolve(cfg, inst, true, radius);
  const int m = inst.num_channels();
  const int n = inst.num_voters();

  Rng real_rng(derive_seed(cfg.seed, "ftpl-attacker"));
  Rng pseudo_rng(derive_seed(cfg.seed, "ftpl-attacker-pseudo"));
  Rng defender_rng(derive_seed(cfg.seed, "ftpl-defender"));
  std::vector<double> cum_attack(m + n, 0.0), cum_defend(m, 0.0);
  std::vector<double> scores;

  FtplAdversarialTrace trace;
  trace.iterations = r.iterations;
  trace.real_channels = m;
  trace.flip_budget = radius;
  trace.attacker_history.reserve(r.iterations);
  trace.defender_history.reserve(r.iterations);
  std::vector<double> real_scores(m), pseudo_scores(n);
  for (long t = 0; t < r.iterations; ++t) {
    for (int u = 0; u < m; ++u) real_scores[u] = cum_attack[u] + real_rng.uniform(0.0, r.scale);
    for (int v = 0; v < n; ++v) {
      pseudo_scores[v] = cum_attack[m + v] + pseudo_rng.uniform(0.0, r.scale);
    }
    std::vector<int> channels(top_k(real_scores, inst.attacker_budget()).channels());
    for (int v : top_k(pseudo_scores, radius)) channels.push_back(m + v);
    PureStrategy attack(std::move(channels));
    PureStrategy defense =
        perturbed_leader(cum_defend, r.scale, inst.defender_budget(), defender_rng, scores);

    const std::vector<double> attack_reward =
        singleton_attack_values(ext.instance, ext.weights, defense);
    const std::vector<double> defend_reward =
        singleton_defense_values(ext.instance, ext.weights, attack);
    for (int u = 0; u < m + n; ++u) cum_attack[u] += attack_reward[u];
    for (int u = 0; u < m; ++u) cum_defend[u] += defend_reward[u];
    trace.realized_total_payoff += payoff(ext.instance, ext.weights, defense, attack);
    trace.attacker_history.push_back(std::move(attack));
    trace.defender_history.push_back(std::move(defense));
  }
  trace.attacker_cumulative = std::move(cum_attack);
  trace.defender_cumulative = std::move(cum_defend);
  return trace;
}

}  // namespace misdef
