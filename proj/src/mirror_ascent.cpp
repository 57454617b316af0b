#include "misdef/mirror_ascent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "misdef/error.hpp"
#include "misdef/payoff.hpp"

namespace misdef {

namespace {

void check_weights(const GameInstance& inst, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
  }
}

void check_config(const MirrorConfig& cfg, const GameInstance& inst) {
  if (cfg.iterations < 1) throw Error(ErrorCode::config, "iteration count must be positive");
  if (cfg.step_size < 0.0 || !std::isfinite(cfg.step_size)) {
    throw Error(ErrorCode::config, "step size must be finite and nonnegative");
  }
  if (!(cfg.budget_expansion >= 1.0)) {
    throw Error(ErrorCode::config, "budget expansion factor must be at least 1");
  }
  if (inst.attacker_budget() < 1) {
    throw Error(ErrorCode::config, "the gradient solver needs a positive attacker budget");
  }
  if (inst.defender_budget() < 0) {
    throw Error(ErrorCode::config, "defender budget must be nonnegative");
  }
}

int expanded_budget(const MirrorConfig& cfg, int defender_budget) {
  // ceil(alpha * k_d), robust to representation noise just above an integer.
  const double raw = cfg.budget_expansion * static_cast<double>(defender_budget);
  return static_cast<int>(std::ceil(raw - 1e-9));
}

Geometry geometry_of(const MirrorConfig& cfg) {
  if (cfg.update_rule == UpdateRule::euclidean) return Geometry::euclidean;
  return cfg.entropic_mode == EntropicMode::closed_form ? Geometry::entropic_closed_form
                                                        : Geometry::entropic_exact;
}

std::vector<double> initial_point(const MirrorConfig& cfg, int dimension, int real_channels,
                                  int attacker_budget, int pseudo_count, int flip_budget) {
  std::vector<double> x(dimension);
  if (cfg.init == MarginalInit::spread) {
    const double value =
        1.0 / (static_cast<double>(real_channels) * static_cast<double>(attacker_budget));
    std::fill(x.begin(), x.end(), value);
  } else {
    const double real_mass =
        std::min(1.0, static_cast<double>(attacker_budget) / real_channels);
    std::fill(x.begin(), x.begin() + real_channels, real_mass);
    if (pseudo_count > 0) {
      const double pseudo_mass = std::min(1.0, static_cast<double>(flip_budget) / pseudo_count);
      std::fill(x.begin() + real_channels, x.end(), pseudo_mass);
    }
  }
  return x;
}

std::vector<double> project_point(std::span<const double> y, const CappedSimplex& set,
                                  const MirrorConfig& cfg) {
  if (cfg.update_rule == UpdateRule::euclidean) return project_euclidean(y, set);
  return project_entropic(y, set, cfg.entropic_mode);
}

}  // namespace

RegretConstants regret_constants(const GameInstance& inst, std::span<const double> weights,
                                 UpdateRule rule, int attacker_budget) {
  check_weights(inst, weights);
  if (attacker_budget < 1) {
    throw Error(ErrorCode::invalid_argument, "attacker budget must be positive");
  }
  double b = 0.0;
  for (int u = 0; u < inst.num_channels(); ++u) {
    double value = 0.0;
    for (const auto& e : inst.channel_edges(u)) value += weights[e.other] * e.p;
    b = std::max(b, value);
  }
  RegretConstants c;
  c.max_single_channel = b;
  const double m = static_cast<double>(inst.num_channels());
  if (rule == UpdateRule::exponentiated) {
    c.gradient_bound = b;
    c.diameter = attacker_budget * std::log(m);
  } else {
    c.gradient_bound = b * std::sqrt(m);
    c.diameter = std::sqrt(static_cast<double>(attacker_budget));
  }
  return c;
}

double derived_step_size(const RegretConstants& constants, long iterations) {
  if (iterations < 1) throw Error(ErrorCode::invalid_argument, "iteration count must be positive");
  if (!(constants.gradient_bound > 0.0)) return 1.0;
  return 1.0 / (constants.gradient_bound * std::sqrt(2.0 * static_cast<double>(iterations)));
}

long mirror_iterations_for_epsilon(const RegretConstants& constants, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  // (4 * sqrt(2) * L * D / eps)^2 == 32 * (L * D / eps)^2; squaring the
  // exact constant avoids sqrt round-off pushing integer cases over the
  // next ceiling.
  const double ratio = constants.gradient_bound * constants.diameter / epsilon;
  const double t = std::ceil(32.0 * ratio * ratio);
  if (!(t >= 1.0)) return 1;
  if (t > 1e18) throw Error(ErrorCode::resource, "derived iteration count exceeds 1e18");
  return static_cast<long>(t);
}

PureStrategy greedy_best_response(const GameInstance& inst,
                                  std::span<const double> coefficients, int budget, bool lazy,
                                  int candidate_channels) {
  if (static_cast<int>(coefficients.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "coefficient vector size must equal the voter count");
  }
  if (budget < 0) throw Error(ErrorCode::invalid_argument, "budget must be nonnegative");
  const int universe = candidate_channels < 0 ? inst.num_channels() : candidate_channels;
  if (universe > inst.num_channels() || universe < 0) {
    throw Error(ErrorCode::invalid_argument, "candidate channel count exceeds the instance");
  }
  const int k = std::min(budget, universe);
  std::vector<double> remaining(inst.num_voters(), 1.0);  // prod (1 - q) over chosen channels
  std::vector<int> chosen;
  chosen.reserve(k);

  auto gain_of = [&](int u) {
    double g = 0.0;
    for (const auto& e : inst.channel_edges(u)) {
      g += coefficients[e.other] * remaining[e.other] * e.q;
    }
    return g;
  };
  auto apply = [&](int u) {
    for (const auto& e : inst.channel_edges(u)) remaining[e.other] *= 1.0 - e.q;
    chosen.push_back(u);
  };

  if (!lazy) {
    std::vector<std::uint8_t> taken(universe, 0);
    for (int step = 0; step < k; ++step) {
      double best_gain = 0.0;
      int best_u = -1;
      for (int u = 0; u < universe; ++u) {
        if (taken[u]) continue;
        const double g = gain_of(u);
        if (g > best_gain) {
          best_gain = g;
          best_u = u;
        }
      }
      if (best_u < 0) break;
      taken[best_u] = 1;
      apply(best_u);
    }
    return PureStrategy(std::move(chosen));
  }

  // Lazy variant: stale upper bounds in a max-heap; gains only shrink as the
  // set grows, so a bound computed at the current step is exact and a stale
  // top that stays on top after refresh is the true argmax. Tie order (lower
  // index first) matches the scan above.
  struct Entry {
    double gain;
    int channel;
    int stamp;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.channel > b.channel;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (int u = 0; u < universe; ++u) heap.push({gain_of(u), u, 0});
  int step = 0;
  while (step < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (!(top.gain > 0.0)) break;
    if (top.stamp == step) {
      apply(top.channel);
      ++step;
    } else {
      heap.push({gain_of(top.channel), top.channel, step});
    }
  }
  return PureStrategy(std::move(chosen));
}

PureStrategy greedy_best_response(const GameInstance& inst, std::span<const double> weights,
                                  const MixedStrategy& attack, int budget, bool lazy,
                                  int candidate_channels) {
  check_weights(inst, weights);
  std::vector<double> c = attack_success(inst, attack);
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];
  return greedy_best_response(inst, std::span<const double>(c), budget, lazy, candidate_channels);
}

PureStrategy greedy_best_response(const GameInstance& inst, std::span<const double> weights,
                                  const MarginalVector& attack, int budget, bool lazy,
                                  int candidate_channels) {
  check_weights(inst, weights);
  std::vector<double> c = attack_success(inst, std::span<const double>(attack.x));
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];
  return greedy_best_response(inst, std::span<const double>(c), budget, lazy, candidate_channels);
}

MixedStrategy MirrorTrace::defender_mixture() const {
  return MixedStrategy::uniform(defender_history);
}
MarginalMixture MirrorTrace::final_mixture() const {
  return MarginalMixture{{final_marginal}, {1.0}, attacker_iterates.budget};
}
MixedStrategy AsymmetricMirrorTrace::defender_mixture() const {
  return MixedStrategy::uniform(defender_history);
}

namespace {

double resolve_step(const MirrorConfig& cfg, const RegretConstants& constants) {
  if (cfg.step_size > 0.0) return cfg.step_size;
  if (cfg.iterations == 50) return 0.05;
  return derived_step_size(constants, cfg.iterations);
}

}  // namespace

MirrorTrace online_gradient_solve(const GameInstance& inst, std::span<const double> weights,
                                  const MirrorConfig& cfg) {
  check_weights(inst, weights);
  check_config(cfg, inst);
  const int m = inst.num_channels();
  const int k_a = inst.attacker_budget();
  const CappedSimplex feasible{m, static_cast<double>(k_a)};

  MirrorTrace trace;
  trace.constants = regret_constants(inst, weights, cfg.update_rule, k_a);
  trace.step_size = resolve_step(cfg, trace.constants);
  trace.iterations = cfg.iterations;
  const double eta = trace.step_size;
  const int greedy_budget = expanded_budget(cfg, inst.defender_budget());

  std::vector<double> x = initial_point(cfg, m, m, k_a, 0, 0);
  x = project_point(x, feasible, cfg);

  trace.defender_history.reserve(cfg.iterations);
  trace.iteration_values.reserve(cfg.iterations);
  trace.greedy_values.reserve(cfg.iterations);
  trace.attacker_iterates.vectors.reserve(cfg.iterations);
  trace.attacker_iterates.budget = static_cast<double>(k_a);

  std::vector<double> c(inst.num_voters());
  std::vector<double> y(m);
  for (long t = 0; t < cfg.iterations; ++t) {
    const std::vector<double> success = attack_success(inst, std::span<const double>(x));
    for (int v = 0; v < inst.num_voters(); ++v) c[v] = weights[v] * success[v];
    PureStrategy defense = greedy_best_response(inst, std::span<const double>(c), greedy_budget,
                                                cfg.lazy_greedy);

    const MarginalVector iterate{x, static_cast<double>(k_a)};
    trace.iteration_values.push_back(multilinear_extension(inst, weights, iterate, defense));
    trace.greedy_values.push_back(blocked_influence(inst, std::span<const double>(c), defense));
    const std::vector<double> grad = multilinear_gradient(inst, weights, iterate, defense);

    trace.attacker_iterates.vectors.push_back(x);
    trace.defender_history.push_back(std::move(defense));

    if (cfg.update_rule == UpdateRule::euclidean) {
      for (int u = 0; u < m; ++u) y[u] = x[u] + eta * grad[u];
    } else {
      for (int u = 0; u < m; ++u) y[u] = x[u] * std::exp(eta * grad[u]);
    }
    x = project_point(y, feasible, cfg);
  }
  trace.final_marginal = std::move(x);
  trace.attacker_iterates.weights.assign(
      trace.attacker_iterates.vectors.size(),
      1.0 / static_cast<double>(trace.attacker_iterates.vectors.size()));
  return trace;
}

AsymmetricMirrorTrace og_asymmetric(const GameInstance& inst,
                                    const std::vector<std::vector<double>>& sample_weights,
                                    const MirrorConfig& cfg) {
  if (sample_weights.empty()) {
    throw Error(ErrorCode::invalid_argument, "at least one preference sample is required");
  }
  for (const auto& w : sample_weights) check_weights(inst, w);
  check_config(cfg, inst);
  const int m = inst.num_channels();
  const int k_a = inst.attacker_budget();
  const std::size_t samples = sample_weights.size();
  const double inv_samples = 1.0 / static_cast<double>(samples);
  const CappedSimplex feasible{m, static_cast<double>(k_a)};

  AsymmetricMirrorTrace trace;
  // Conservative shared step: the largest gradient bound over the samples.
  trace.constants = regret_constants(inst, sample_weights[0], cfg.update_rule, k_a);
  for (std::size_t j = 1; j < samples; ++j) {
    const RegretConstants cj = regret_constants(inst, sample_weights[j], cfg.update_rule, k_a);
    if (cj.gradient_bound > trace.constants.gradient_bound) trace.constants = cj;
  }
  trace.step_size = resolve_step(cfg, trace.constants);
  trace.iterations = cfg.iterations;
  const double eta = trace.step_size;
  const int greedy_budget = expanded_budget(cfg, inst.defender_budget());

  std::vector<std::vector<double>> x(samples, [&] {
    std::vector<double> x0 = initial_point(cfg, m, m, k_a, 0, 0);
    return project_point(x0, feasible, cfg);
  }());

  trace.per_sample_iterates.assign(samples, MarginalMixture{});
  for (auto& mix : trace.per_sample_iterates) {
    mix.budget = static_cast<double>(k_a);
    mix.vectors.reserve(cfg.iterations);
  }
  trace.defender_history.reserve(cfg.iterations);
  trace.iteration_values.reserve(cfg.iterations);

  std::vector<double> c(inst.num_voters());
  std::vector<double> y(m);
  for (long t = 0; t < cfg.iterations; ++t) {
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t j = 0; j < samples; ++j) {
      const std::vector<double> success = attack_success(inst, std::span<const double>(x[j]));
      for (int v = 0; v < inst.num_voters(); ++v) c[v] += sample_weights[j][v] * success[v];
    }
    for (double& cv : c) cv *= inv_samples;
    PureStrategy defense = greedy_best_response(inst, std::span<const double>(c), greedy_budget,
                                                cfg.lazy_greedy);

    double value = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
      const MarginalVector iterate{x[j], static_cast<double>(k_a)};
      value += multilinear_extension(inst, sample_weights[j], iterate, defense);
      const std::vector<double> grad =
          multilinear_gradient(inst, sample_weights[j], iterate, defense);
      trace.per_sample_iterates[j].vectors.push_back(x[j]);
      if (cfg.update_rule == UpdateRule::euclidean) {
        for (int u = 0; u < m; ++u) y[u] = x[j][u] + eta * grad[u];
      } else {
        for (int u = 0; u < m; ++u) y[u] = x[j][u] * std::exp(eta * grad[u]);
      }
      x[j] = project_point(y, feasible, cfg);
    }
    trace.iteration_values.push_back(value * inv_samples);
    trace.defender_history.push_back(std::move(defense));
  }
  for (auto& mix : trace.per_sample_iterates) {
    mix.weights.assign(mix.vectors.size(), 1.0 / static_cast<double>(mix.vectors.size()));
  }
  trace.final_marginals = std::move(x);
  return trace;
}

AdversarialMirrorTrace og_adversarial(const GameInstance& inst,
                                      std::span<const std::uint8_t> nominal, int radius,
                                      const MirrorConfig& cfg) {
  check_config(cfg, inst);
  const AdversarialExtension ext = adversarial_extend(inst, nominal, radius);
  const int m = inst.num_channels();
  const int n = inst.num_voters();
  const int k_a = inst.attacker_budget();

  AdversarialMirrorTrace out;
  out.real_channels = m;
  out.flip_budget = radius;
  MirrorTrace& trace = out.trace;

  // Step size from the original instance under the nominal weights, so a zero
  // flip budget reproduces online_gradient_solve exactly.
  std::vector<double> nominal_weights(nominal.begin(), nominal.end());
  trace.constants = regret_constants(inst, nominal_weights, cfg.update_rule, k_a);
  trace.step_size = resolve_step(cfg, trace.constants);
  trace.iterations = cfg.iterations;
  const double eta = trace.step_size;
  const int greedy_budget = expanded_budget(cfg, inst.defender_budget());

  std::vector<int> real_block(m), pseudo_block(n);
  std::iota(real_block.begin(), real_block.end(), 0);
  std::iota(pseudo_block.begin(), pseudo_block.end(), m);
  const Geometry geometry = geometry_of(cfg);
  auto project_blocks = [&](std::span<const double> y) {
    return project_partition(y, real_block, static_cast<double>(k_a), pseudo_block,
                             static_cast<double>(radius), geometry);
  };

  std::vector<double> x = initial_point(cfg, m + n, m, k_a, n, radius);
  x = project_blocks(x);

  trace.defender_history.reserve(cfg.iterations);
  trace.iteration_values.reserve(cfg.iterations);
  trace.greedy_values.reserve(cfg.iterations);
  trace.attacker_iterates.vectors.reserve(cfg.iterations);
  trace.attacker_iterates.budget = static_cast<double>(k_a + radius);

  std::vector<double> c(n);
  std::vector<double> y(m + n);
  for (long t = 0; t < cfg.iterations; ++t) {
    const std::vector<double> success =
        attack_success(ext.instance, std::span<const double>(x));
    for (int v = 0; v < n; ++v) c[v] = ext.weights[v] * success[v];
    PureStrategy defense = greedy_best_response(ext.instance, std::span<const double>(c),
                                                greedy_budget, cfg.lazy_greedy, m);

    const MarginalVector iterate{x, static_cast<double>(k_a + radius)};
    trace.iteration_values.push_back(
        multilinear_extension(ext.instance, ext.weights, iterate, defense));
    trace.greedy_values.push_back(
        blocked_influence(ext.instance, std::span<const double>(c), defense));
    const std::vector<double> grad =
        multilinear_gradient(ext.instance, ext.weights, iterate, defense);

    trace.attacker_iterates.vectors.push_back(x);
    trace.defender_history.push_back(std::move(defense));

    if (cfg.update_rule == UpdateRule::euclidean) {
      for (int u = 0; u < m + n; ++u) y[u] = x[u] + eta * grad[u];
    } else {
      for (int u = 0; u < m + n; ++u) y[u] = x[u] * std::exp(eta * grad[u]);
    }
    x = project_blocks(y);
  }
  trace.final_marginal = std::move(x);
  trace.attacker_iterates.weights.assign(
      trace.attacker_iterates.vectors.size(),
      1.0 / static_cast<double>(trace.attacker_iterates.vectors.size()));
  return out;
}

double sample_count_asymmetric(int num_voters, int num_channels, long iterations,
                               double epsilon, double delta) {
  if (num_voters < 1 || num_channels < 1 || iterations < 1) {
    throw Error(ErrorCode::invalid_argument, "dimensions and iterations must be positive");
  }
  if (!(epsilon > 0.0) || !(delta > 0.0) || !(delta < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "need epsilon > 0 and delta in (0, 1)");
  }
  const double n = static_cast<double>(num_voters);
  const double m = static_cast<double>(num_channels);
  const double t = static_cast<double>(iterations);
  const double count =
      std::ceil(n * n * m * t / (epsilon * epsilon) * std::log(1.0 / delta) * std::log(m));
  return std::max(count, 1.0);
}

}  // namespace misdef
