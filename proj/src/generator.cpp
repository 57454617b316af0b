#include "misdef/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "misdef/error.hpp"
#include "misdef/rng.hpp"

namespace misdef {

namespace {

void check_config(const GeneratorConfig& cfg) {
  if (cfg.channels < 1 || cfg.voters < 1) {
    throw Error(ErrorCode::config, "need at least one channel and one voter");
  }
  if (cfg.attacker_budget < 1 || cfg.attacker_budget > cfg.channels ||
      cfg.defender_budget < 1 || cfg.defender_budget > cfg.channels) {
    throw Error(ErrorCode::config, "budgets must lie in [1, channels]");
  }
  if (!cfg.disjoint) {
    if (cfg.degree_min < 1 || cfg.degree_min > cfg.degree_max ||
        cfg.degree_max > cfg.channels) {
      throw Error(ErrorCode::config, "need 1 <= degree_min <= degree_max <= channels");
    }
  }
  auto range_ok = [](double lo, double hi) {
    return std::isfinite(lo) && std::isfinite(hi) && 0.0 <= lo && lo <= hi && hi <= 1.0;
  };
  if (!range_ok(cfg.p_min, cfg.p_max) || !range_ok(cfg.q_min, cfg.q_max)) {
    throw Error(ErrorCode::config, "probability ranges must satisfy 0 <= min <= max <= 1");
  }
  if (!(cfg.theta_param >= 0.0 && cfg.theta_param <= 1.0)) {
    throw Error(ErrorCode::config, "preference parameter must lie in [0, 1]");
  }
  if (cfg.recipe == PreferenceRecipe::bernoulli_samples && cfg.sample_count < 1) {
    throw Error(ErrorCode::config, "sampled preferences need at least one sample");
  }
  if (cfg.recipe == PreferenceRecipe::adversarial_nominal &&
      (cfg.flip_radius < 0 || cfg.flip_radius > cfg.voters)) {
    throw Error(ErrorCode::config, "flip radius must lie in [0, voters]");
  }
}

}  // namespace

GeneratedInstance generate_instance(const GeneratorConfig& cfg) {
  check_config(cfg);
  Rng graph_rng(derive_seed(cfg.seed, "generator"));

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(cfg.voters) *
                (cfg.disjoint ? 1 : cfg.degree_max));
  std::vector<int> pool(cfg.channels);
  std::vector<int> chosen;
  for (int v = 0; v < cfg.voters; ++v) {
    chosen.clear();
    if (cfg.disjoint) {
      chosen.push_back(static_cast<int>(graph_rng.uniform_below(cfg.channels)));
    } else {
      const int span = cfg.degree_max - cfg.degree_min + 1;
      const int degree =
          cfg.degree_min + static_cast<int>(graph_rng.uniform_below(span));
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < degree; ++i) {
        const int j = i + static_cast<int>(graph_rng.uniform_below(cfg.channels - i));
        std::swap(pool[i], pool[j]);
        chosen.push_back(pool[i]);
      }
      std::sort(chosen.begin(), chosen.end());
    }
    for (int u : chosen) {
      const double p = graph_rng.uniform(cfg.p_min, cfg.p_max);
      const double q = graph_rng.uniform(cfg.q_min, cfg.q_max);
      edges.push_back({u, v, p, q});
    }
  }

  Rng pref_rng(derive_seed(cfg.seed, "preferences"));
  PreferenceModel prefs;
  switch (cfg.recipe) {
    case PreferenceRecipe::bernoulli_known: {
      KnownPreferences known;
      known.theta.resize(cfg.voters);
      for (int v = 0; v < cfg.voters; ++v) {
        known.theta[v] = pref_rng.bernoulli(cfg.theta_param) ? 1 : 0;
      }
      prefs = std::move(known);
      break;
    }
    case PreferenceRecipe::constant_marginals: {
      MarginalPreferences marg;
      marg.probs.assign(cfg.voters, cfg.theta_param);
      prefs = std::move(marg);
      break;
    }
    case PreferenceRecipe::bernoulli_samples: {
      SampledPreferences sampled;
      sampled.samples.assign(cfg.sample_count, std::vector<std::uint8_t>(cfg.voters, 0));
      for (int j = 0; j < cfg.sample_count; ++j) {
        for (int v = 0; v < cfg.voters; ++v) {
          sampled.samples[j][v] = pref_rng.bernoulli(cfg.theta_param) ? 1 : 0;
        }
      }
      prefs = std::move(sampled);
      break;
    }
    case PreferenceRecipe::adversarial_nominal: {
      AdversarialPreferences adv;
      adv.nominal.resize(cfg.voters);
      for (int v = 0; v < cfg.voters; ++v) {
        adv.nominal[v] = pref_rng.bernoulli(cfg.theta_param) ? 1 : 0;
      }
      adv.radius = cfg.flip_radius;
      prefs = std::move(adv);
      break;
    }
  }

  return {GameInstance(cfg.channels, cfg.voters, cfg.attacker_budget, cfg.defender_budget,
                       std::move(edges)),
          std::move(prefs)};
}

}  // namespace misdef
