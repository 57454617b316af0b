#pragma once

#include <cstdint>

#include "misdef/model.hpp"

namespace misdef {

enum class PreferenceRecipe {
  bernoulli_known,     // theta_v ~ Bernoulli(theta_param), observed
  constant_marginals,  // Pr[theta_v = 1] = theta_param for every voter
  bernoulli_samples,   // sample_count posterior draws, each Bernoulli(theta_param)
  adversarial_nominal, // nominal ~ Bernoulli(theta_param), radius = flip_radius
};

struct GeneratorConfig {
  int channels = 30;
  int voters = 150;
  int degree_min = 1;      // channels per voter, uniform in [degree_min, degree_max]
  int degree_max = 5;
  bool disjoint = false;   // exactly one uniformly chosen channel per voter
  double p_min = 0.0;
  double p_max = 0.2;
  double q_min = 0.0;
  double q_max = 0.2;
  int attacker_budget = 3;
  int defender_budget = 3;
  PreferenceRecipe recipe = PreferenceRecipe::bernoulli_known;
  double theta_param = 0.5;
  int sample_count = 10;   // bernoulli_samples only
  int flip_radius = 0;     // adversarial_nominal only
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  GameInstance instance;
  PreferenceModel preferences;
};

/// Synthetic instance: per voter, a uniform degree and a uniform
/// without-replacement channel subset; p, q uniform in their ranges; the
/// preference block per recipe. Byte-identical output for equal configs.
/// Throws ErrorCode::config on impossible recipes (degree_max > channels,
/// inverted ranges, budgets out of [1, channels]).
GeneratedInstance generate_instance(const GeneratorConfig& cfg);

}  // namespace misdef
