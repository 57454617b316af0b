// Shared fixtures and independent numerical oracles for the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "misdef/error.hpp"
#include "misdef/generator.hpp"
#include "misdef/model.hpp"
#include "misdef/rng.hpp"

namespace testutil {

// Runs fn and reports which library error it raised, if any.
template <class Fn>
inline std::optional<misdef::ErrorCode> error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const misdef::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Two symmetric channels, one voter each, p = q = 1, budgets 1/1. The value of
// this game is 0.5: each player hides from / hunts the other like matching
// pennies.
inline misdef::GameInstance pennies_instance() {
  return misdef::GameInstance(2, 2, 1, 1,
                              {{0, 0, 1.0, 1.0}, {1, 1, 1.0, 1.0}});
}

inline std::vector<double> ones(int n) { return std::vector<double>(n, 1.0); }

inline std::vector<double> weights_of(const std::vector<std::uint8_t>& theta) {
  std::vector<double> w(theta.size());
  for (std::size_t v = 0; v < theta.size(); ++v) w[v] = theta[v] ? 1.0 : 0.0;
  return w;
}

// Random nondisjoint instance with known 0/1 leanings; probabilities span the
// full [0, 1] ranges unless narrowed by the caller.
inline misdef::GeneratedInstance random_instance(std::uint64_t seed, int channels, int voters,
                                                 int attacker_budget, int defender_budget,
                                                 double p_max = 1.0, double q_max = 1.0) {
  misdef::GeneratorConfig cfg;
  cfg.channels = channels;
  cfg.voters = voters;
  cfg.degree_min = 1;
  cfg.degree_max = std::min(channels, 4);
  cfg.p_max = p_max;
  cfg.q_max = q_max;
  cfg.attacker_budget = attacker_budget;
  cfg.defender_budget = defender_budget;
  cfg.theta_param = 0.5;
  cfg.seed = seed;
  return misdef::generate_instance(cfg);
}

// Random budget-size channel subset.
inline misdef::PureStrategy random_set(misdef::Rng& rng, int channels, int size) {
  std::vector<int> pool(channels);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < size && i < channels; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(channels - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(std::min(size, channels));
  return misdef::PureStrategy(std::move(pool));
}

// Random finite-support mixture of budget-size sets.
inline misdef::MixedStrategy random_mixture(misdef::Rng& rng, int channels, int size,
                                            int support) {
  std::vector<misdef::PureStrategy> sets;
  std::vector<double> weights;
  double total = 0.0;
  for (int i = 0; i < support; ++i) {
    sets.push_back(random_set(rng, channels, size));
    weights.push_back(0.05 + rng.uniform01());
    total += weights.back();
  }
  for (double& w : weights) w /= total;
  // Nudge the last weight so the sum is exactly 1 after rounding.
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  weights.back() += 1.0 - sum;
  return misdef::MixedStrategy(std::move(sets), std::move(weights));
}

// Independent reference for the Euclidean projection onto
// { 0 <= x <= 1, sum x <= budget }: Dykstra's alternating projections between
// the box and the halfspace, which converges to the exact projection onto the
// intersection of convex sets.
inline std::vector<double> dykstra_projection(const std::vector<double>& y, double budget,
                                              int sweeps = 20000) {
  const std::size_t d = y.size();
  std::vector<double> x = y, p(d, 0.0), q(d, 0.0);
  for (int it = 0; it < sweeps; ++it) {
    std::vector<double> box(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double z = x[i] + p[i];
      box[i] = std::clamp(z, 0.0, 1.0);
      p[i] = z - box[i];
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) sum += box[i] + q[i];
    const double excess = std::max(0.0, (sum - budget) / static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
      const double z = box[i] + q[i];
      x[i] = z - excess;
      q[i] = z - x[i];
    }
  }
  return x;
}

// Generalized KL divergence sum_i (x_i log(x_i / y_i) - x_i + y_i) with the
// usual 0 log 0 = 0 convention.
inline double generalized_kl(const std::vector<double>& x, const std::vector<double>& y) {
  double div = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) div += x[i] * std::log(x[i] / y[i]) - x[i] + y[i];
    else div += y[i];
  }
  return div;
}

// Uniform draw from the box, rescaled into the budget when necessary, so the
// samples cover the whole feasible set.
inline std::vector<double> random_feasible_point(misdef::Rng& rng, int dim, double budget) {
  std::vector<double> x(dim);
  double sum = 0.0;
  for (double& xi : x) {
    xi = rng.uniform01();
    sum += xi;
  }
  if (sum > budget) {
    const double scale = budget / sum * rng.uniform01();
    for (double& xi : x) xi *= scale;
  }
  return x;
}

inline double box_budget_violation(const std::vector<double>& x, double budget) {
  double worst = 0.0;
  double sum = 0.0;
  for (double xi : x) {
    worst = std::max({worst, -xi, xi - 1.0});
    sum += xi;
  }
  return std::max(worst, sum - budget);
}

}  // namespace testutil
