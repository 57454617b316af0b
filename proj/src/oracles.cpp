#include "misdef/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "misdef/error.hpp"
#include "misdef/payoff.hpp"

namespace misdef {

namespace {

// Visits all size-k subsets of [0, universe) in lexicographic order.
template <class Fn>
void for_each_combination(int universe, int k, Fn&& fn) {
  if (k == 0) {
    std::vector<int> empty;
    fn(empty);
    return;
  }
  if (k > universe) return;
  std::vector<int> comb(k);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    fn(comb);
    int i = k - 1;
    while (i >= 0 && comb[i] == universe - k + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
}

void check_candidate_count(int universe, int k, const OracleLimits& limits) {
  const long long count = subset_count(universe, k);
  if (count > limits.max_candidates) {
    throw Error(ErrorCode::resource, "enumeration would visit " + std::to_string(count) +
                                         " candidates, above the configured limit of " +
                                         std::to_string(limits.max_candidates));
  }
}

// Scratch state for canonical candidate evaluation: per-voter running product
// plus the list of voters touched by the current candidate, reset after each.
struct TouchScratch {
  std::vector<double> prod;
  std::vector<std::uint8_t> mark;
  std::vector<int> touched;

  explicit TouchScratch(int voters) : prod(voters, 1.0), mark(voters, 0) {
    touched.reserve(voters);
  }
  void reset() {
    for (int v : touched) {
      prod[v] = 1.0;
      mark[v] = 0;
    }
    touched.clear();
  }
};

std::string format_set(const std::vector<int>& channels) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (i) out << ',';
    out << channels[i];
  }
  out << '}';
  return out.str();
}

BestResponse defender_minimize(const GameInstance& inst, std::span<const double> coefficients,
                               int budget, const OracleLimits& limits, int candidate_channels) {
  if (static_cast<int>(coefficients.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "coefficient vector size must equal the voter count");
  }
  const int universe =
      candidate_channels < 0 ? inst.num_channels() : candidate_channels;
  if (universe > inst.num_channels()) {
    throw Error(ErrorCode::invalid_argument, "candidate channel count exceeds the instance");
  }
  if (budget < 0) throw Error(ErrorCode::invalid_argument, "budget must be nonnegative");
  const int k = std::min(budget, universe);
  check_candidate_count(universe, k, limits);

  const double undefended = std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
  TouchScratch scratch(inst.num_voters());
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<int> best_set;
  for_each_combination(universe, k, [&](const std::vector<int>& comb) {
    for (int u : comb) {
      for (const auto& e : inst.channel_edges(u)) {
        if (!scratch.mark[e.other]) {
          scratch.mark[e.other] = 1;
          scratch.touched.push_back(e.other);
        }
        scratch.prod[e.other] *= 1.0 - e.q;
      }
    }
    double blocked = 0.0;
    for (int v : scratch.touched) blocked += coefficients[v] * (1.0 - scratch.prod[v]);
    scratch.reset();
    const double value = undefended - blocked;
    if (value < best_value) {
      best_value = value;
      best_set = comb;
    }
  });
  if (!std::isfinite(best_value)) best_value = undefended;  // k > universe guard; unreachable
  return {PureStrategy(std::move(best_set)), best_value};
}

}  // namespace

BestResponse exact_attacker_best_response(const GameInstance& inst,
                                          std::span<const double> weights,
                                          const MixedStrategy& defense, int budget,
                                          const OracleLimits& limits,
                                          std::optional<PartitionConstraint> partition) {
  if (static_cast<int>(weights.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
  }
  const int m = inst.num_channels();
  int universe = m;
  int real_budget = budget;
  int pseudo_budget = 0;
  if (partition) {
    if (partition->real_channels < 0 || partition->real_channels > m) {
      throw Error(ErrorCode::invalid_argument, "partition real-channel count out of range");
    }
    if (partition->real_budget != budget) {
      throw Error(ErrorCode::invalid_argument,
                  "partition real budget must match the attacker budget");
    }
    universe = partition->real_channels;
    pseudo_budget = std::max(0, partition->pseudo_budget);
  }
  if (real_budget < 0) throw Error(ErrorCode::invalid_argument, "budget must be nonnegative");
  const int k = std::min(real_budget, universe);
  check_candidate_count(universe, k, limits);

  std::vector<double> c = defense_factor(inst, defense);
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];

  const int pseudo_count = m - universe;
  const int take = std::min(pseudo_budget, pseudo_count);
  TouchScratch scratch(inst.num_voters());
  std::vector<double> pseudo_gain(static_cast<std::size_t>(std::max(0, pseudo_count)));
  std::vector<double> gain_sorted(pseudo_gain.size());

  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<int> best_set;
  for_each_combination(universe, k, [&](const std::vector<int>& comb) {
    for (int u : comb) {
      for (const auto& e : inst.channel_edges(u)) {
        if (!scratch.mark[e.other]) {
          scratch.mark[e.other] = 1;
          scratch.touched.push_back(e.other);
        }
        scratch.prod[e.other] *= 1.0 - e.p;
      }
    }
    double value = 0.0;
    for (int v : scratch.touched) value += c[v] * (1.0 - scratch.prod[v]);
    if (take > 0) {
      // Pseudo channels target pairwise-disjoint voters, so their joint
      // contribution is the sum of single-channel gains given the real block.
      for (int j = 0; j < pseudo_count; ++j) {
        double g = 0.0;
        for (const auto& e : inst.channel_edges(universe + j)) {
          g += c[e.other] * scratch.prod[e.other] * e.p;
        }
        pseudo_gain[j] = g;
      }
      gain_sorted = pseudo_gain;
      std::nth_element(gain_sorted.begin(), gain_sorted.begin() + (take - 1), gain_sorted.end(),
                       std::greater<double>());
      for (int j = 0; j < take; ++j) value += gain_sorted[j];
    }
    scratch.reset();
    if (value > best_value) {
      best_value = value;
      best_set = comb;
    }
  });
  if (!std::isfinite(best_value)) {
    best_value = 0.0;
    best_set.clear();
  }

  if (take > 0) {
    // Rebuild the deterministic pseudo completion for the winning real block.
    for (int u : best_set) {
      for (const auto& e : inst.channel_edges(u)) {
        if (!scratch.mark[e.other]) {
          scratch.mark[e.other] = 1;
          scratch.touched.push_back(e.other);
        }
        scratch.prod[e.other] *= 1.0 - e.p;
      }
    }
    std::vector<int> order(static_cast<std::size_t>(pseudo_count));
    std::iota(order.begin(), order.end(), 0);
    for (int j = 0; j < pseudo_count; ++j) {
      double g = 0.0;
      for (const auto& e : inst.channel_edges(universe + j)) {
        g += c[e.other] * scratch.prod[e.other] * e.p;
      }
      pseudo_gain[j] = g;
    }
    scratch.reset();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (pseudo_gain[a] != pseudo_gain[b]) return pseudo_gain[a] > pseudo_gain[b];
      return a < b;
    });
    for (int j = 0; j < take; ++j) best_set.push_back(universe + order[j]);
  }
  return {PureStrategy(std::move(best_set)), best_value};
}

BestResponse exact_defender_best_response(const GameInstance& inst,
                                          std::span<const double> weights,
                                          const MixedStrategy& attack, int budget,
                                          const OracleLimits& limits, int candidate_channels) {
  if (static_cast<int>(weights.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
  }
  std::vector<double> c = attack_success(inst, attack);
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];
  return defender_minimize(inst, c, budget, limits, candidate_channels);
}

BestResponse exact_defender_best_response(const GameInstance& inst,
                                          std::span<const double> weights,
                                          const MarginalMixture& attack, int budget,
                                          const OracleLimits& limits, int candidate_channels) {
  if (static_cast<int>(weights.size()) != inst.num_voters()) {
    throw Error(ErrorCode::invalid_argument, "weight vector size must equal the voter count");
  }
  std::vector<double> c = attack_success(inst, attack);
  for (int v = 0; v < inst.num_voters(); ++v) c[v] *= weights[v];
  return defender_minimize(inst, c, budget, limits, candidate_channels);
}

BestResponse exact_defender_best_response(const GameInstance& inst,
                                          std::span<const double> coefficients, int budget,
                                          const OracleLimits& limits, int candidate_channels) {
  return defender_minimize(inst, coefficients, budget, limits, candidate_channels);
}

namespace {

GapCertificate make_certificate(double upper, double lower) {
  GapCertificate cert;
  cert.upper = upper;
  cert.lower = lower;
  if (lower > 0.0) {
    cert.gap = (upper - lower) / lower;
    cert.gap_defined = true;
  } else {
    cert.gap = std::numeric_limits<double>::quiet_NaN();
    cert.gap_defined = false;
  }
  return cert;
}

}  // namespace

GapCertificate optimality_gap(const GameInstance& inst, std::span<const double> weights,
                              const MixedStrategy& defense, const MixedStrategy& attack,
                              int attacker_budget, int defender_budget,
                              const OracleLimits& limits,
                              std::optional<PartitionConstraint> partition,
                              int candidate_channels) {
  const double upper =
      exact_attacker_best_response(inst, weights, defense, attacker_budget, limits, partition)
          .value;
  const double lower =
      exact_defender_best_response(inst, weights, attack, defender_budget, limits,
                                   candidate_channels)
          .value;
  return make_certificate(upper, lower);
}

GapCertificate optimality_gap(const GameInstance& inst, std::span<const double> weights,
                              const MixedStrategy& defense, const MarginalMixture& attack,
                              int attacker_budget, int defender_budget,
                              const OracleLimits& limits,
                              std::optional<PartitionConstraint> partition,
                              int candidate_channels) {
  const double upper =
      exact_attacker_best_response(inst, weights, defense, attacker_budget, limits, partition)
          .value;
  const double lower =
      exact_defender_best_response(inst, weights, attack, defender_budget, limits,
                                   candidate_channels)
          .value;
  return make_certificate(upper, lower);
}

namespace {

struct GapEval {
  double upper = 0.0;
  double lower = 0.0;
  double gap() const { return upper - lower; }
};

GapEval exact_matrix_gap(const std::vector<std::vector<double>>& payoff,
                         std::span<const double> rows, std::span<const double> cols) {
  const std::size_t r = payoff.size();
  const std::size_t c = payoff[0].size();
  GapEval e;
  e.upper = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c; ++j) {
    double col_value = 0.0;
    for (std::size_t i = 0; i < r; ++i) col_value += rows[i] * payoff[i][j];
    e.upper = std::max(e.upper, col_value);
  }
  e.lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r; ++i) {
    double row_value = 0.0;
    for (std::size_t j = 0; j < c; ++j) row_value += payoff[i][j] * cols[j];
    e.lower = std::min(e.lower, row_value);
  }
  return e;
}

// Solves A z = b by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a,
                                                std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    }
    if (std::fabs(a[pivot][col]) < 1e-12) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      if (factor == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> z(n);
  for (std::size_t row = n; row-- > 0;) {
    double acc = b[row];
    for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * z[k];
    z[row] = acc / a[row][row];
  }
  return z;
}

struct PolishCandidate {
  std::vector<double> rows;
  std::vector<double> cols;
  bool valid = false;
};

// Guesses the equilibrium support from the current mixtures and solves the
// square support-equalization system exactly. The caller certifies the result
// on the full matrix before accepting it.
PolishCandidate attempt_polish(const std::vector<std::vector<double>>& payoff,
                               std::span<const double> rows, std::span<const double> cols,
                               int support) {
  const int r = static_cast<int>(payoff.size());
  const int c = static_cast<int>(payoff[0].size());
  PolishCandidate out;
  if (support > std::min(r, c)) return out;
  std::vector<int> row_order(r), col_order(c);
  std::iota(row_order.begin(), row_order.end(), 0);
  std::iota(col_order.begin(), col_order.end(), 0);
  std::sort(row_order.begin(), row_order.end(), [&](int a, int b) {
    if (rows[a] != rows[b]) return rows[a] > rows[b];
    return a < b;
  });
  std::sort(col_order.begin(), col_order.end(), [&](int a, int b) {
    if (cols[a] != cols[b]) return cols[a] > cols[b];
    return a < b;
  });

  const int s = support;
  // Row mixture p and value v with p^T M e_j = v on every support column.
  std::vector<std::vector<double>> a(s + 1, std::vector<double>(s + 1, 0.0));
  std::vector<double> b(s + 1, 0.0);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) a[j][i] = payoff[row_order[i]][col_order[j]];
    a[j][s] = -1.0;
  }
  for (int i = 0; i < s; ++i) a[s][i] = 1.0;
  b[s] = 1.0;
  auto p = solve_linear(a, b);
  if (!p) return out;

  // Column mixture q and value v' with e_i^T M q = v' on every support row.
  for (auto& row : a) std::fill(row.begin(), row.end(), 0.0);
  std::fill(b.begin(), b.end(), 0.0);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) a[i][j] = payoff[row_order[i]][col_order[j]];
    a[i][s] = -1.0;
  }
  for (int j = 0; j < s; ++j) a[s][j] = 1.0;
  b[s] = 1.0;
  auto q = solve_linear(a, b);
  if (!q) return out;

  for (int i = 0; i < s; ++i) {
    if ((*p)[i] < -1e-9 || (*q)[i] < -1e-9) return out;
  }
  out.rows.assign(r, 0.0);
  out.cols.assign(c, 0.0);
  double sum_p = 0.0, sum_q = 0.0;
  for (int i = 0; i < s; ++i) {
    const double pi = std::max(0.0, (*p)[i]);
    const double qi = std::max(0.0, (*q)[i]);
    out.rows[row_order[i]] = pi;
    out.cols[col_order[i]] = qi;
    sum_p += pi;
    sum_q += qi;
  }
  if (sum_p <= 0.0 || sum_q <= 0.0) return out;
  for (double& x : out.rows) x /= sum_p;
  for (double& x : out.cols) x /= sum_q;
  out.valid = true;
  return out;
}

}  // namespace

ZeroSumSolution solve_zero_sum(const std::vector<std::vector<double>>& payoff, double tolerance,
                               long max_iterations) {
  if (payoff.empty() || payoff[0].empty()) {
    throw Error(ErrorCode::invalid_argument, "payoff matrix must be nonempty");
  }
  const std::size_t r = payoff.size();
  const std::size_t c = payoff[0].size();
  double scale = 0.0;
  for (const auto& row : payoff) {
    if (row.size() != c) {
      throw Error(ErrorCode::invalid_argument, "payoff matrix must be rectangular");
    }
    for (double x : row) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::invalid_argument, "payoff matrix entries must be finite");
      }
      scale = std::max(scale, std::fabs(x));
    }
  }

  ZeroSumSolution best;
  best.row_mixture.assign(r, 1.0 / static_cast<double>(r));
  best.col_mixture.assign(c, 1.0 / static_cast<double>(c));
  {
    const GapEval e = exact_matrix_gap(payoff, best.row_mixture, best.col_mixture);
    best.duality_gap = e.gap();
    best.value = 0.5 * (e.upper + e.lower);
  }
  if (scale == 0.0) {
    best.converged = true;
    best.duality_gap = 0.0;
    best.value = 0.0;
    return best;
  }

  auto consider = [&](std::span<const double> rows, std::span<const double> cols) {
    const GapEval e = exact_matrix_gap(payoff, rows, cols);
    if (e.gap() < best.duality_gap) {
      best.duality_gap = e.gap();
      best.value = 0.5 * (e.upper + e.lower);
      best.row_mixture.assign(rows.begin(), rows.end());
      best.col_mixture.assign(cols.begin(), cols.end());
    }
  };
  auto polish = [&]() {
    const int max_support = std::min({static_cast<int>(r), static_cast<int>(c), 24});
    for (int s = 1; s <= max_support; ++s) {
      const PolishCandidate cand = attempt_polish(payoff, best.row_mixture, best.col_mixture, s);
      if (cand.valid) consider(cand.rows, cand.cols);
      if (best.duality_gap <= tolerance) break;
    }
  };

  // Optimistic hedge self-play on the scaled matrix, in log space.
  const double eta = 0.125 / scale;
  std::vector<double> log_rows(r, 0.0), log_cols(c, 0.0);
  std::vector<double> rows(r, 1.0 / static_cast<double>(r));
  std::vector<double> cols(c, 1.0 / static_cast<double>(c));
  std::vector<double> row_loss(r, 0.0), col_gain(c, 0.0);
  std::vector<double> prev_row_loss(r, 0.0), prev_col_gain(c, 0.0);
  std::vector<double> sum_rows(r, 0.0), sum_cols(c, 0.0);
  std::vector<double> avg(std::max(r, c));

  auto renormalize = [](std::vector<double>& logits, std::vector<double>& probs) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
      logits[i] -= peak;
      probs[i] = std::exp(logits[i]);
      total += probs[i];
    }
    for (double& p : probs) p /= total;
  };

  long t = 0;
  while (t < max_iterations && best.duality_gap > tolerance) {
    ++t;
    for (std::size_t i = 0; i < r; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < c; ++j) acc += payoff[i][j] * cols[j];
      row_loss[i] = acc;
    }
    for (std::size_t j = 0; j < c; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < r; ++i) acc += payoff[i][j] * rows[i];
      col_gain[j] = acc;
    }
    for (std::size_t i = 0; i < r; ++i) sum_rows[i] += rows[i];
    for (std::size_t j = 0; j < c; ++j) sum_cols[j] += cols[j];
    for (std::size_t i = 0; i < r; ++i) {
      log_rows[i] -= eta * (2.0 * row_loss[i] - prev_row_loss[i]);
    }
    for (std::size_t j = 0; j < c; ++j) {
      log_cols[j] += eta * (2.0 * col_gain[j] - prev_col_gain[j]);
    }
    renormalize(log_rows, rows);
    renormalize(log_cols, cols);
    prev_row_loss = row_loss;
    prev_col_gain = col_gain;

    if (t % 64 == 0 || t == max_iterations) {
      consider(rows, cols);
      double total = std::accumulate(sum_rows.begin(), sum_rows.end(), 0.0);
      avg.resize(r);
      for (std::size_t i = 0; i < r; ++i) avg[i] = sum_rows[i] / total;
      std::vector<double> avg_rows(avg.begin(), avg.begin() + static_cast<long>(r));
      total = std::accumulate(sum_cols.begin(), sum_cols.end(), 0.0);
      avg.resize(c);
      for (std::size_t j = 0; j < c; ++j) avg[j] = sum_cols[j] / total;
      std::vector<double> avg_cols(avg.begin(), avg.begin() + static_cast<long>(c));
      consider(avg_rows, avg_cols);
      if (t % 1024 == 0 && best.duality_gap > tolerance) polish();
    }
  }
  if (best.duality_gap > tolerance) polish();
  best.iterations = t;
  best.converged = best.duality_gap <= tolerance;
  return best;
}

MatrixGameResult matrix_game_value(const GameInstance& inst, std::span<const double> weights,
                                   const OracleLimits& limits, double tolerance,
                                   std::optional<PartitionConstraint> partition,
                                   int candidate_channels) {
  const int m = inst.num_channels();
  const int def_universe = candidate_channels < 0 ? m : candidate_channels;
  std::vector<PureStrategy> defenses =
      enumerate_subsets(def_universe, std::min(inst.defender_budget(), def_universe),
                        limits.max_candidates);

  std::vector<PureStrategy> attacks;
  if (partition) {
    const int real = partition->real_channels;
    const int k_real = std::min(partition->real_budget, real);
    const int k_pseudo = std::min(partition->pseudo_budget, m - real);
    const long long count = subset_count(real, k_real) * subset_count(m - real, k_pseudo);
    if (count > limits.max_candidates || count < 0) {
      throw Error(ErrorCode::resource, "partitioned attack enumeration exceeds the limit");
    }
    std::vector<PureStrategy> reals = enumerate_subsets(real, k_real, limits.max_candidates);
    std::vector<PureStrategy> pseudos =
        enumerate_subsets(m - real, k_pseudo, limits.max_candidates);
    attacks.reserve(static_cast<std::size_t>(count));
    for (const auto& sr : reals) {
      for (const auto& sp : pseudos) {
        std::vector<int> channels(sr.begin(), sr.end());
        for (int j : sp) channels.push_back(real + j);
        attacks.emplace_back(std::move(channels));
      }
    }
  } else {
    attacks = enumerate_subsets(m, std::min(inst.attacker_budget(), m), limits.max_candidates);
  }
  if (defenses.empty() || attacks.empty()) {
    throw Error(ErrorCode::invalid_argument, "strategy spaces must be nonempty");
  }

  std::vector<std::vector<double>> matrix(defenses.size(),
                                          std::vector<double>(attacks.size(), 0.0));
  for (std::size_t i = 0; i < defenses.size(); ++i) {
    for (std::size_t j = 0; j < attacks.size(); ++j) {
      matrix[i][j] = payoff(inst, weights, defenses[i], attacks[j]);
    }
  }
  ZeroSumSolution sol = solve_zero_sum(matrix, tolerance);

  auto build_mixture = [](const std::vector<PureStrategy>& space,
                          const std::vector<double>& probs) {
    std::vector<PureStrategy> support;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (probs[i] > 1e-12) {
        support.push_back(space[i]);
        w.push_back(probs[i]);
        total += probs[i];
      }
    }
    if (support.empty()) {
      support.push_back(space[0]);
      w.push_back(1.0);
      total = 1.0;
    }
    for (double& x : w) x /= total;
    return MixedStrategy(std::move(support), std::move(w));
  };

  MatrixGameResult result{sol.value, build_mixture(defenses, sol.row_mixture),
                          build_mixture(attacks, sol.col_mixture), sol.duality_gap,
                          sol.converged};
  return result;
}

std::vector<std::string> check_submodular_monotone(
    const std::function<double(const PureStrategy&)>& set_function, int ground_size, double tol) {
  if (ground_size < 0) throw Error(ErrorCode::invalid_argument, "ground size must be nonnegative");
  if (ground_size > 12) {
    throw Error(ErrorCode::resource, "exhaustive submodularity check limited to 12 elements");
  }
  const unsigned n_masks = 1u << ground_size;
  std::vector<double> value(n_masks);
  std::vector<int> channels;
  for (unsigned mask = 0; mask < n_masks; ++mask) {
    channels.clear();
    for (int u = 0; u < ground_size; ++u) {
      if (mask & (1u << u)) channels.push_back(u);
    }
    value[mask] = set_function(PureStrategy(channels));
  }

  constexpr std::size_t kMaxWitnesses = 200;
  std::vector<std::string> violations;
  std::size_t suppressed = 0;
  auto mask_set = [&](unsigned mask) {
    std::vector<int> s;
    for (int u = 0; u < ground_size; ++u) {
      if (mask & (1u << u)) s.push_back(u);
    }
    return format_set(s);
  };
  auto report = [&](std::string text) {
    if (violations.size() < kMaxWitnesses) {
      violations.push_back(std::move(text));
    } else {
      ++suppressed;
    }
  };

  for (unsigned mask = 0; mask < n_masks; ++mask) {
    for (int u = 0; u < ground_size; ++u) {
      const unsigned bit = 1u << u;
      if (mask & bit) continue;
      if (value[mask | bit] < value[mask] - tol) {
        std::ostringstream out;
        out << "monotonicity: F(" << mask_set(mask | bit) << ") < F(" << mask_set(mask)
            << ") by " << value[mask] - value[mask | bit];
        report(out.str());
      }
    }
  }
  for (unsigned b = 0; b < n_masks; ++b) {
    for (unsigned a = b;; a = (a - 1) & b) {
      for (int u = 0; u < ground_size; ++u) {
        const unsigned bit = 1u << u;
        if (b & bit) continue;
        const double small_gain = value[a | bit] - value[a];
        const double large_gain = value[b | bit] - value[b];
        if (small_gain < large_gain - tol) {
          std::ostringstream out;
          out << "submodularity: marginal of " << u << " at " << mask_set(a)
              << " is " << small_gain << " < " << large_gain << " at " << mask_set(b);
          report(out.str());
        }
      }
      if (a == 0) break;
    }
  }
  if (suppressed > 0) {
    violations.push_back("... and " + std::to_string(suppressed) + " further violations");
  }
  return violations;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "step size must be positive");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = point[i];
    point[i] = original + h;
    const double up = f(point);
    point[i] = original - h;
    const double down = f(point);
    point[i] = original;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::vector<PureStrategy> enumerate_subsets(int universe, int k, long long max_count) {
  if (universe < 0 || k < 0) {
    throw Error(ErrorCode::invalid_argument, "universe and subset size must be nonnegative");
  }
  const long long count = subset_count(universe, k);
  if (count > max_count) {
    throw Error(ErrorCode::resource, "subset enumeration would produce " + std::to_string(count) +
                                         " sets, above the limit of " + std::to_string(max_count));
  }
  std::vector<PureStrategy> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_combination(universe, k,
                       [&](const std::vector<int>& comb) { out.emplace_back(comb); });
  return out;
}

long long subset_count(int universe, int k) {
  if (k < 0 || k > universe) return 0;
  k = std::min(k, universe - k);
  unsigned __int128 acc = 1;
  constexpr unsigned __int128 kCap = static_cast<unsigned __int128>(4'000'000'000'000'000'000LL);
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(universe - k + i) / static_cast<unsigned>(i);
    if (acc > kCap) return 4'000'000'000'000'000'000LL;
  }
  return static_cast<long long>(acc);
}

}  // namespace misdef
