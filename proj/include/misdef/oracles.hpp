#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "misdef/model.hpp"

namespace misdef {

struct OracleLimits {
  long long max_candidates = 2'000'000;  // enumeration cap; exceeding -> ErrorCode::resource
};

struct BestResponse {
  PureStrategy strategy;
  double value = 0.0;
};

/// Two-block attacker feasible set used on adversarially extended instances:
/// real_budget channels from [0, real_channels) plus pseudo_budget channels
/// from [real_channels, num_channels).
struct PartitionConstraint {
  int real_channels = 0;
  int real_budget = 0;
  int pseudo_budget = 0;
};

/// Exact attacker best response to a mixed defense by exhaustive enumeration
/// of budget-size channel sets (monotonicity makes full-budget sets optimal).
/// Each candidate is evaluated canonically (channels in ascending order), so
/// the argmax - ties resolved toward the lexicographically smallest set - does
/// not depend on enumeration order. Under a partition constraint the pseudo
/// block is modular given the real block, so only the real block is
/// enumerated and the pseudo block is the exact top-pseudo_budget completion.
BestResponse exact_attacker_best_response(const GameInstance& inst,
                                          std::span<const double> weights,
                                          const MixedStrategy& defense, int budget,
                                          const OracleLimits& limits = {},
                                          std::optional<PartitionConstraint> partition = {});

/// Exact defender best response (minimization) to a mixed attacker, either a
/// set mixture or a mixture of marginal vectors. candidate_channels restricts
/// the defender universe (real channels on extended instances); -1 = all.
BestResponse exact_defender_best_response(const GameInstance& inst,
                                          std::span<const double> weights,
                                          const MixedStrategy& attack, int budget,
                                          const OracleLimits& limits = {},
                                          int candidate_channels = -1);
BestResponse exact_defender_best_response(const GameInstance& inst,
                                          std::span<const double> weights,
                                          const MarginalMixture& attack, int budget,
                                          const OracleLimits& limits = {},
                                          int candidate_channels = -1);
/// Same minimization against a fixed per-voter reach profile,
/// coefficients[v] = w_v * P(attack reaches v). Lets callers average the
/// profile over preference samples before certifying.
BestResponse exact_defender_best_response(const GameInstance& inst,
                                          std::span<const double> coefficients, int budget,
                                          const OracleLimits& limits = {},
                                          int candidate_channels = -1);

struct GapCertificate {
  double upper = 0.0;  // best attacker response to the defender mixture
  double lower = 0.0;  // best defender response to the attacker mixture
  double gap = 0.0;    // (upper - lower) / lower
  bool gap_defined = true;  // false when lower == 0 (gap meaningless)
};

/// Certified optimality gap of a strategy pair via the two exact best
/// responses. upper >= lower always holds up to roundoff when both mixtures
/// come from the same run.
GapCertificate optimality_gap(const GameInstance& inst, std::span<const double> weights,
                              const MixedStrategy& defense, const MixedStrategy& attack,
                              int attacker_budget, int defender_budget,
                              const OracleLimits& limits = {},
                              std::optional<PartitionConstraint> partition = {},
                              int candidate_channels = -1);
GapCertificate optimality_gap(const GameInstance& inst, std::span<const double> weights,
                              const MixedStrategy& defense, const MarginalMixture& attack,
                              int attacker_budget, int defender_budget,
                              const OracleLimits& limits = {},
                              std::optional<PartitionConstraint> partition = {},
                              int candidate_channels = -1);

struct ZeroSumSolution {
  double value = 0.0;
  std::vector<double> row_mixture;  // minimizer
  std::vector<double> col_mixture;  // maximizer
  double duality_gap = 0.0;
  bool converged = false;
  long iterations = 0;
};

/// Solves min_rows max_cols of a payoff matrix by optimistic
/// multiplicative-weights self-play. Progress is certified by the exact
/// duality gap (best pure responses to the candidate mixtures); a
/// support-equalization polish accelerates the endgame and its output is
/// accepted only when the certificate passes. converged=false (with the best
/// gap found) when the tolerance is not reached within max_iterations.
ZeroSumSolution solve_zero_sum(const std::vector<std::vector<double>>& payoff,
                               double tolerance = 1e-6, long max_iterations = 400'000);

struct MatrixGameResult {
  double value = 0.0;
  MixedStrategy defense;
  MixedStrategy attack;
  double duality_gap = 0.0;
  bool converged = false;
};

/// Game value over exhaustively enumerated budget-size strategy spaces.
MatrixGameResult matrix_game_value(const GameInstance& inst, std::span<const double> weights,
                                   const OracleLimits& limits = {}, double tolerance = 1e-6,
                                   std::optional<PartitionConstraint> partition = {},
                                   int candidate_channels = -1);

/// Exhaustive monotonicity + diminishing-returns check over a ground set
/// (all pairs A subset of B, u outside B). Returns human-readable violation
/// witnesses; empty = both properties hold within tol. Ground sets above 12
/// elements are rejected (ErrorCode::resource).
std::vector<std::string> check_submodular_monotone(
    const std::function<double(const PureStrategy&)>& set_function, int ground_size,
    double tol = 1e-9);

/// Central finite differences, one coordinate at a time.
std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    double h = 1e-6);

/// Lexicographic enumeration of all size-k subsets of [0, universe).
std::vector<PureStrategy> enumerate_subsets(int universe, int k,
                                            long long max_count = 2'000'000);

/// Binomial coefficient, saturating at max to avoid overflow.
long long subset_count(int universe, int k);

}  // namespace misdef
