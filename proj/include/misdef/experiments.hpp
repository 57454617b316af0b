#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "misdef/generator.hpp"
#include "misdef/mirror_ascent.hpp"
#include "misdef/oracles.hpp"

namespace misdef {

/// Shared experiment driver configuration. Every replication derives its seed
/// from master_seed via derive_seed(master_seed, "replication", index), and
/// instances, solver runs and evaluations inside a replication derive further
/// role-tagged streams, so whole experiments replay byte-identically.
struct ExperimentConfig {
  GeneratorConfig generator;         // seed field ignored; derived per replication
  MirrorConfig solver;
  int replications = 10;
  std::uint64_t master_seed = 0;
  OracleLimits limits;
  std::vector<int> attacker_budgets = {3, 5};
  std::vector<int> defender_budgets = {3, 5};
  std::vector<int> flip_radii = {0, 2, 4, 8};  // uncertainty suite
  int sample_count = 10;                       // asymmetric setting
  std::string output_path;                     // CSV destination ("" = don't write)
};

struct GapTableCell {
  int defender_budget = 0;
  int attacker_budget = 0;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  double mean_upper = 0.0;
  double mean_lower = 0.0;
  int undefined_gaps = 0;  // replications with a zero lower bound
};
struct GapTableResult {
  std::vector<GapTableCell> cells;
  std::string csv;
};

/// Certified-optimality-gap table: per (k_d, k_a) cell, R fresh instances are
/// solved with the gradient solver and certified with both exact best
/// responses; reports mean/stddev of the relative gap.
GapTableResult run_gap_table(const ExperimentConfig& cfg);

struct SweepRow {
  int attacker_budget = 0;
  int defender_budget = 0;
  int replication = 0;
  double upper = 0.0;  // certified attacker value against the solved defense
};
struct BudgetSweepResult {
  std::vector<SweepRow> rows;
  bool nonincreasing_in_defender_budget = true;
  bool nondecreasing_in_attacker_budget = true;
  std::string csv;
};

/// Attacker value across budget grids on per-replication fixed instances
/// (budgets vary, the graph does not), with monotone-trend flags computed on
/// per-replication values. defender_budgets may include 0 (no defense).
BudgetSweepResult run_budget_sweep(const ExperimentConfig& cfg);

struct UncertaintyRow {
  std::string setting;  // "known", "stochastic", "asymmetric", "adversarial(l)"
  int flip_radius = 0;
  double value = 0.0;   // robust attacker value for the setting
};
struct UncertaintyResult {
  std::vector<UncertaintyRow> rows;       // averaged over replications
  bool adversarial_nondecreasing = true;  // in the flip radius, per replication
  bool zero_radius_matches_known = true;  // adversarial(0) == known, exactly
  double stochastic_vs_known = 0.0;       // relative difference of means
  std::string csv;
};

/// Matched-seed comparison of the four preference settings: known leanings,
/// independent marginals, sampled posteriors (averaged per-sample attack
/// values), and the adversarial extension across flip_radii.
UncertaintyResult run_uncertainty_suite(const ExperimentConfig& cfg);

}  // namespace misdef
