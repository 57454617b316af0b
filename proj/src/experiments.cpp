#include "misdef/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "misdef/error.hpp"
#include "misdef/io.hpp"
#include "misdef/payoff.hpp"
#include "misdef/rng.hpp"

namespace misdef {

namespace {

void check_common(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) {
    throw Error(ErrorCode::config, "at least one replication is required");
  }
}

void check_ascending(const std::vector<int>& values, const char* what) {
  if (values.empty()) {
    throw Error(ErrorCode::config, std::string(what) + " list must be nonempty");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw Error(ErrorCode::config, std::string(what) + " list must be strictly ascending");
    }
  }
}

GeneratedInstance replication_instance(const ExperimentConfig& cfg, int replication) {
  GeneratorConfig gen = cfg.generator;
  const std::uint64_t rep_seed = derive_seed(cfg.master_seed, "replication", replication);
  gen.seed = derive_seed(rep_seed, "instance");
  return generate_instance(gen);
}

std::vector<double> point_weights(const PreferenceModel& prefs) {
  if (const auto* known = std::get_if<KnownPreferences>(&prefs)) {
    return preference_weights(*known);
  }
  if (const auto* marg = std::get_if<MarginalPreferences>(&prefs)) {
    return substitute_marginals(*marg);
  }
  throw Error(ErrorCode::config,
              "this experiment needs known or marginal preferences from the generator");
}

std::string seed_text(std::uint64_t seed) { return std::to_string(seed); }

std::string generator_metadata(const ExperimentConfig& cfg) {
  const GeneratorConfig& g = cfg.generator;
  std::string meta = "channels=" + std::to_string(g.channels) +
                     " voters=" + std::to_string(g.voters) +
                     " iterations=" + std::to_string(cfg.solver.iterations) +
                     " step_size=" + format_double(cfg.solver.step_size) +
                     " budget_expansion=" + format_double(cfg.solver.budget_expansion) +
                     " replications=" + std::to_string(cfg.replications) +
                     " master_seed=" + seed_text(cfg.master_seed);
  return meta;
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  if (values.size() > 1) {
    double acc = 0.0;
    for (double v : values) acc += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace

GapTableResult run_gap_table(const ExperimentConfig& cfg) {
  check_common(cfg);
  check_ascending(cfg.attacker_budgets, "attacker budget");
  check_ascending(cfg.defender_budgets, "defender budget");

  struct CellAccum {
    std::vector<double> gaps;
    std::vector<double> uppers;
    std::vector<double> lowers;
    int undefined = 0;
  };
  std::vector<CellAccum> accum(cfg.defender_budgets.size() * cfg.attacker_budgets.size());

  for (int rep = 0; rep < cfg.replications; ++rep) {
    const GeneratedInstance gen = replication_instance(cfg, rep);
    const std::vector<double> weights = point_weights(gen.preferences);
    std::size_t cell = 0;
    for (int k_d : cfg.defender_budgets) {
      for (int k_a : cfg.attacker_budgets) {
        const GameInstance inst = gen.instance.with_budgets(k_a, k_d);
        const MirrorTrace trace = online_gradient_solve(inst, weights, cfg.solver);
        const GapCertificate cert =
            optimality_gap(inst, weights, trace.defender_mixture(), trace.final_mixture(),
                           k_a, k_d, cfg.limits);
        CellAccum& a = accum[cell++];
        a.uppers.push_back(cert.upper);
        a.lowers.push_back(cert.lower);
        if (cert.gap_defined) {
          a.gaps.push_back(cert.gap);
        } else {
          ++a.undefined;
        }
      }
    }
  }

  GapTableResult result;
  CsvWriter csv("gap-table " + generator_metadata(cfg),
                {"defender_budget", "attacker_budget", "mean_gap", "std_gap", "mean_upper",
                 "mean_lower", "undefined_gaps"});
  std::size_t cell = 0;
  for (int k_d : cfg.defender_budgets) {
    for (int k_a : cfg.attacker_budgets) {
      const CellAccum& a = accum[cell++];
      const MeanStd gap = mean_std(a.gaps);
      GapTableCell out;
      out.defender_budget = k_d;
      out.attacker_budget = k_a;
      out.mean_gap = gap.mean;
      out.std_gap = gap.stddev;
      out.mean_upper = mean_std(a.uppers).mean;
      out.mean_lower = mean_std(a.lowers).mean;
      out.undefined_gaps = a.undefined;
      result.cells.push_back(out);
      csv.add_row({std::to_string(k_d), std::to_string(k_a), format_double(out.mean_gap),
                   format_double(out.std_gap), format_double(out.mean_upper),
                   format_double(out.mean_lower), std::to_string(out.undefined_gaps)});
    }
  }
  result.csv = csv.text();
  if (!cfg.output_path.empty()) write_file(cfg.output_path, result.csv);
  return result;
}

BudgetSweepResult run_budget_sweep(const ExperimentConfig& cfg) {
  check_common(cfg);
  check_ascending(cfg.attacker_budgets, "attacker budget");
  check_ascending(cfg.defender_budgets, "defender budget");
  for (int k_d : cfg.defender_budgets) {
    if (k_d < 0) throw Error(ErrorCode::config, "defender budgets must be nonnegative");
  }

  BudgetSweepResult result;
  CsvWriter csv("budget-sweep " + generator_metadata(cfg),
                {"replication", "attacker_budget", "defender_budget", "upper"});
  const std::size_t n_a = cfg.attacker_budgets.size();
  const std::size_t n_d = cfg.defender_budgets.size();
  std::vector<double> table(n_a * n_d, 0.0);
  constexpr double kTrendSlack = 1e-9;

  for (int rep = 0; rep < cfg.replications; ++rep) {
    const GeneratedInstance gen = replication_instance(cfg, rep);
    const std::vector<double> weights = point_weights(gen.preferences);
    for (std::size_t ia = 0; ia < n_a; ++ia) {
      for (std::size_t id = 0; id < n_d; ++id) {
        const int k_a = cfg.attacker_budgets[ia];
        const int k_d = cfg.defender_budgets[id];
        const GameInstance inst = gen.instance.with_budgets(k_a, k_d);
        const MirrorTrace trace = online_gradient_solve(inst, weights, cfg.solver);
        const double upper =
            exact_attacker_best_response(inst, weights, trace.defender_mixture(), k_a,
                                         cfg.limits)
                .value;
        table[ia * n_d + id] = upper;
        result.rows.push_back({k_a, k_d, rep, upper});
        csv.add_row({std::to_string(rep), std::to_string(k_a), std::to_string(k_d),
                     format_double(upper)});
      }
    }
    for (std::size_t ia = 0; ia < n_a; ++ia) {
      for (std::size_t id = 1; id < n_d; ++id) {
        if (table[ia * n_d + id] > table[ia * n_d + id - 1] + kTrendSlack) {
          result.nonincreasing_in_defender_budget = false;
        }
      }
    }
    for (std::size_t id = 0; id < n_d; ++id) {
      for (std::size_t ia = 1; ia < n_a; ++ia) {
        if (table[ia * n_d + id] < table[(ia - 1) * n_d + id] - kTrendSlack) {
          result.nondecreasing_in_attacker_budget = false;
        }
      }
    }
  }
  result.csv = csv.text();
  if (!cfg.output_path.empty()) write_file(cfg.output_path, result.csv);
  return result;
}

UncertaintyResult run_uncertainty_suite(const ExperimentConfig& cfg) {
  check_common(cfg);
  if (cfg.sample_count < 1) {
    throw Error(ErrorCode::config, "the asymmetric setting needs at least one sample");
  }
  if (cfg.flip_radii.empty()) {
    throw Error(ErrorCode::config, "flip radius list must be nonempty");
  }
  for (std::size_t i = 0; i < cfg.flip_radii.size(); ++i) {
    if (cfg.flip_radii[i] < 0 || cfg.flip_radii[i] > cfg.generator.voters) {
      throw Error(ErrorCode::config, "flip radii must lie in [0, voters]");
    }
    if (i > 0 && cfg.flip_radii[i] <= cfg.flip_radii[i - 1]) {
      throw Error(ErrorCode::config, "flip radius list must be strictly ascending");
    }
  }

  UncertaintyResult result;
  double known_sum = 0.0;
  double stochastic_sum = 0.0;
  double asymmetric_sum = 0.0;
  std::vector<double> adversarial_sums(cfg.flip_radii.size(), 0.0);

  for (int rep = 0; rep < cfg.replications; ++rep) {
    GeneratorConfig gen_cfg = cfg.generator;
    gen_cfg.recipe = PreferenceRecipe::bernoulli_known;  // the suite derives all settings
    const std::uint64_t rep_seed = derive_seed(cfg.master_seed, "replication", rep);
    gen_cfg.seed = derive_seed(rep_seed, "instance");
    const GeneratedInstance gen = generate_instance(gen_cfg);
    const GameInstance& inst = gen.instance;
    const int k_a = inst.attacker_budget();
    const int k_d = inst.defender_budget();
    const auto& known = std::get<KnownPreferences>(gen.preferences);
    const std::vector<double> w_known = preference_weights(known);

    // Known leanings.
    {
      const MirrorTrace trace = online_gradient_solve(inst, w_known, cfg.solver);
      const double upper =
          exact_attacker_best_response(inst, w_known, trace.defender_mixture(), k_a,
                                       cfg.limits)
              .value;
      known_sum += upper;

      // Adversarial extension per flip radius; radius 0 must agree exactly.
      std::vector<double> robust_values(cfg.flip_radii.size(), 0.0);
      for (std::size_t i = 0; i < cfg.flip_radii.size(); ++i) {
        const int radius = cfg.flip_radii[i];
        const AdversarialMirrorTrace adv =
            og_adversarial(inst, known.theta, radius, cfg.solver);
        const AdversarialExtension ext = adversarial_extend(inst, known.theta, radius);
        const PartitionConstraint partition{adv.real_channels, k_a, radius};
        robust_values[i] =
            exact_attacker_best_response(ext.instance, ext.weights, adv.trace.defender_mixture(),
                                         k_a, cfg.limits, partition)
                .value;
        adversarial_sums[i] += robust_values[i];
        if (radius == 0 && robust_values[i] != upper) {
          result.zero_radius_matches_known = false;
        }
        if (i > 0 && robust_values[i] + 1e-9 < robust_values[i - 1]) {
          result.adversarial_nondecreasing = false;
        }
      }
    }

    // Independent marginals via certainty equivalence.
    {
      const std::vector<double> w_marg(inst.num_voters(), gen_cfg.theta_param);
      const MirrorTrace trace = online_gradient_solve(inst, w_marg, cfg.solver);
      stochastic_sum += exact_attacker_best_response(inst, w_marg, trace.defender_mixture(),
                                                     k_a, cfg.limits)
                            .value;
    }

    // Sampled posteriors: per-sample attackers, averaged certified value.
    {
      Rng sample_rng(derive_seed(rep_seed, "posterior-samples"));
      std::vector<std::vector<double>> sample_weights(
          cfg.sample_count, std::vector<double>(inst.num_voters(), 0.0));
      for (int j = 0; j < cfg.sample_count; ++j) {
        for (int v = 0; v < inst.num_voters(); ++v) {
          sample_weights[j][v] = sample_rng.bernoulli(gen_cfg.theta_param) ? 1.0 : 0.0;
        }
      }
      const AsymmetricMirrorTrace trace = og_asymmetric(inst, sample_weights, cfg.solver);
      const MixedStrategy defense = trace.defender_mixture();
      double value = 0.0;
      for (int j = 0; j < cfg.sample_count; ++j) {
        value += exact_attacker_best_response(inst, sample_weights[j], defense, k_a, cfg.limits)
                     .value;
      }
      asymmetric_sum += value / static_cast<double>(cfg.sample_count);
    }
    (void)k_d;
  }

  const double reps = static_cast<double>(cfg.replications);
  result.rows.push_back({"known", 0, known_sum / reps});
  result.rows.push_back({"stochastic", 0, stochastic_sum / reps});
  result.rows.push_back({"asymmetric", 0, asymmetric_sum / reps});
  for (std::size_t i = 0; i < cfg.flip_radii.size(); ++i) {
    result.rows.push_back({"adversarial", cfg.flip_radii[i], adversarial_sums[i] / reps});
  }

  const double known_mean = known_sum / reps;
  const double stochastic_mean = stochastic_sum / reps;
  if (known_mean != 0.0) {
    result.stochastic_vs_known = std::fabs(stochastic_mean - known_mean) / std::fabs(known_mean);
  } else {
    result.stochastic_vs_known =
        stochastic_mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }

  CsvWriter csv("uncertainty " + generator_metadata(cfg) +
                    " samples=" + std::to_string(cfg.sample_count),
                {"setting", "flip_radius", "value"});
  for (const UncertaintyRow& row : result.rows) {
    csv.add_row({row.setting, std::to_string(row.flip_radius), format_double(row.value)});
  }
  result.csv = csv.text();
  if (!cfg.output_path.empty()) write_file(cfg.output_path, result.csv);
  return result;
}

}  // namespace misdef
