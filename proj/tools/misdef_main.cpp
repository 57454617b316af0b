// Command-line front end. Talks to the solver library exclusively through the
// C interface in misdef.h, so it doubles as a smoke test of that surface.

#include <cinttypes>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "misdef.h"

namespace {

int fail(misdef_status status) {
  std::fprintf(stderr, "error (%s): %s\n", misdef_status_name(status), misdef_last_error());
  return static_cast<int>(status);
}

const std::map<std::string, int> kRecipes{
    {"known", 0}, {"marginals", 1}, {"samples", 2}, {"adversarial", 3}};
const std::map<std::string, int> kSolvers{{"ftpl", 0}, {"og", 1}};
const std::map<std::string, int> kSettings{
    {"known", 0}, {"stochastic", 1}, {"asymmetric", 2}, {"adversarial", 3}};
const std::map<std::string, int> kRules{{"euclidean", 0}, {"exponentiated", 1}};

void add_generator_options(CLI::App* app, misdef_gen_options* g) {
  app->add_option("--channels,-m", g->channels, "Number of advertising channels");
  app->add_option("--voters,-n", g->voters, "Number of voters");
  app->add_option("--degree-min", g->degree_min, "Minimum channels per voter");
  app->add_option("--degree-max", g->degree_max, "Maximum channels per voter");
  app->add_flag("--disjoint", g->disjoint, "Exactly one channel per voter");
  app->add_option("--p-min", g->p_min, "Lower bound of switch probabilities");
  app->add_option("--p-max", g->p_max, "Upper bound of switch probabilities");
  app->add_option("--q-min", g->q_min, "Lower bound of immunization probabilities");
  app->add_option("--q-max", g->q_max, "Upper bound of immunization probabilities");
  app->add_option("--attacker-budget,-a", g->attacker_budget, "Attacker channel budget");
  app->add_option("--defender-budget,-d", g->defender_budget, "Defender channel budget");
  app->add_option("--recipe", g->recipe, "Preference recipe")
      ->transform(CLI::CheckedTransformer(kRecipes, CLI::ignore_case));
  app->add_option("--theta", g->theta_param, "Preference parameter");
  app->add_option("--gen-samples", g->sample_count, "Posterior sample count (samples recipe)");
  app->add_option("--gen-flip-radius", g->flip_radius,
                  "Flip radius stored with an adversarial preference block");
  app->add_option("--gen-seed", g->seed, "Generator seed");
}

void add_solver_options(CLI::App* app, misdef_solve_options* s) {
  app->add_option("--solver", s->solver, "Solver family")
      ->transform(CLI::CheckedTransformer(kSolvers, CLI::ignore_case));
  app->add_option("--setting", s->setting, "Preference setting")
      ->transform(CLI::CheckedTransformer(kSettings, CLI::ignore_case));
  app->add_option("--iterations,-T", s->iterations, "Iteration count (0 = derive)");
  app->add_option("--epsilon", s->epsilon, "Additive accuracy target");
  app->add_option("--perturbation-scale", s->perturbation_scale,
                  "Perturbation magnitude (0 = 1/epsilon)");
  app->add_option("--step-size", s->step_size, "Gradient step size (0 = derived)");
  app->add_option("--update-rule", s->update_rule, "Mirror map")
      ->transform(CLI::CheckedTransformer(kRules, CLI::ignore_case));
  app->add_flag("--entropic-exact", s->entropic_exact,
                "Exact KL projection instead of the closed form");
  app->add_option("--budget-expansion", s->budget_expansion,
                  "Defender greedy budget multiplier (>= 1)");
  app->add_flag("--lazy-greedy", s->lazy_greedy, "Lazy-evaluation greedy defender");
  app->add_option("--samples", s->sample_count,
                  "Samples to draw when the instance carries marginals");
  app->add_option("--flip-radius", s->flip_radius,
                  "Adversarial flip radius (-1 = use the instance block)");
  app->add_option("--max-candidates", s->max_candidates, "Oracle enumeration cap");
  app->add_option("--seed", s->seed, "Solver seed");
}

void add_experiment_options(CLI::App* app, misdef_experiment_options* e,
                            std::vector<int>* ka, std::vector<int>* kd,
                            std::vector<int>* radii) {
  add_generator_options(app, &e->generator);
  app->add_option("--iterations,-T", e->solver.iterations, "Solver iterations per run");
  app->add_option("--step-size", e->solver.step_size, "Gradient step size (0 = derived)");
  app->add_option("--update-rule", e->solver.update_rule, "Mirror map")
      ->transform(CLI::CheckedTransformer(kRules, CLI::ignore_case));
  app->add_flag("--entropic-exact", e->solver.entropic_exact, "Exact KL projection");
  app->add_option("--budget-expansion", e->solver.budget_expansion,
                  "Defender greedy budget multiplier");
  app->add_flag("--lazy-greedy", e->solver.lazy_greedy, "Lazy-evaluation greedy defender");
  app->add_option("--epsilon", e->solver.epsilon, "Accuracy target for derived parameters");
  app->add_option("--max-candidates", e->solver.max_candidates, "Oracle enumeration cap");
  app->add_option("--replications,-R", e->replications, "Independent replications");
  app->add_option("--master-seed", e->master_seed, "Master seed for all replications");
  app->add_option("--attacker-budgets", *ka, "Attacker budget grid")->delimiter(',');
  app->add_option("--defender-budgets", *kd, "Defender budget grid")->delimiter(',');
  app->add_option("--flip-radii", *radii, "Flip radii (uncertainty suite)")->delimiter(',');
  app->add_option("--samples", e->sample_count, "Posterior samples (asymmetric setting)");
}

void bind_arrays(misdef_experiment_options* e, const std::vector<int>& ka,
                 const std::vector<int>& kd, const std::vector<int>& radii) {
  if (!ka.empty()) {
    e->attacker_budgets = ka.data();
    e->num_attacker_budgets = static_cast<int>(ka.size());
  }
  if (!kd.empty()) {
    e->defender_budgets = kd.data();
    e->num_defender_budgets = static_cast<int>(kd.size());
  }
  if (!radii.empty()) {
    e->flip_radii = radii.data();
    e->num_flip_radii = static_cast<int>(radii.size());
  }
}

int print_certificate(double upper, double lower, double gap, int gap_defined) {
  std::printf("upper %.17g\n", upper);
  std::printf("lower %.17g\n", lower);
  if (gap_defined) {
    std::printf("gap %.17g\n", gap);
  } else {
    std::printf("gap undefined\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attacker/defender games over misinformation channels"};
  app.set_version_flag("--version", std::string(misdef_version()));
  app.require_subcommand(1);

  // gen
  misdef_gen_options gen_opts;
  misdef_gen_options_init(&gen_opts);
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  add_generator_options(gen, &gen_opts);
  gen->add_option("--output,-o", gen_out, "Instance file to write")->required();

  // solve
  misdef_solve_options solve_opts;
  misdef_solve_options_init(&solve_opts);
  std::string solve_instance, report_out, defense_out, attack_out;
  bool no_certify = false;
  CLI::App* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("--instance,-i", solve_instance, "Instance file")->required();
  add_solver_options(solve, &solve_opts);
  solve->add_flag("--no-certify", no_certify, "Skip the exact best-response certificate");
  solve->add_option("--output,-o", report_out, "Report file to write");
  solve->add_option("--defense-out", defense_out, "Defense strategy file to write");
  solve->add_option("--attack-out", attack_out, "Attack strategy file to write");

  // gap
  std::string gap_instance, gap_defense, gap_attack;
  long long gap_max_candidates = 0;
  int gap_flip_radius = -1;
  CLI::App* gap = app.add_subcommand("gap", "Certify a defense/attack pair");
  gap->add_option("--instance,-i", gap_instance, "Instance file")->required();
  gap->add_option("--defense", gap_defense, "Defense strategy file")->required();
  gap->add_option("--attack", gap_attack, "Attack strategy file")->required();
  gap->add_option("--max-candidates", gap_max_candidates, "Oracle enumeration cap");
  gap->add_option("--flip-radius", gap_flip_radius,
                  "Two-block attacker budget on an extended instance (-1 = plain)");

  // experiments
  misdef_experiment_options exp_opts;
  misdef_experiment_options_init(&exp_opts);
  std::vector<int> ka_grid, kd_grid, radii_grid;
  std::string exp_out;
  CLI::App* table = app.add_subcommand("table", "Certified-gap table across budget pairs");
  CLI::App* sweep = app.add_subcommand("sweep", "Attacker value across budget grids");
  CLI::App* uncertainty =
      app.add_subcommand("uncertainty", "Compare the four preference settings");
  for (CLI::App* sub : {table, sweep, uncertainty}) {
    add_experiment_options(sub, &exp_opts, &ka_grid, &kd_grid, &radii_grid);
    sub->add_option("--output,-o", exp_out, "CSV file to write")->required();
  }

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    misdef_instance* inst = nullptr;
    misdef_status st = misdef_instance_generate(&gen_opts, &inst);
    if (st != MISDEF_OK) return fail(st);
    st = misdef_instance_save(inst, gen_out.c_str());
    if (st != MISDEF_OK) {
      misdef_instance_free(inst);
      return fail(st);
    }
    std::printf("wrote %s (%d channels, %d voters, disjoint %d)\n", gen_out.c_str(),
                misdef_instance_channels(inst), misdef_instance_voters(inst),
                misdef_instance_is_disjoint(inst));
    misdef_instance_free(inst);
    return 0;
  }

  if (solve->parsed()) {
    solve_opts.certify = no_certify ? 0 : 1;
    misdef_instance* inst = nullptr;
    misdef_status st = misdef_instance_load(solve_instance.c_str(), &inst);
    if (st != MISDEF_OK) return fail(st);
    misdef_report* report = nullptr;
    st = misdef_solve(inst, &solve_opts, &report);
    misdef_instance_free(inst);
    if (st != MISDEF_OK) return fail(st);

    int rc = 0;
    if (!report_out.empty()) {
      st = misdef_report_save(report, report_out.c_str());
      if (st != MISDEF_OK) rc = fail(st);
    }
    if (rc == 0 && !defense_out.empty()) {
      misdef_strategy* defense = nullptr;
      st = misdef_report_defense(report, &defense);
      if (st == MISDEF_OK) st = misdef_strategy_save(defense, defense_out.c_str());
      misdef_strategy_free(defense);
      if (st != MISDEF_OK) rc = fail(st);
    }
    if (rc == 0 && !attack_out.empty()) {
      misdef_strategy* attack = nullptr;
      st = misdef_report_attack(report, &attack);
      if (st == MISDEF_OK) st = misdef_strategy_save(attack, attack_out.c_str());
      misdef_strategy_free(attack);
      if (st != MISDEF_OK) rc = fail(st);
    }
    if (rc == 0 && solve_opts.certify) {
      double upper = 0, lower = 0, g = 0;
      int defined = 0;
      st = misdef_report_certificate(report, &upper, &lower, &g, &defined);
      if (st == MISDEF_OK) {
        print_certificate(upper, lower, g, defined);
      } else {
        rc = fail(st);
      }
    }
    misdef_report_free(report);
    return rc;
  }

  if (gap->parsed()) {
    misdef_instance* inst = nullptr;
    misdef_strategy* defense = nullptr;
    misdef_strategy* attack = nullptr;
    misdef_status st = misdef_instance_load(gap_instance.c_str(), &inst);
    if (st == MISDEF_OK) st = misdef_strategy_load(gap_defense.c_str(), &defense);
    if (st == MISDEF_OK) st = misdef_strategy_load(gap_attack.c_str(), &attack);
    double upper = 0, lower = 0, g = 0;
    int defined = 0;
    if (st == MISDEF_OK) {
      st = misdef_certify(inst, defense, attack, gap_max_candidates, gap_flip_radius, &upper,
                          &lower, &g, &defined);
    }
    misdef_strategy_free(attack);
    misdef_strategy_free(defense);
    misdef_instance_free(inst);
    if (st != MISDEF_OK) return fail(st);
    return print_certificate(upper, lower, g, defined);
  }

  bind_arrays(&exp_opts, ka_grid, kd_grid, radii_grid);
  misdef_status st = MISDEF_OK;
  if (table->parsed()) {
    st = misdef_run_gap_table(&exp_opts, exp_out.c_str());
  } else if (sweep->parsed()) {
    st = misdef_run_budget_sweep(&exp_opts, exp_out.c_str());
  } else if (uncertainty->parsed()) {
    st = misdef_run_uncertainty_suite(&exp_opts, exp_out.c_str());
  }
  if (st != MISDEF_OK) return fail(st);
  std::printf("wrote %s\n", exp_out.c_str());
  return 0;
}
