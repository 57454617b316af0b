/* Minimal C consumer of the shared library: generate, solve, certify, clean
 * up. Exercises the header under a C compiler, where any C++ leakage would
 * fail to build. */
#include <stdio.h>
#include <string.h>

#include <misdef.h>

#define EXPECT(cond)                                                      \
  do {                                                                    \
    if (!(cond)) {                                                        \
      fprintf(stderr, "FAILED: %s (line %d): %s\n", #cond, __LINE__,      \
              misdef_last_error());                                       \
      return 1;                                                           \
    }                                                                     \
  } while (0)

int main(void) {
  EXPECT(strcmp(misdef_version(), "0.1.0") == 0);
  EXPECT(strcmp(misdef_status_name(MISDEF_OK), "ok") == 0);

  misdef_gen_options gen;
  misdef_gen_options_init(&gen);
  gen.channels = 5;
  gen.voters = 8;
  gen.degree_max = 3;
  gen.p_max = 0.7;
  gen.q_max = 0.7;
  gen.attacker_budget = 2;
  gen.defender_budget = 2;
  gen.seed = 17;

  misdef_instance* inst = NULL;
  EXPECT(misdef_instance_generate(&gen, &inst) == MISDEF_OK);
  EXPECT(misdef_instance_channels(inst) == 5);
  EXPECT(misdef_instance_voters(inst) == 8);

  int ok = 0;
  EXPECT(misdef_instance_validate(inst, &ok, NULL, 0) == MISDEF_OK);
  EXPECT(ok == 1);

  misdef_solve_options solve;
  misdef_solve_options_init(&solve);
  solve.solver = 1;
  solve.iterations = 25;

  misdef_report* report = NULL;
  EXPECT(misdef_solve(inst, &solve, &report) == MISDEF_OK);

  double upper = 0.0, lower = 0.0, gap = 0.0;
  int gap_defined = 0;
  EXPECT(misdef_report_certificate(report, &upper, &lower, &gap, &gap_defined) == MISDEF_OK);
  EXPECT(upper >= lower);
  EXPECT(lower >= 0.0);

  misdef_strategy* defense = NULL;
  EXPECT(misdef_report_defense(report, &defense) == MISDEF_OK);
  EXPECT(misdef_strategy_support_size(defense) >= 1);

  misdef_strategy* attack = NULL;
  EXPECT(misdef_report_attack(report, &attack) == MISDEF_OK);

  double upper2 = 0.0, lower2 = 0.0, gap2 = 0.0;
  int defined2 = 0;
  EXPECT(misdef_certify(inst, defense, attack, 0, -1, &upper2, &lower2, &gap2, &defined2) ==
         MISDEF_OK);
  EXPECT(upper2 == upper);
  EXPECT(lower2 == lower);

  misdef_strategy_free(attack);
  misdef_strategy_free(defense);
  misdef_report_free(report);
  misdef_instance_free(inst);

  /* Error propagation without a crash. */
  misdef_instance* bad = NULL;
  gen.channels = 0;
  EXPECT(misdef_instance_generate(&gen, &bad) == MISDEF_ERR_CONFIG);
  EXPECT(bad == NULL);
  EXPECT(strlen(misdef_last_error()) > 0);

  printf("capi smoke test passed\n");
  return 0;
}
