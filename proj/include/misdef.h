/* C interface to the misdef solvers: attacker/defender resource-allocation
 * games over advertising channels spreading misinformation to voters.
 * Handles are opaque; every function returns a status code and leaves a
 * human-readable message in misdef_last_error() on failure. */

#ifndef MISDEF_H
#define MISDEF_H

#include <stddef.h>
#include <stdint.h>

#ifdef _WIN32
#define MISDEF_API __declspec(dllexport)
#else
#define MISDEF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum misdef_status {
  MISDEF_OK = 0,
  MISDEF_ERR_INVALID_ARGUMENT = 1,
  MISDEF_ERR_INVALID_STRATEGY = 2,
  MISDEF_ERR_STRUCTURE = 3,
  MISDEF_ERR_DOMAIN = 4,
  MISDEF_ERR_RESOURCE = 5,
  MISDEF_ERR_CONFIG = 6,
  MISDEF_ERR_IO = 7,
  MISDEF_ERR_INTERNAL = 8
} misdef_status;

typedef struct misdef_instance misdef_instance;
typedef struct misdef_strategy misdef_strategy;
typedef struct misdef_report misdef_report;

MISDEF_API const char* misdef_version(void);
MISDEF_API const char* misdef_status_name(misdef_status status);
/* Message from the last failing call on this thread ("" if none). */
MISDEF_API const char* misdef_last_error(void);

/* ---- instances ---- */

typedef struct misdef_gen_options {
  int channels;
  int voters;
  int degree_min;
  int degree_max;
  int disjoint;            /* 1: exactly one channel per voter */
  double p_min, p_max;
  double q_min, q_max;
  int attacker_budget;
  int defender_budget;
  /* preference recipe: 0 known Bernoulli, 1 constant marginals,
   * 2 Bernoulli samples, 3 adversarial nominal */
  int recipe;
  double theta_param;
  int sample_count;
  int flip_radius;
  uint64_t seed;
} misdef_gen_options;

MISDEF_API void misdef_gen_options_init(misdef_gen_options* opts);
MISDEF_API misdef_status misdef_instance_generate(const misdef_gen_options* opts,
                                                  misdef_instance** out);
MISDEF_API misdef_status misdef_instance_load(const char* path, misdef_instance** out);
MISDEF_API misdef_status misdef_instance_save(const misdef_instance* inst, const char* path);
MISDEF_API void misdef_instance_free(misdef_instance* inst);

MISDEF_API int misdef_instance_channels(const misdef_instance* inst);
MISDEF_API int misdef_instance_voters(const misdef_instance* inst);
MISDEF_API int misdef_instance_attacker_budget(const misdef_instance* inst);
MISDEF_API int misdef_instance_defender_budget(const misdef_instance* inst);
MISDEF_API int misdef_instance_is_disjoint(const misdef_instance* inst);
/* 1 when all value-level invariants hold; violations (newline separated) are
 * copied into buffer when provided. */
MISDEF_API misdef_status misdef_instance_validate(const misdef_instance* inst, int* ok,
                                                  char* buffer, size_t buffer_size);

/* ---- solving ---- */

typedef struct misdef_solve_options {
  /* 0 perturbed-leader (disjoint), 1 gradient/mirror-ascent */
  int solver;
  /* 0 known, 1 stochastic (marginals), 2 asymmetric (samples), 3 adversarial */
  int setting;
  long iterations;          /* 0: derive from epsilon (perturbed-leader only) */
  double epsilon;
  double perturbation_scale; /* 0: 1/epsilon */
  double step_size;          /* 0: derived */
  int update_rule;           /* 0 euclidean, 1 exponentiated */
  int entropic_exact;        /* 1: exact KL projection instead of closed form */
  double budget_expansion;   /* defender greedy budget ceil(alpha * k_d) */
  int lazy_greedy;
  int sample_count;          /* asymmetric from marginals: samples to draw */
  int flip_radius;           /* adversarial override; -1: use instance block */
  int certify;               /* 1: attach exact best-response certificate */
  long long max_candidates;  /* oracle enumeration cap */
  uint64_t seed;
} misdef_solve_options;

MISDEF_API void misdef_solve_options_init(misdef_solve_options* opts);
MISDEF_API misdef_status misdef_solve(const misdef_instance* inst,
                                      const misdef_solve_options* opts,
                                      misdef_report** out);

MISDEF_API void misdef_report_free(misdef_report* report);
MISDEF_API misdef_status misdef_report_save(const misdef_report* report, const char* path);
MISDEF_API misdef_status misdef_report_load(const char* path, misdef_report** out);
/* Certificate values; MISDEF_ERR_INVALID_ARGUMENT when absent. gap_defined is
 * 0 when the lower bound is zero. */
MISDEF_API misdef_status misdef_report_certificate(const misdef_report* report,
                                                   double* upper, double* lower,
                                                   double* gap, int* gap_defined);
MISDEF_API misdef_status misdef_report_defense(const misdef_report* report,
                                               misdef_strategy** out);
MISDEF_API misdef_status misdef_report_attack(const misdef_report* report,
                                              misdef_strategy** out);

/* ---- strategies and certification ---- */

MISDEF_API misdef_status misdef_strategy_load(const char* path, misdef_strategy** out);
MISDEF_API misdef_status misdef_strategy_save(const misdef_strategy* strategy,
                                              const char* path);
MISDEF_API void misdef_strategy_free(misdef_strategy* strategy);
MISDEF_API int misdef_strategy_support_size(const misdef_strategy* strategy);

/* Exact best-response certificate for a defense/attack pair on an instance.
 * flip_radius >= 0 restricts the attacker to the two-block constraint of an
 * adversarially extended instance. */
MISDEF_API misdef_status misdef_certify(const misdef_instance* inst,
                                        const misdef_strategy* defense,
                                        const misdef_strategy* attack,
                                        long long max_candidates, int flip_radius,
                                        double* upper, double* lower, double* gap,
                                        int* gap_defined);

/* ---- experiment drivers ---- */

typedef struct misdef_experiment_options {
  misdef_gen_options generator;
  misdef_solve_options solver;
  int replications;
  uint64_t master_seed;
  const int* attacker_budgets;
  int num_attacker_budgets;
  const int* defender_budgets;
  int num_defender_budgets;
  const int* flip_radii;
  int num_flip_radii;
  int sample_count;
} misdef_experiment_options;

MISDEF_API void misdef_experiment_options_init(misdef_experiment_options* opts);
/* Each writes a CSV (metadata preamble + header) to out_path. */
MISDEF_API misdef_status misdef_run_gap_table(const misdef_experiment_options* opts,
                                              const char* out_path);
MISDEF_API misdef_status misdef_run_budget_sweep(const misdef_experiment_options* opts,
                                                 const char* out_path);
MISDEF_API misdef_status misdef_run_uncertainty_suite(const misdef_experiment_options* opts,
                                                      const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* MISDEF_H */
