#include "misdef.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "misdef/error.hpp"
#include "misdef/experiments.hpp"
#include "misdef/ftpl.hpp"
#include "misdef/generator.hpp"
#include "misdef/io.hpp"
#include "misdef/mirror_ascent.hpp"
#include "misdef/model.hpp"
#include "misdef/oracles.hpp"
#include "misdef/payoff.hpp"
#include "misdef/rng.hpp"

struct misdef_instance {
  misdef::GameInstance instance;
  std::optional<misdef::PreferenceModel> preferences;
};

struct misdef_strategy {
  misdef::AttackerStrategy value;
};

struct misdef_report {
  misdef::SolveReport report;
};

namespace {

thread_local std::string g_last_error;

misdef_status map_code(misdef::ErrorCode code) {
  using misdef::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return MISDEF_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_strategy: return MISDEF_ERR_INVALID_STRATEGY;
    case ErrorCode::structure: return MISDEF_ERR_STRUCTURE;
    case ErrorCode::domain: return MISDEF_ERR_DOMAIN;
    case ErrorCode::resource: return MISDEF_ERR_RESOURCE;
    case ErrorCode::config: return MISDEF_ERR_CONFIG;
    case ErrorCode::io: return MISDEF_ERR_IO;
  }
  return MISDEF_ERR_INTERNAL;
}

template <class Fn>
misdef_status wrap(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return MISDEF_OK;
  } catch (const misdef::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MISDEF_ERR_RESOURCE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MISDEF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MISDEF_ERR_INTERNAL;
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw misdef::Error(misdef::ErrorCode::invalid_argument, message);
}

misdef::GeneratorConfig translate_generator(const misdef_gen_options& o) {
  misdef::GeneratorConfig cfg;
  cfg.channels = o.channels;
  cfg.voters = o.voters;
  cfg.degree_min = o.degree_min;
  cfg.degree_max = o.degree_max;
  cfg.disjoint = o.disjoint != 0;
  cfg.p_min = o.p_min;
  cfg.p_max = o.p_max;
  cfg.q_min = o.q_min;
  cfg.q_max = o.q_max;
  cfg.attacker_budget = o.attacker_budget;
  cfg.defender_budget = o.defender_budget;
  switch (o.recipe) {
    case 0: cfg.recipe = misdef::PreferenceRecipe::bernoulli_known; break;
    case 1: cfg.recipe = misdef::PreferenceRecipe::constant_marginals; break;
    case 2: cfg.recipe = misdef::PreferenceRecipe::bernoulli_samples; break;
    case 3: cfg.recipe = misdef::PreferenceRecipe::adversarial_nominal; break;
    default:
      throw misdef::Error(misdef::ErrorCode::config, "unknown preference recipe");
  }
  cfg.theta_param = o.theta_param;
  cfg.sample_count = o.sample_count;
  cfg.flip_radius = o.flip_radius;
  cfg.seed = o.seed;
  return cfg;
}

misdef::MirrorConfig translate_mirror(const misdef_solve_options& o) {
  misdef::MirrorConfig cfg;
  cfg.iterations = o.iterations > 0 ? o.iterations : 50;
  cfg.step_size = o.step_size;
  cfg.update_rule =
      o.update_rule == 1 ? misdef::UpdateRule::exponentiated : misdef::UpdateRule::euclidean;
  cfg.entropic_mode =
      o.entropic_exact ? misdef::EntropicMode::exact : misdef::EntropicMode::closed_form;
  cfg.budget_expansion = o.budget_expansion;
  cfg.epsilon = o.epsilon;
  cfg.lazy_greedy = o.lazy_greedy != 0;
  return cfg;
}

std::vector<double> known_weights_or_throw(const misdef_instance& inst) {
  if (!inst.preferences) {
    throw misdef::Error(misdef::ErrorCode::config, "instance carries no preference block");
  }
  if (const auto* known = std::get_if<misdef::KnownPreferences>(&*inst.preferences)) {
    return misdef::preference_weights(*known);
  }
  throw misdef::Error(misdef::ErrorCode::config,
                      "the known setting needs known 0/1 preferences on the instance");
}

std::vector<double> marginal_weights_or_throw(const misdef_instance& inst) {
  if (!inst.preferences) {
    throw misdef::Error(misdef::ErrorCode::config, "instance carries no preference block");
  }
  if (const auto* marg = std::get_if<misdef::MarginalPreferences>(&*inst.preferences)) {
    return misdef::substitute_marginals(*marg);
  }
  throw misdef::Error(misdef::ErrorCode::config,
                      "the stochastic setting needs marginal preferences on the instance");
}

std::vector<std::vector<double>> sample_weights_or_throw(const misdef_instance& inst,
                                                         const misdef_solve_options& opts) {
  if (!inst.preferences) {
    throw misdef::Error(misdef::ErrorCode::config, "instance carries no preference block");
  }
  if (const auto* sampled = std::get_if<misdef::SampledPreferences>(&*inst.preferences)) {
    std::vector<std::vector<double>> weights;
    weights.reserve(sampled->samples.size());
    for (const auto& s : sampled->samples) {
      weights.emplace_back(s.begin(), s.end());
    }
    if (weights.empty()) {
      throw misdef::Error(misdef::ErrorCode::config, "sampled preference block is empty");
    }
    return weights;
  }
  if (const auto* marg = std::get_if<misdef::MarginalPreferences>(&*inst.preferences)) {
    if (opts.sample_count < 1) {
      throw misdef::Error(misdef::ErrorCode::config,
                          "drawing samples from marginals needs sample_count >= 1");
    }
    misdef::Rng rng(misdef::derive_seed(opts.seed, "posterior-samples"));
    std::vector<std::vector<double>> weights(
        opts.sample_count, std::vector<double>(marg->probs.size(), 0.0));
    for (int j = 0; j < opts.sample_count; ++j) {
      for (std::size_t v = 0; v < marg->probs.size(); ++v) {
        weights[j][v] = rng.bernoulli(marg->probs[v]) ? 1.0 : 0.0;
      }
    }
    return weights;
  }
  throw misdef::Error(misdef::ErrorCode::config,
                      "the asymmetric setting needs sampled or marginal preferences");
}

struct AdversarialInput {
  std::vector<std::uint8_t> nominal;
  int radius = 0;
};

AdversarialInput adversarial_input_or_throw(const misdef_instance& inst,
                                            const misdef_solve_options& opts) {
  if (!inst.preferences) {
    throw misdef::Error(misdef::ErrorCode::config, "instance carries no preference block");
  }
  AdversarialInput in;
  if (const auto* adv = std::get_if<misdef::AdversarialPreferences>(&*inst.preferences)) {
    in.nominal = adv->nominal;
    in.radius = opts.flip_radius >= 0 ? opts.flip_radius : adv->radius;
    return in;
  }
  if (const auto* known = std::get_if<misdef::KnownPreferences>(&*inst.preferences)) {
    if (opts.flip_radius < 0) {
      throw misdef::Error(misdef::ErrorCode::config,
                          "known preferences need an explicit flip_radius for the "
                          "adversarial setting");
    }
    in.nominal = known->theta;
    in.radius = opts.flip_radius;
    return in;
  }
  throw misdef::Error(misdef::ErrorCode::config,
                      "the adversarial setting needs adversarial or known preferences");
}

std::string format_number(double v) { return misdef::format_double(v); }

using ParamList = std::vector<std::pair<std::string, std::string>>;

ParamList common_params(const misdef_solve_options& o) {
  ParamList params;
  params.emplace_back("setting", std::to_string(o.setting));
  params.emplace_back("seed", std::to_string(o.seed));
  return params;
}

misdef::OracleLimits limits_of(const misdef_solve_options& o) {
  misdef::OracleLimits lim;
  if (o.max_candidates > 0) lim.max_candidates = o.max_candidates;
  return lim;
}

// Average per-voter reach coefficients over per-sample attacker mixtures,
// weighted by the matching sample weights (the lower-bound side of the
// asymmetric certificate).
template <class AttackOf>
std::vector<double> averaged_reach(const misdef::GameInstance& inst,
                                   const std::vector<std::vector<double>>& sample_weights,
                                   AttackOf&& attack_of) {
  std::vector<double> c(inst.num_voters(), 0.0);
  for (std::size_t j = 0; j < sample_weights.size(); ++j) {
    const std::vector<double> reach = attack_of(j);
    for (int v = 0; v < inst.num_voters(); ++v) {
      c[v] += sample_weights[j][v] * reach[v];
    }
  }
  const double inv = 1.0 / static_cast<double>(sample_weights.size());
  for (double& cv : c) cv *= inv;
  return c;
}

misdef::GapCertificate asymmetric_certificate(
    const misdef::GameInstance& inst,
    const std::vector<std::vector<double>>& sample_weights, const misdef::MixedStrategy& defense,
    const std::vector<double>& reach_coefficients, const misdef::OracleLimits& limits) {
  double upper = 0.0;
  for (const auto& w : sample_weights) {
    upper += misdef::exact_attacker_best_response(inst, w, defense, inst.attacker_budget(),
                                                  limits)
                 .value;
  }
  upper /= static_cast<double>(sample_weights.size());
  const double lower =
      misdef::exact_defender_best_response(inst, std::span<const double>(reach_coefficients),
                                           inst.defender_budget(), limits)
          .value;
  misdef::GapCertificate cert;
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

misdef::SolveReport run_ftpl(const misdef_instance& handle, const misdef_solve_options& opts) {
  const misdef::GameInstance& inst = handle.instance;
  misdef::FtplConfig cfg{opts.epsilon, opts.iterations, opts.perturbation_scale, opts.seed};
  const misdef::OracleLimits limits = limits_of(opts);
  ParamList params = common_params(opts);
  params.emplace_back("epsilon", format_number(opts.epsilon));

  switch (opts.setting) {
    case 0:
    case 1: {
      const std::vector<double> weights = opts.setting == 0
                                              ? known_weights_or_throw(handle)
                                              : marginal_weights_or_throw(handle);
      const misdef::FtplTrace trace = misdef::ftpl_solve(inst, weights, cfg);
      params.emplace_back("iterations", std::to_string(trace.iterations));
      misdef::SolveReport report{.solver = "ftpl",
                                 .params = std::move(params),
                                 .defense = trace.defender_mixture(),
                                 .attack = trace.attacker_mixture()};
      if (opts.certify) {
        report.certificate = misdef::optimality_gap(
            inst, weights, report.defense, std::get<misdef::MixedStrategy>(*report.attack),
            inst.attacker_budget(), inst.defender_budget(), limits);
      }
      return report;
    }
    case 2: {
      const std::vector<std::vector<double>> samples = sample_weights_or_throw(handle, opts);
      const misdef::FtplAsymmetricTrace trace = misdef::ftpl_asymmetric(inst, samples, cfg);
      params.emplace_back("iterations", std::to_string(trace.iterations));
      params.emplace_back("samples", std::to_string(samples.size()));
      misdef::SolveReport report{.solver = "ftpl-asymmetric",
                                 .params = std::move(params),
                                 .defense = trace.defender_mixture()};
      if (opts.certify) {
        const std::vector<double> reach =
            averaged_reach(inst, samples, [&](std::size_t j) {
              return misdef::attack_success(
                  inst, misdef::MixedStrategy::uniform(trace.attacker_histories[j]));
            });
        report.certificate =
            asymmetric_certificate(inst, samples, report.defense, reach, limits);
      }
      return report;
    }
    case 3: {
      const AdversarialInput in = adversarial_input_or_throw(handle, opts);
      const misdef::FtplAdversarialTrace trace =
          misdef::ftpl_adversarial(inst, in.nominal, in.radius, cfg);
      params.emplace_back("iterations", std::to_string(trace.iterations));
      params.emplace_back("flip_radius", std::to_string(in.radius));
      misdef::SolveReport report{.solver = "ftpl-adversarial",
                                 .params = std::move(params),
                                 .defense = trace.defender_mixture(),
                                 .attack = trace.attacker_mixture()};
      if (opts.certify) {
        const misdef::AdversarialExtension ext =
            misdef::adversarial_extend(inst, in.nominal, in.radius);
        const misdef::PartitionConstraint partition{ext.real_channels, inst.attacker_budget(),
                                                    in.radius};
        report.certificate = misdef::optimality_gap(
            ext.instance, ext.weights, report.defense,
            std::get<misdef::MixedStrategy>(*report.attack), inst.attacker_budget(),
            inst.defender_budget(), limits, partition, ext.real_channels);
      }
      return report;
    }
    default:
      throw misdef::Error(misdef::ErrorCode::config, "unknown solve setting");
  }
}

misdef::SolveReport run_gradient(const misdef_instance& handle,
                                 const misdef_solve_options& opts) {
  const misdef::GameInstance& inst = handle.instance;
  const misdef::MirrorConfig cfg = translate_mirror(opts);
  const misdef::OracleLimits limits = limits_of(opts);
  ParamList params = common_params(opts);
  params.emplace_back("iterations", std::to_string(cfg.iterations));
  params.emplace_back("update_rule", cfg.update_rule == misdef::UpdateRule::euclidean
                                         ? "euclidean"
                                         : "exponentiated");
  params.emplace_back("budget_expansion", format_number(cfg.budget_expansion));

  switch (opts.setting) {
    case 0:
    case 1: {
      const std::vector<double> weights = opts.setting == 0
                                              ? known_weights_or_throw(handle)
                                              : marginal_weights_or_throw(handle);
      const misdef::MirrorTrace trace = misdef::online_gradient_solve(inst, weights, cfg);
      params.emplace_back("step_size", format_number(trace.step_size));
      misdef::SolveReport report{.solver = "og",
                                 .params = std::move(params),
                                 .defense = trace.defender_mixture(),
                                 .attack = trace.final_mixture(),
                                 .iteration_values = trace.iteration_values};
      if (opts.certify) {
        report.certificate = misdef::optimality_gap(
            inst, weights, report.defense, std::get<misdef::MarginalMixture>(*report.attack),
            inst.attacker_budget(), inst.defender_budget(), limits);
      }
      return report;
    }
    case 2: {
      const std::vector<std::vector<double>> samples = sample_weights_or_throw(handle, opts);
      const misdef::AsymmetricMirrorTrace trace = misdef::og_asymmetric(inst, samples, cfg);
      params.emplace_back("step_size", format_number(trace.step_size));
      params.emplace_back("samples", std::to_string(samples.size()));
      misdef::SolveReport report{.solver = "og-asymmetric",
                                 .params = std::move(params),
                                 .defense = trace.defender_mixture(),
                                 .attack = std::nullopt,
                                 .iteration_values = trace.iteration_values};
      if (opts.certify) {
        const std::vector<double> reach =
            averaged_reach(inst, samples, [&](std::size_t j) {
              return misdef::attack_success(
                  inst, std::span<const double>(trace.final_marginals[j]));
            });
        report.certificate =
            asymmetric_certificate(inst, samples, report.defense, reach, limits);
      }
      return report;
    }
    case 3: {
      const AdversarialInput in = adversarial_input_or_throw(handle, opts);
      const misdef::AdversarialMirrorTrace trace =
          misdef::og_adversarial(inst, in.nominal, in.radius, cfg);
      params.emplace_back("step_size", format_number(trace.trace.step_size));
      params.emplace_back("flip_radius", std::to_string(in.radius));
      misdef::SolveReport report{.solver = "og-adversarial",
                                 .params = std::move(params),
                                 .defense = trace.trace.defender_mixture(),
                                 .attack = trace.trace.final_mixture(),
                                 .iteration_values = trace.trace.iteration_values};
      if (opts.certify) {
        const misdef::AdversarialExtension ext =
            misdef::adversarial_extend(inst, in.nominal, in.radius);
        const misdef::PartitionConstraint partition{ext.real_channels, inst.attacker_budget(),
                                                    in.radius};
        report.certificate = misdef::optimality_gap(
            ext.instance, ext.weights, report.defense,
            std::get<misdef::MarginalMixture>(*report.attack), inst.attacker_budget(),
            inst.defender_budget(), limits, partition, ext.real_channels);
      }
      return report;
    }
    default:
      throw misdef::Error(misdef::ErrorCode::config, "unknown solve setting");
  }
}

misdef::ExperimentConfig translate_experiment(const misdef_experiment_options& o,
                                              const char* out_path) {
  require(out_path != nullptr, "output path is required");
  misdef::ExperimentConfig cfg;
  cfg.generator = translate_generator(o.generator);
  cfg.solver = translate_mirror(o.solver);
  cfg.replications = o.replications;
  cfg.master_seed = o.master_seed;
  if (o.solver.max_candidates > 0) cfg.limits.max_candidates = o.solver.max_candidates;
  if (o.attacker_budgets && o.num_attacker_budgets > 0) {
    cfg.attacker_budgets.assign(o.attacker_budgets, o.attacker_budgets + o.num_attacker_budgets);
  }
  if (o.defender_budgets && o.num_defender_budgets > 0) {
    cfg.defender_budgets.assign(o.defender_budgets, o.defender_budgets + o.num_defender_budgets);
  }
  if (o.flip_radii && o.num_flip_radii > 0) {
    cfg.flip_radii.assign(o.flip_radii, o.flip_radii + o.num_flip_radii);
  }
  cfg.sample_count = o.sample_count;
  cfg.output_path = out_path;
  return cfg;
}

void copy_message(const std::string& text, char* buffer, size_t buffer_size) {
  if (!buffer || buffer_size == 0) return;
  const size_t n = std::min(buffer_size - 1, text.size());
  std::memcpy(buffer, text.data(), n);
  buffer[n] = '\0';
}

}  // namespace

extern "C" {

const char* misdef_version(void) { return "0.1.0"; }

const char* misdef_status_name(misdef_status status) {
  switch (status) {
    case MISDEF_OK: return "ok";
    case MISDEF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MISDEF_ERR_INVALID_STRATEGY: return "invalid_strategy";
    case MISDEF_ERR_STRUCTURE: return "structure";
    case MISDEF_ERR_DOMAIN: return "domain";
    case MISDEF_ERR_RESOURCE: return "resource";
    case MISDEF_ERR_CONFIG: return "config";
    case MISDEF_ERR_IO: return "io";
    case MISDEF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* misdef_last_error(void) { return g_last_error.c_str(); }

void misdef_gen_options_init(misdef_gen_options* opts) {
  if (!opts) return;
  *opts = misdef_gen_options{};
  opts->channels = 30;
  opts->voters = 150;
  opts->degree_min = 1;
  opts->degree_max = 5;
  opts->disjoint = 0;
  opts->p_min = 0.0;
  opts->p_max = 0.2;
  opts->q_min = 0.0;
  opts->q_max = 0.2;
  opts->attacker_budget = 3;
  opts->defender_budget = 3;
  opts->recipe = 0;
  opts->theta_param = 0.5;
  opts->sample_count = 10;
  opts->flip_radius = 0;
  opts->seed = 0;
}

misdef_status misdef_instance_generate(const misdef_gen_options* opts, misdef_instance** out) {
  return wrap([&] {
    require(opts && out, "options and output pointer are required");
    misdef::GeneratedInstance g = misdef::generate_instance(translate_generator(*opts));
    *out = new misdef_instance{std::move(g.instance), std::move(g.preferences)};
  });
}

misdef_status misdef_instance_load(const char* path, misdef_instance** out) {
  return wrap([&] {
    require(path && out, "path and output pointer are required");
    auto [inst, prefs] = misdef::load_instance(path);
    *out = new misdef_instance{std::move(inst), std::move(prefs)};
  });
}

misdef_status misdef_instance_save(const misdef_instance* inst, const char* path) {
  return wrap([&] {
    require(inst && path, "instance and path are required");
    misdef::save_instance(inst->instance, inst->preferences, path);
  });
}

void misdef_instance_free(misdef_instance* inst) { delete inst; }

int misdef_instance_channels(const misdef_instance* inst) {
  return inst ? inst->instance.num_channels() : -1;
}
int misdef_instance_voters(const misdef_instance* inst) {
  return inst ? inst->instance.num_voters() : -1;
}
int misdef_instance_attacker_budget(const misdef_instance* inst) {
  return inst ? inst->instance.attacker_budget() : -1;
}
int misdef_instance_defender_budget(const misdef_instance* inst) {
  return inst ? inst->instance.defender_budget() : -1;
}
int misdef_instance_is_disjoint(const misdef_instance* inst) {
  return inst ? (inst->instance.disjoint() ? 1 : 0) : -1;
}

misdef_status misdef_instance_validate(const misdef_instance* inst, int* ok, char* buffer,
                                       size_t buffer_size) {
  return wrap([&] {
    require(inst && ok, "instance and result pointer are required");
    const misdef::ValidationReport report = misdef::validate_instance(inst->instance);
    *ok = report.ok ? 1 : 0;
    std::string joined;
    for (const auto& v : report.violations) {
      if (!joined.empty()) joined += '\n';
      joined += v;
    }
    copy_message(joined, buffer, buffer_size);
  });
}

void misdef_solve_options_init(misdef_solve_options* opts) {
  if (!opts) return;
  *opts = misdef_solve_options{};
  opts->solver = 1;
  opts->setting = 0;
  opts->iterations = 0;
  opts->epsilon = 0.1;
  opts->perturbation_scale = 0.0;
  opts->step_size = 0.0;
  opts->update_rule = 0;
  opts->entropic_exact = 0;
  opts->budget_expansion = 1.0;
  opts->lazy_greedy = 0;
  opts->sample_count = 10;
  opts->flip_radius = -1;
  opts->certify = 1;
  opts->max_candidates = 0;
  opts->seed = 0;
}

misdef_status misdef_solve(const misdef_instance* inst, const misdef_solve_options* opts,
                           misdef_report** out) {
  return wrap([&] {
    require(inst && opts && out, "instance, options and output pointer are required");
    if (opts->solver != 0 && opts->solver != 1) {
      throw misdef::Error(misdef::ErrorCode::config, "unknown solver id");
    }
    *out = new misdef_report{opts->solver == 0 ? run_ftpl(*inst, *opts)
                                               : run_gradient(*inst, *opts)};
  });
}

void misdef_report_free(misdef_report* report) { delete report; }

misdef_status misdef_report_save(const misdef_report* report, const char* path) {
  return wrap([&] {
    require(report && path, "report and path are required");
    misdef::save_report(report->report, path);
  });
}

misdef_status misdef_report_load(const char* path, misdef_report** out) {
  return wrap([&] {
    require(path && out, "path and output pointer are required");
    *out = new misdef_report{misdef::report_from_file(path)};
  });
}

misdef_status misdef_report_certificate(const misdef_report* report, double* upper,
                                        double* lower, double* gap, int* gap_defined) {
  return wrap([&] {
    require(report, "report is required");
    require(report->report.certificate.has_value(), "report carries no certificate");
    const misdef::GapCertificate& c = *report->report.certificate;
    if (upper) *upper = c.upper;
    if (lower) *lower = c.lower;
    if (gap) *gap = c.gap;
    if (gap_defined) *gap_defined = c.gap_defined ? 1 : 0;
  });
}

misdef_status misdef_report_defense(const misdef_report* report, misdef_strategy** out) {
  return wrap([&] {
    require(report && out, "report and output pointer are required");
    *out = new misdef_strategy{misdef::AttackerStrategy(report->report.defense)};
  });
}

misdef_status misdef_report_attack(const misdef_report* report, misdef_strategy** out) {
  return wrap([&] {
    require(report && out, "report and output pointer are required");
    require(report->report.attack.has_value(), "report carries no attack strategy");
    *out = new misdef_strategy{*report->report.attack};
  });
}

misdef_status misdef_strategy_load(const char* path, misdef_strategy** out) {
  return wrap([&] {
    require(path && out, "path and output pointer are required");
    *out = new misdef_strategy{misdef::strategy_from_file(path)};
  });
}

misdef_status misdef_strategy_save(const misdef_strategy* strategy, const char* path) {
  return wrap([&] {
    require(strategy && path, "strategy and path are required");
    misdef::save_strategy(strategy->value, path);
  });
}

void misdef_strategy_free(misdef_strategy* strategy) { delete strategy; }

int misdef_strategy_support_size(const misdef_strategy* strategy) {
  if (!strategy) return -1;
  if (const auto* mixed = std::get_if<misdef::MixedStrategy>(&strategy->value)) {
    return mixed->size();
  }
  return static_cast<int>(std::get<misdef::MarginalMixture>(strategy->value).vectors.size());
}

misdef_status misdef_certify(const misdef_instance* inst, const misdef_strategy* defense,
                             const misdef_strategy* attack, long long max_candidates,
                             int flip_radius, double* upper, double* lower, double* gap,
                             int* gap_defined) {
  return wrap([&] {
    require(inst && defense && attack, "instance, defense and attack are required");
    const auto* defense_mixed = std::get_if<misdef::MixedStrategy>(&defense->value);
    if (!defense_mixed) {
      throw misdef::Error(misdef::ErrorCode::invalid_strategy,
                          "the defense must be a set mixture");
    }
    misdef::OracleLimits limits;
    if (max_candidates > 0) limits.max_candidates = max_candidates;

    const misdef::GameInstance& game = inst->instance;
    std::vector<double> weights(game.num_voters(), 1.0);
    if (inst->preferences) {
      if (const auto* known = std::get_if<misdef::KnownPreferences>(&*inst->preferences)) {
        weights = misdef::preference_weights(*known);
      } else if (const auto* marg =
                     std::get_if<misdef::MarginalPreferences>(&*inst->preferences)) {
        weights = misdef::substitute_marginals(*marg);
      }
    }

    std::optional<misdef::PartitionConstraint> partition;
    int candidate_channels = -1;
    if (flip_radius >= 0) {
      const int real = game.num_channels() - game.num_voters();
      if (real < 1) {
        throw misdef::Error(misdef::ErrorCode::structure,
                            "a two-block certificate needs an adversarially extended instance");
      }
      partition = misdef::PartitionConstraint{real, game.attacker_budget(), flip_radius};
      candidate_channels = real;
    }

    misdef::GapCertificate cert;
    if (const auto* mixed = std::get_if<misdef::MixedStrategy>(&attack->value)) {
      cert = misdef::optimality_gap(game, weights, *defense_mixed, *mixed,
                                    game.attacker_budget(), game.defender_budget(), limits,
                                    partition, candidate_channels);
    } else {
      cert = misdef::optimality_gap(game, weights, *defense_mixed,
                                    std::get<misdef::MarginalMixture>(attack->value),
                                    game.attacker_budget(), game.defender_budget(), limits,
                                    partition, candidate_channels);
    }
    if (upper) *upper = cert.upper;
    if (lower) *lower = cert.lower;
    if (gap) *gap = cert.gap;
    if (gap_defined) *gap_defined = cert.gap_defined ? 1 : 0;
  });
}

void misdef_experiment_options_init(misdef_experiment_options* opts) {
  if (!opts) return;
  *opts = misdef_experiment_options{};
  misdef_gen_options_init(&opts->generator);
  misdef_solve_options_init(&opts->solver);
  opts->replications = 10;
  opts->master_seed = 0;
  opts->attacker_budgets = nullptr;
  opts->num_attacker_budgets = 0;
  opts->defender_budgets = nullptr;
  opts->num_defender_budgets = 0;
  opts->flip_radii = nullptr;
  opts->num_flip_radii = 0;
  opts->sample_count = 10;
}

misdef_status misdef_run_gap_table(const misdef_experiment_options* opts, const char* out_path) {
  return wrap([&] {
    require(opts != nullptr, "options are required");
    misdef::run_gap_table(translate_experiment(*opts, out_path));
  });
}

misdef_status misdef_run_budget_sweep(const misdef_experiment_options* opts,
                                      const char* out_path) {
  return wrap([&] {
    require(opts != nullptr, "options are required");
    misdef::run_budget_sweep(translate_experiment(*opts, out_path));
  });
}

misdef_status misdef_run_uncertainty_suite(const misdef_experiment_options* opts,
                                           const char* out_path) {
  return wrap([&] {
    require(opts != nullptr, "options are required");
    misdef::run_uncertainty_suite(translate_experiment(*opts, out_path));
  });
}

}  // extern "C"
