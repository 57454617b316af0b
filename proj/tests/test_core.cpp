#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "misdef/error.hpp"
#include "misdef/model.hpp"
#include "misdef/payoff.hpp"
#include "misdef/rng.hpp"
#include "test_helpers.hpp"

using namespace misdef;
using testutil::error_code_of;

namespace {

GameInstance single_edge(double p, double q) {
  return GameInstance(1, 1, 1, 1, {{0, 0, p, q}});
}

// One voter leaning 1, attacked through two channels with p = 0.5 each, one of
// them covered with q = 0.5: reach probability 0.75, survival 0.5.
GameInstance three_eighths_instance() {
  return GameInstance(2, 1, 2, 1, {{0, 0, 0.5, 0.5}, {1, 0, 0.5, 0.0}});
}

}  // namespace

TEST_CASE("instance construction validates shape") {
  CHECK(error_code_of([] { GameInstance(0, 1, 1, 1, {}); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] { GameInstance(1, 0, 1, 1, {}); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] {
          GameInstance(2, 2, 1, 1, {{2, 0, 0.5, 0.5}});
        }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] {
          GameInstance(2, 2, 1, 1, {{0, -1, 0.5, 0.5}});
        }) == ErrorCode::invalid_argument);

  const GameInstance inst(2, 2, 1, 1, {{1, 1, 0.2, 0.3}, {0, 0, 0.1, 0.4}});
  CHECK(inst.num_channels() == 2);
  CHECK(inst.num_voters() == 2);
  CHECK(inst.disjoint());
  // Edges come back in canonical (channel, voter) order regardless of input order.
  CHECK(inst.edges()[0].channel == 0);
  CHECK(inst.edges()[1].channel == 1);

  const GameInstance reshaped = inst.with_budgets(2, 2);
  CHECK(reshaped.attacker_budget() == 2);
  CHECK(reshaped.defender_budget() == 2);
  CHECK(reshaped.edges().size() == inst.edges().size());
}

TEST_CASE("validate_instance reports value-level violations") {
  const ValidationReport ok = validate_instance(
      GameInstance(2, 2, 1, 1, {{0, 0, 0.5, 0.5}, {1, 1, 0.5, 0.5}}));
  CHECK(ok.ok);
  CHECK(ok.disjoint);
  CHECK(ok.violations.empty());

  const ValidationReport bad_p = validate_instance(GameInstance(1, 1, 1, 1, {{0, 0, 1.2, 0.0}}));
  CHECK_FALSE(bad_p.ok);
  REQUIRE(bad_p.violations.size() == 1);
  CHECK(bad_p.violations[0].find("switch probability outside [0, 1]") != std::string::npos);

  const ValidationReport shared = validate_instance(
      GameInstance(2, 1, 1, 1, {{0, 0, 0.5, 0.5}, {1, 0, 0.5, 0.5}}));
  CHECK(shared.ok);
  CHECK_FALSE(shared.disjoint);

  const ValidationReport dup = validate_instance(
      GameInstance(2, 1, 1, 1, {{0, 0, 0.5, 0.5}, {0, 0, 0.4, 0.4}}));
  CHECK_FALSE(dup.ok);
  CHECK(dup.violations[0].find("duplicate edge") != std::string::npos);

  const ValidationReport budget = validate_instance(GameInstance(2, 1, 3, 1, {{0, 0, 0.5, 0.5}}));
  CHECK_FALSE(budget.ok);
  CHECK(budget.violations[0].find("attacker budget") != std::string::npos);
}

TEST_CASE("payoff closed form") {
  const std::vector<double> one{1.0};

  SUBCASE("empty attack reaches nobody") {
    const GameInstance inst = single_edge(0.7, 0.3);
    CHECK(payoff(inst, one, PureStrategy({0}), PureStrategy()) == 0.0);
    CHECK(payoff(inst, one, PureStrategy(), PureStrategy()) == 0.0);
  }

  SUBCASE("certain attack through a useless cover") {
    const GameInstance inst = single_edge(1.0, 0.0);
    CHECK(payoff(inst, one, PureStrategy({0}), PureStrategy({0})) == 1.0);
  }

  SUBCASE("two overlapping channels with partial cover") {
    const GameInstance inst = three_eighths_instance();
    const double f = payoff(inst, one, PureStrategy({0}), PureStrategy({0, 1}));
    CHECK(f == doctest::Approx(0.375).epsilon(1e-15));
  }

  SUBCASE("a zero-weight voter contributes nothing") {
    const GameInstance inst = single_edge(1.0, 0.0);
    CHECK(payoff(inst, std::vector<double>{0.0}, PureStrategy(), PureStrategy({0})) == 0.0);
  }

  SUBCASE("absent edges act as p = q = 0") {
    // Attacking a channel with no edge to the voter leaves it unreached;
    // covering such a channel protects nothing.
    const GameInstance inst(2, 2, 2, 2, {{0, 0, 1.0, 0.0}, {1, 1, 1.0, 1.0}});
    CHECK(payoff(inst, testutil::ones(2), PureStrategy(), PureStrategy({0})) == 1.0);
    CHECK(payoff(inst, testutil::ones(2), PureStrategy({1}), PureStrategy({0})) == 1.0);
  }

  SUBCASE("out-of-range strategies are rejected") {
    const GameInstance inst = single_edge(0.5, 0.5);
    CHECK(error_code_of([&] {
            payoff(inst, one, PureStrategy(), PureStrategy({3}));
          }) == ErrorCode::invalid_strategy);
    CHECK(error_code_of([&] {
            payoff(inst, one, PureStrategy({3}), PureStrategy());
          }) == ErrorCode::invalid_strategy);
  }
}

TEST_CASE("expected payoff is linear in mixture weights") {
  const GeneratedInstance gen = testutil::random_instance(11, 5, 8, 2, 2);
  const GameInstance& inst = gen.instance;
  const std::vector<double> w =
      preference_weights(std::get<KnownPreferences>(gen.preferences));

  const PureStrategy a1({0, 1}), a2({2, 3}), a3({1, 4});
  const PureStrategy d({0, 2});

  SUBCASE("point mass") {
    const MixedStrategy point({a1}, {1.0});
    CHECK(expected_payoff(inst, w, d, point) == payoff(inst, w, d, a1));
  }

  SUBCASE("even two-way split") {
    const MixedStrategy half({a1, a2}, {0.5, 0.5});
    const double mean = 0.5 * (payoff(inst, w, d, a1) + payoff(inst, w, d, a2));
    CHECK(expected_payoff(inst, w, d, half) == doctest::Approx(mean).epsilon(1e-15));
  }

  SUBCASE("three-point support against term-by-term summation") {
    const MixedStrategy mix({a1, a2, a3}, {0.2, 0.5, 0.3});
    const double direct = 0.2 * payoff(inst, w, d, a1) + 0.5 * payoff(inst, w, d, a2) +
                          0.3 * payoff(inst, w, d, a3);
    CHECK(expected_payoff(inst, w, d, mix) == doctest::Approx(direct).epsilon(1e-14));
  }

  SUBCASE("mixture on both sides") {
    const MixedStrategy attack({a1, a2}, {0.25, 0.75});
    const MixedStrategy defense({d, PureStrategy({1, 4})}, {0.6, 0.4});
    double direct = 0.0;
    for (int i = 0; i < defense.size(); ++i) {
      for (int j = 0; j < attack.size(); ++j) {
        direct += defense.weights()[i] * attack.weights()[j] *
                  payoff(inst, w, defense.support()[i], attack.support()[j]);
      }
    }
    CHECK(expected_payoff(inst, w, defense, attack) == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("disjoint decomposition") {
  SUBCASE("hand-sized channel") {
    const GameInstance inst = single_edge(0.4, 0.5);
    const DisjointDecomposition dec = disjoint_decompose(inst, std::vector<double>{1.0});
    CHECK(dec.attack_value[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(dec.overlap_loss[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(payoff(inst, std::vector<double>{1.0}, PureStrategy({0}), PureStrategy({0})) ==
          doctest::Approx(0.2).epsilon(1e-15));
  }

  SUBCASE("zero-weight voters annihilate both coefficients") {
    const GameInstance inst = single_edge(0.9, 0.9);
    const DisjointDecomposition dec = disjoint_decompose(inst, std::vector<double>{0.0});
    CHECK(dec.attack_value[0] == 0.0);
    CHECK(dec.overlap_loss[0] == 0.0);
  }

  SUBCASE("matches the product formula for every strategy pair") {
    misdef::GeneratorConfig cfg;
    cfg.channels = 6;
    cfg.voters = 12;
    cfg.disjoint = true;
    cfg.p_max = 1.0;
    cfg.q_max = 1.0;
    cfg.attacker_budget = 2;
    cfg.defender_budget = 2;
    cfg.seed = 5;
    const GeneratedInstance gen = generate_instance(cfg);
    const std::vector<double> w =
        preference_weights(std::get<KnownPreferences>(gen.preferences));
    const DisjointDecomposition dec = disjoint_decompose(gen.instance, w);
    for (int u = 0; u < 6; ++u) {
      CHECK(dec.attack_value[u] >= dec.overlap_loss[u]);
      CHECK(dec.overlap_loss[u] >= 0.0);
    }

    // Exhaustive over all size-<=2 defense and attack sets.
    std::vector<PureStrategy> sets{PureStrategy()};
    for (int u = 0; u < 6; ++u) {
      sets.push_back(PureStrategy({u}));
      for (int v = u + 1; v < 6; ++v) sets.push_back(PureStrategy({u, v}));
    }
    for (const PureStrategy& sd : sets) {
      for (const PureStrategy& sa : sets) {
        double linear = 0.0;
        for (int u : sa) {
          linear += dec.attack_value[u];
          if (sd.contains(u)) linear -= dec.overlap_loss[u];
        }
        CHECK(payoff(gen.instance, w, sd, sa) == doctest::Approx(linear).epsilon(1e-12));
      }
    }
  }

  SUBCASE("rejects voters with several channels") {
    const GameInstance inst(2, 1, 1, 1, {{0, 0, 0.5, 0.5}, {1, 0, 0.5, 0.5}});
    CHECK(error_code_of([&] {
            disjoint_decompose(inst, std::vector<double>{1.0});
          }) == ErrorCode::structure);
  }
}

TEST_CASE("singleton reward vectors match their definitions") {
  const GeneratedInstance gen = testutil::random_instance(23, 6, 9, 2, 2);
  const GameInstance& inst = gen.instance;
  const std::vector<double> w =
      preference_weights(std::get<KnownPreferences>(gen.preferences));
  Rng rng(99);
  const PureStrategy defense = testutil::random_set(rng, 6, 2);
  const PureStrategy attack = testutil::random_set(rng, 6, 2);

  const std::vector<double> attack_vals = singleton_attack_values(inst, w, defense);
  const std::vector<double> defense_vals = singleton_defense_values(inst, w, attack);
  const double unprotected = payoff(inst, w, PureStrategy(), attack);
  for (int u = 0; u < 6; ++u) {
    CHECK(attack_vals[u] ==
          doctest::Approx(payoff(inst, w, defense, PureStrategy({u}))).epsilon(1e-14));
    CHECK(defense_vals[u] ==
          doctest::Approx(unprotected - payoff(inst, w, PureStrategy({u}), attack))
              .epsilon(1e-13));
  }
}

TEST_CASE("multilinear extension") {
  SUBCASE("zero mass means zero value") {
    const GameInstance inst = three_eighths_instance();
    const MarginalVector x{{0.0, 0.0}, 2.0};
    CHECK(multilinear_extension(inst, testutil::ones(1), x, PureStrategy()) == 0.0);
  }

  SUBCASE("half mass on a certain channel") {
    const GameInstance inst = single_edge(1.0, 0.0);
    const MarginalVector x{{0.5}, 1.0};
    CHECK(multilinear_extension(inst, testutil::ones(1), x, PureStrategy()) ==
          doctest::Approx(0.5).epsilon(1e-15));
  }

  SUBCASE("agrees with the set payoff at every vertex") {
    const GeneratedInstance gen = testutil::random_instance(31, 6, 10, 2, 2);
    const GameInstance& inst = gen.instance;
    const std::vector<double> w =
        preference_weights(std::get<KnownPreferences>(gen.preferences));
    Rng rng(7);
    const PureStrategy defense = testutil::random_set(rng, 6, 2);
    for (int u = 0; u < 6; ++u) {
      for (int v = u; v < 6; ++v) {
        const PureStrategy attack = u == v ? PureStrategy({u}) : PureStrategy({u, v});
        std::vector<double> x(6, 0.0);
        for (int c : attack) x[c] = 1.0;
        const double extension =
            multilinear_extension(inst, w, MarginalVector{x, 2.0}, defense);
        CHECK(std::fabs(extension - payoff(inst, w, defense, attack)) <= 1e-12);
      }
    }
  }

  SUBCASE("rejects infeasible marginals") {
    const GameInstance inst = three_eighths_instance();
    CHECK(error_code_of([&] {
            multilinear_extension(inst, testutil::ones(1), MarginalVector{{0.9, 0.9}, 1.0},
                                  PureStrategy());
          }) == ErrorCode::domain);
    CHECK(error_code_of([&] {
            multilinear_extension(inst, testutil::ones(1), MarginalVector{{1.2, 0.0}, 2.0},
                                  PureStrategy());
          }) == ErrorCode::domain);
  }
}

TEST_CASE("multilinear gradient") {
  SUBCASE("a saturated voter contributes no marginal value elsewhere") {
    const GameInstance inst(2, 1, 2, 1, {{0, 0, 1.0, 0.0}, {1, 0, 0.7, 0.0}});
    const MarginalVector x{{1.0, 0.3}, 2.0};
    const std::vector<double> grad =
        multilinear_gradient(inst, testutil::ones(1), x, PureStrategy());
    CHECK(grad[1] == 0.0);
    CHECK(grad[0] == doctest::Approx(1.0 - 0.3 * 0.7).epsilon(1e-15));
  }

  SUBCASE("gradients are nonnegative") {
    const GeneratedInstance gen = testutil::random_instance(41, 8, 12, 3, 3);
    Rng rng(12);
    const std::vector<double> w =
        preference_weights(std::get<KnownPreferences>(gen.preferences));
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> x(8);
      for (double& xi : x) xi = rng.uniform01() * 0.3;
      const std::vector<double> grad = multilinear_gradient(
          gen.instance, w, MarginalVector{x, 8.0}, testutil::random_set(rng, 8, 3));
      for (double g : grad) CHECK(g >= 0.0);
    }
  }

  SUBCASE("matches central finite differences") {
    const GeneratedInstance gen = testutil::random_instance(43, 6, 9, 2, 2);
    const std::vector<double> w =
        preference_weights(std::get<KnownPreferences>(gen.preferences));
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> x(6);
      for (double& xi : x) xi = 0.1 + 0.6 * rng.uniform01();
      const PureStrategy defense = testutil::random_set(rng, 6, 2);
      const std::vector<double> grad =
          multilinear_gradient(gen.instance, w, MarginalVector{x, 6.0}, defense);
      const double h = 1e-6;
      for (int u = 0; u < 6; ++u) {
        std::vector<double> up = x, down = x;
        up[u] += h;
        down[u] -= h;
        const double fd = (multilinear_extension(gen.instance, w, MarginalVector{up, 6.0},
                                                 defense) -
                           multilinear_extension(gen.instance, w, MarginalVector{down, 6.0},
                                                 defense)) /
                          (2.0 * h);
        CHECK(std::fabs(grad[u] - fd) <= 1e-5 * std::max(1.0, std::fabs(grad[u])));
      }
    }
  }
}

TEST_CASE("blocked influence") {
  const GeneratedInstance gen = testutil::random_instance(53, 5, 8, 2, 2);
  const GameInstance& inst = gen.instance;
  const std::vector<double> w =
      preference_weights(std::get<KnownPreferences>(gen.preferences));
  Rng rng(3);
  const MixedStrategy attack = testutil::random_mixture(rng, 5, 2, 3);

  SUBCASE("empty defense blocks nothing") {
    CHECK(blocked_influence(inst, w, PureStrategy(), attack) == 0.0);
  }

  SUBCASE("zero immunization probabilities block nothing") {
    const GameInstance inert(3, 3, 2, 2,
                             {{0, 0, 0.8, 0.0}, {1, 1, 0.8, 0.0}, {2, 2, 0.8, 0.0}});
    CHECK(blocked_influence(inert, testutil::ones(3), PureStrategy({0, 1}),
                            MixedStrategy({PureStrategy({0})}, {1.0})) == 0.0);
  }

  SUBCASE("point-mass attacker reduces to two payoff calls") {
    const PureStrategy sa({1, 3});
    const MixedStrategy point({sa}, {1.0});
    const PureStrategy sd({0, 2});
    const double direct = payoff(inst, w, PureStrategy(), sa) - payoff(inst, w, sd, sa);
    CHECK(blocked_influence(inst, w, sd, point) == doctest::Approx(direct).epsilon(1e-13));
  }

  SUBCASE("marginal attacker reduces to two extension calls") {
    const MarginalVector x{{0.4, 0.1, 0.0, 0.3, 0.2}, 2.0};
    const PureStrategy sd({1, 4});
    const double direct = multilinear_extension(inst, w, x, PureStrategy()) -
                          multilinear_extension(inst, w, x, sd);
    CHECK(blocked_influence(inst, w, sd, x) == doctest::Approx(direct).epsilon(1e-13));
  }

  SUBCASE("monotone nondecreasing as the defense grows") {
    double previous = 0.0;
    std::vector<int> chosen;
    for (int u = 0; u < 5; ++u) {
      chosen.push_back(u);
      const double g = blocked_influence(inst, w, PureStrategy(chosen), attack);
      CHECK(g >= previous - 1e-12);
      previous = g;
    }
  }
}

TEST_CASE("marginal substitution reproduces the averaged game") {
  SUBCASE("degenerate marginals equal known leanings") {
    const GeneratedInstance gen = testutil::random_instance(61, 4, 6, 2, 2);
    const auto& known = std::get<KnownPreferences>(gen.preferences);
    const std::vector<double> w_known = preference_weights(known);
    MarginalPreferences marg;
    for (std::uint8_t bit : known.theta) marg.probs.push_back(bit ? 1.0 : 0.0);
    const std::vector<double> w_marg = substitute_marginals(marg);
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const PureStrategy sd = testutil::random_set(rng, 4, 2);
      const PureStrategy sa = testutil::random_set(rng, 4, 2);
      CHECK(payoff(gen.instance, w_known, sd, sa) == payoff(gen.instance, w_marg, sd, sa));
    }
  }

  SUBCASE("all-zero marginals silence every payoff") {
    const GameInstance inst = three_eighths_instance();
    const std::vector<double> w = substitute_marginals(MarginalPreferences{{0.0}});
    CHECK(payoff(inst, w, PureStrategy(), PureStrategy({0, 1})) == 0.0);
  }

  SUBCASE("half marginals equal the average over leaning vectors") {
    const GameInstance inst(2, 2, 2, 1, {{0, 0, 0.6, 0.4}, {1, 0, 0.3, 0.2}, {1, 1, 0.8, 0.5}});
    const std::vector<double> w = substitute_marginals(MarginalPreferences{{0.5, 0.5}});
    const PureStrategy sd({1});
    const PureStrategy sa({0, 1});
    double averaged = 0.0;
    for (int bits = 0; bits < 4; ++bits) {
      const std::vector<double> theta{static_cast<double>(bits & 1),
                                      static_cast<double>((bits >> 1) & 1)};
      averaged += 0.25 * payoff(inst, theta, sd, sa);
    }
    CHECK(payoff(inst, w, sd, sa) == doctest::Approx(averaged).epsilon(1e-14));
  }

  SUBCASE("marginals outside [0, 1] are rejected") {
    CHECK(error_code_of([] {
            substitute_marginals(MarginalPreferences{{0.5, 1.5}});
          }) == ErrorCode::domain);
  }
}

TEST_CASE("robust-preference extension") {
  const GameInstance inst(2, 2, 1, 1, {{0, 0, 0.8, 0.5}, {1, 1, 0.6, 0.3}});

  SUBCASE("shape and budgets") {
    const std::vector<std::uint8_t> nominal{1, 0};
    const AdversarialExtension ext = adversarial_extend(inst, nominal, 1);
    CHECK(ext.instance.num_channels() == 4);
    CHECK(ext.instance.num_voters() == 2);
    CHECK(ext.real_channels == 2);
    CHECK(ext.flip_budget == 1);
    CHECK(ext.weights == testutil::ones(2));
    // Doubted voters keep their real edges reachable only through a flip.
    bool found_pseudo = false;
    for (const Edge& e : ext.instance.edges()) {
      if (e.channel >= 2) {
        CHECK(e.p == 1.0);
        CHECK(e.q == 0.0);
        CHECK(e.channel - 2 == e.voter);
        found_pseudo = true;
      }
    }
    CHECK(found_pseudo);
  }

  SUBCASE("zero flip budget reproduces the known game exactly") {
    const std::vector<std::uint8_t> nominal{1, 0};
    const AdversarialExtension ext = adversarial_extend(inst, nominal, 0);
    const std::vector<double> w_known = testutil::weights_of(nominal);
    std::vector<PureStrategy> sets{PureStrategy(), PureStrategy({0}), PureStrategy({1}),
                                   PureStrategy({0, 1})};
    for (const PureStrategy& sd : sets) {
      for (const PureStrategy& sa : sets) {
        CHECK(payoff(ext.instance, ext.weights, sd, sa) == payoff(inst, w_known, sd, sa));
      }
    }
  }

  SUBCASE("flipping a doubted voter yields its full weight") {
    const GameInstance lone = single_edge(0.5, 0.5);
    const AdversarialExtension ext =
        adversarial_extend(lone, std::vector<std::uint8_t>{0}, 1);
    CHECK(payoff(ext.instance, ext.weights, PureStrategy(), PureStrategy({1})) == 1.0);
  }

  SUBCASE("real cover still protects against a direct flip") {
    const GameInstance lone = single_edge(0.5, 0.5);
    const AdversarialExtension ext =
        adversarial_extend(lone, std::vector<std::uint8_t>{1}, 1);
    CHECK(payoff(ext.instance, ext.weights, PureStrategy({0}), PureStrategy({1})) ==
          doctest::Approx(0.5).epsilon(1e-15));
  }

  SUBCASE("radius bounds are enforced") {
    CHECK(error_code_of([&] {
            adversarial_extend(inst, std::vector<std::uint8_t>{1, 0}, 3);
          }) == ErrorCode::config);
    CHECK(error_code_of([&] {
            adversarial_extend(inst, std::vector<std::uint8_t>{1}, 0);
          }) == ErrorCode::invalid_argument);
  }
}

TEST_CASE("payoff bounds and set monotonicity") {
  const GeneratedInstance gen = testutil::random_instance(71, 5, 7, 5, 5);
  const GameInstance& inst = gen.instance;
  const std::vector<double> w =
      preference_weights(std::get<KnownPreferences>(gen.preferences));
  const double total_weight = std::accumulate(w.begin(), w.end(), 0.0);

  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const PureStrategy sd = testutil::random_set(rng, 5, 2);
    const PureStrategy sa = testutil::random_set(rng, 5, 2);
    const double f = payoff(inst, w, sd, sa);
    CHECK(f >= 0.0);
    CHECK(f <= total_weight + 1e-12);

    // Growing the attack cannot lower the value; growing the defense cannot
    // raise it.
    for (int u = 0; u < 5; ++u) {
      std::vector<int> grown(sa.channels());
      grown.push_back(u);
      CHECK(payoff(inst, w, sd, PureStrategy(grown)) >= f - 1e-12);
      std::vector<int> covered(sd.channels());
      covered.push_back(u);
      CHECK(payoff(inst, w, PureStrategy(covered), sa) <= f + 1e-12);
    }
  }
}

TEST_CASE("simulation agrees with the closed form") {
  SUBCASE("deterministic process") {
    const GameInstance inst = single_edge(1.0, 0.0);
    const MonteCarloResult res = monte_carlo_payoff(inst, testutil::ones(1), PureStrategy(),
                                                    PureStrategy({0}), 1000, 4);
    CHECK(res.mean == 1.0);
    CHECK(res.standard_error == 0.0);
    CHECK(res.trials == 1000);
  }

  SUBCASE("empty attack") {
    const GameInstance inst = single_edge(0.7, 0.2);
    const MonteCarloResult res = monte_carlo_payoff(inst, testutil::ones(1), PureStrategy({0}),
                                                    PureStrategy(), 1000, 4);
    CHECK(res.mean == 0.0);
  }

  SUBCASE("partial-cover instance at a million trials") {
    const GameInstance inst = three_eighths_instance();
    const MonteCarloResult res = monte_carlo_payoff(inst, testutil::ones(1), PureStrategy({0}),
                                                    PureStrategy({0, 1}), 1'000'000, 9);
    CHECK(std::fabs(res.mean - 0.375) <= 3.0 * res.standard_error);
  }

  SUBCASE("identical seeds reproduce the estimate") {
    const GameInstance inst = three_eighths_instance();
    const MonteCarloResult a = monte_carlo_payoff(inst, testutil::ones(1), PureStrategy({0}),
                                                  PureStrategy({0, 1}), 5000, 11);
    const MonteCarloResult b = monte_carlo_payoff(inst, testutil::ones(1), PureStrategy({0}),
                                                  PureStrategy({0, 1}), 5000, 11);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);
  }
}

TEST_CASE("strategy containers enforce their invariants") {
  SUBCASE("pure strategies are sorted and duplicate-free") {
    const PureStrategy s({3, 1, 3, 2});
    CHECK(s.channels() == std::vector<int>{1, 2, 3});
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(0));
    CHECK(error_code_of([] { PureStrategy({-1, 2}); }) == ErrorCode::invalid_strategy);
    CHECK(PureStrategy::first_k(3).channels() == std::vector<int>{0, 1, 2});
  }

  SUBCASE("mixture weights must be a distribution") {
    CHECK(error_code_of([] {
            MixedStrategy({PureStrategy({0})}, {0.5});
          }) == ErrorCode::invalid_strategy);
    CHECK(error_code_of([] {
            MixedStrategy({PureStrategy({0}), PureStrategy({1})}, {1.5, -0.5});
          }) == ErrorCode::invalid_strategy);
    CHECK(error_code_of([] { MixedStrategy({}, {}); }) == ErrorCode::invalid_strategy);
  }

  SUBCASE("uniform mixtures merge duplicate sets") {
    const std::vector<PureStrategy> history{PureStrategy({0}), PureStrategy({1}),
                                            PureStrategy({0})};
    const MixedStrategy mix = MixedStrategy::uniform(history);
    REQUIRE(mix.size() == 2);
    CHECK(mix.support()[0] == PureStrategy({0}));
    CHECK(mix.weights()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(mix.weights()[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("seed derivation separates named streams") {
  const std::uint64_t a = derive_seed(42, "alpha");
  const std::uint64_t b = derive_seed(42, "beta");
  const std::uint64_t a2 = derive_seed(42, "alpha");
  CHECK(a == a2);
  CHECK(a != b);
  CHECK(derive_seed(42, "alpha", 1) != a);
  CHECK(derive_seed(43, "alpha") != a);

  Rng rng(1);
  int heads = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    if (u < 0.5) ++heads;
  }
  CHECK(heads > 4500);
  CHECK(heads < 5500);

  Rng degenerate(2);
  CHECK_FALSE(degenerate.bernoulli(0.0));
  CHECK(degenerate.bernoulli(1.0));
}
