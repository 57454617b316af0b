#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "misdef/error.hpp"
#include "misdef/projections.hpp"
#include "misdef/rng.hpp"
#include "test_helpers.hpp"

using namespace misdef;
using testutil::error_code_of;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("top_k selects the largest scores") {
  const std::vector<double> scores{3.0, 1.0, 2.0};
  CHECK(top_k(scores, 2).channels() == std::vector<int>{0, 2});
  CHECK(top_k(scores, 0).channels().empty());
  CHECK(top_k(scores, 3).channels() == std::vector<int>{0, 1, 2});
  CHECK(top_k(scores, 17).channels() == std::vector<int>{0, 1, 2});

  SUBCASE("ties break toward the lower index") {
    const std::vector<double> tied{5.0, 5.0, 5.0};
    CHECK(top_k(tied, 2).channels() == std::vector<int>{0, 1});
  }

  SUBCASE("negative k is rejected") {
    CHECK(error_code_of([&] { top_k(scores, -1); }) == ErrorCode::invalid_argument);
  }

  SUBCASE("matches a full-sort oracle on random inputs") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 1 + static_cast<int>(rng.uniform01() * 12);
      std::vector<double> s(d);
      for (double& v : s) v = rng.uniform01();
      const int k = static_cast<int>(rng.uniform01() * (d + 1));

      std::vector<int> order(d);
      for (int i = 0; i < d; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return s[a] > s[b]; });
      std::vector<int> expected(order.begin(), order.begin() + k);
      std::sort(expected.begin(), expected.end());

      CHECK(top_k(s, k).channels() == expected);
    }
  }
}

TEST_CASE("Euclidean projection onto the capped simplex") {
  SUBCASE("subtracts a common threshold when over budget") {
    const std::vector<double> y{0.5, 0.9};
    const std::vector<double> x = project_euclidean(y, {2, 1.0});
    CHECK(x[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(0.7).epsilon(1e-15));
  }

  SUBCASE("caps symmetric overflow at the budget split") {
    const std::vector<double> x = project_euclidean(std::vector<double>{2.0, 2.0}, {2, 1.0});
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-15));
  }

  SUBCASE("feasible points are fixed points") {
    const std::vector<double> y{0.25, 0.0, 0.5};
    CHECK(project_euclidean(y, {3, 2.0}) == y);
  }

  SUBCASE("projection is idempotent") {
    Rng rng(202);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 1 + static_cast<int>(rng.uniform01() * 8);
      const double budget = 0.5 + rng.uniform01() * (d - 0.5);
      std::vector<double> y(d);
      for (double& v : y) v = -1.0 + 4.0 * rng.uniform01();
      const std::vector<double> once = project_euclidean(y, {d, budget});
      const std::vector<double> twice = project_euclidean(once, {d, budget});
      CHECK(max_abs_diff(once, twice) <= 1e-12);
    }
  }

  SUBCASE("matches an alternating-projection oracle") {
    Rng rng(303);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 1 + static_cast<int>(rng.uniform01() * 6);
      const double budget =
          std::max(0.25, rng.uniform01() * d);
      std::vector<double> y(d);
      for (double& v : y) v = -1.5 + 5.0 * rng.uniform01();

      const std::vector<double> fast = project_euclidean(y, {d, budget});
      CHECK(testutil::box_budget_violation(fast, budget) <= 1e-9);

      const std::vector<double> slow = testutil::dykstra_projection(y, budget);
      CHECK(max_abs_diff(fast, slow) <= 1e-6);
    }
  }

  SUBCASE("malformed inputs are rejected") {
    CHECK(error_code_of([] {
            project_euclidean(std::vector<double>{0.5}, {2, 1.0});
          }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([] {
            project_euclidean(std::vector<double>{0.5}, {1, -1.0});
          }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([] {
            project_euclidean(std::vector<double>{std::numeric_limits<double>::quiet_NaN()},
                              {1, 1.0});
          }) == ErrorCode::invalid_argument);
  }
}

TEST_CASE("entropic projection onto the capped simplex") {
  SUBCASE("feasible points are fixed points in both modes") {
    const std::vector<double> y{0.3, 0.2};
    CHECK(project_entropic(y, {2, 1.0}, EntropicMode::exact) == y);
    CHECK(project_entropic(y, {2, 1.0}, EntropicMode::closed_form) == y);
  }

  SUBCASE("symmetric overflow scales down to the budget") {
    for (EntropicMode mode : {EntropicMode::exact, EntropicMode::closed_form}) {
      const std::vector<double> x =
          project_entropic(std::vector<double>{2.0, 2.0}, {2, 1.0}, mode);
      CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  SUBCASE("the two modes differ when clipping bites before scaling") {
    const std::vector<double> y{4.0, 0.5};
    const std::vector<double> exact = project_entropic(y, {2, 1.0}, EntropicMode::exact);
    CHECK(exact[0] == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(exact[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

    const std::vector<double> quick = project_entropic(y, {2, 1.0}, EntropicMode::closed_form);
    CHECK(quick[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(quick[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("zero coordinates stay zero") {
    const std::vector<double> x =
        project_entropic(std::vector<double>{0.0, 3.0, 1.0}, {3, 1.0}, EntropicMode::exact);
    CHECK(x[0] == 0.0);
  }

  SUBCASE("exact mode minimizes generalized KL over random feasible points") {
    Rng rng(404);
    int compared = 0;
    while (compared < 1000) {
      const int d = 2 + static_cast<int>(rng.uniform01() * 5);
      const double budget = 0.5 + rng.uniform01() * (d - 0.5);
      std::vector<double> y(d);
      for (double& v : y) v = 0.05 + 4.0 * rng.uniform01();

      const std::vector<double> x = project_entropic(y, {d, budget}, EntropicMode::exact);
      CHECK(testutil::box_budget_violation(x, budget) <= 1e-9);
      const double at_projection = testutil::generalized_kl(x, y);

      for (int probe = 0; probe < 25; ++probe, ++compared) {
        const std::vector<double> z = testutil::random_feasible_point(rng, d, budget);
        CHECK(testutil::generalized_kl(z, y) >= at_projection - 1e-9);
      }
    }
  }

  SUBCASE("closed form stays feasible even where it is inexact") {
    Rng rng(505);
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 1 + static_cast<int>(rng.uniform01() * 6);
      const double budget = 0.5 + rng.uniform01() * (d - 0.5);
      std::vector<double> y(d);
      for (double& v : y) v = 5.0 * rng.uniform01();
      const std::vector<double> x = project_entropic(y, {d, budget}, EntropicMode::closed_form);
      CHECK(testutil::box_budget_violation(x, budget) <= 1e-9);
    }
  }

  SUBCASE("negative inputs are outside the domain") {
    CHECK(error_code_of([] {
            project_entropic(std::vector<double>{-0.1, 0.5}, {2, 1.0}, EntropicMode::exact);
          }) == ErrorCode::domain);
  }
}

TEST_CASE("partitioned projection treats blocks independently") {
  const std::vector<double> y{2.0, 2.0, 2.0, 2.0};
  const std::vector<int> first{0, 1};
  const std::vector<int> second{2, 3};

  SUBCASE("symmetric blocks with unit budgets") {
    for (Geometry geometry : {Geometry::euclidean, Geometry::entropic_closed_form,
                              Geometry::entropic_exact}) {
      const std::vector<double> x = project_partition(y, first, 1.0, second, 1.0, geometry);
      for (double xi : x) CHECK(xi == doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  SUBCASE("equals per-block projections stitched together") {
    Rng rng(606);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> point(5);
      for (double& v : point) v = -0.5 + 3.0 * rng.uniform01();
      // Entropic geometries need nonnegative inputs.
      std::vector<double> nonneg(point);
      for (double& v : nonneg) v = std::fabs(v);

      const std::vector<int> a{0, 2, 4};
      const std::vector<int> b{1, 3};
      const double budget_a = 1.5;
      const double budget_b = 1.0;

      const std::vector<double> joint =
          project_partition(nonneg, a, budget_a, b, budget_b, Geometry::entropic_exact);
      const std::vector<double> ya{nonneg[0], nonneg[2], nonneg[4]};
      const std::vector<double> yb{nonneg[1], nonneg[3]};
      const std::vector<double> xa = project_entropic(ya, {3, budget_a}, EntropicMode::exact);
      const std::vector<double> xb = project_entropic(yb, {2, budget_b}, EntropicMode::exact);
      CHECK(joint[0] == xa[0]);
      CHECK(joint[2] == xa[1]);
      CHECK(joint[4] == xa[2]);
      CHECK(joint[1] == xb[0]);
      CHECK(joint[3] == xb[1]);

      const std::vector<double> joint_euclid =
          project_partition(point, a, budget_a, b, budget_b, Geometry::euclidean);
      const std::vector<double> pa{point[0], point[2], point[4]};
      const std::vector<double> pb{point[1], point[3]};
      const std::vector<double> ea = project_euclidean(pa, {3, budget_a});
      const std::vector<double> eb = project_euclidean(pb, {2, budget_b});
      CHECK(joint_euclid[0] == ea[0]);
      CHECK(joint_euclid[1] == eb[0]);
    }
  }

  SUBCASE("an empty second block is allowed") {
    const std::vector<int> all{0, 1, 2, 3};
    const std::vector<int> none{};
    const std::vector<double> x = project_partition(y, all, 1.0, none, 0.0, Geometry::euclidean);
    const std::vector<double> direct = project_euclidean(y, {4, 1.0});
    CHECK(x == direct);
  }

  SUBCASE("a zero-budget block collapses to zero") {
    const std::vector<double> x = project_partition(y, first, 0.0, second, 1.0,
                                                    Geometry::euclidean);
    CHECK(x[0] == 0.0);
    CHECK(x[1] == 0.0);
    CHECK(x[2] == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("index sets must partition the range") {
    const std::vector<int> overlap{0, 1, 2};
    CHECK(error_code_of([&] {
            project_partition(y, overlap, 1.0, second, 1.0, Geometry::euclidean);
          }) == ErrorCode::domain);
    const std::vector<int> incomplete{0};
    CHECK(error_code_of([&] {
            project_partition(y, incomplete, 1.0, second, 1.0, Geometry::euclidean);
          }) == ErrorCode::domain);
  }
}
