#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "updrift/bounds.hpp"

using namespace updrift;

namespace {

LevelModel small_delta_model() {
  LevelModel model;
  model.m = 2;
  model.z = {0.01};
  model.delta = 0.5;
  model.gamma0 = 0.5;
  model.lambda = 1000;
  return model;
}

}  // namespace

TEST_CASE("thm1 bound, delta <= 1") {
  BoundReport rep = thm1_bound(1.0, 100, 0.5, 400);
  CHECK(rep.bound == doctest::Approx(22960.484670337085).epsilon(1e-12));
  CHECK(rep.valid);
  CHECK(rep.unit == BoundUnit::Iterations);
  CHECK(rep.aux("d0") == 100.0);
  CHECK(rep.aux("climb_success_floor") == 0.2782);
  // n = 100 = 100/delta does not satisfy n > 100/delta strictly.
  CHECK_FALSE(rep.has_aux("return_prob_bound"));

  BoundReport wide = thm1_bound(0.5, 300, 0.5, 2000);
  CHECK(wide.aux("return_prob_bound") == 0.7218);
}

TEST_CASE("thm1 bound, delta > 1") {
  BoundReport rep = thm1_bound(2.0, 9, 0.5, 100);
  CHECK(rep.bound == doctest::Approx(86.2).epsilon(1e-12));
  CHECK(rep.valid);
  CHECK(rep.aux("return_prob_bound") ==
        doctest::Approx(0.2140972656978841).epsilon(1e-12));
}

TEST_CASE("thm1 degenerate target and precondition flags") {
  BoundReport rep = thm1_bound(1.0, 1, 0.5, 100);
  CHECK(rep.has_aux("degenerate_target"));
  CHECK(rep.valid);

  BoundReport bad = thm1_bound(1.0, 100, 0.5, 100);
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.violated_preconditions.size() == 2);
  CHECK(bad.bound > 0.0);  // still computed
}

TEST_CASE("nodrift bound") {
  CHECK(nodrift_bound(10.0, 0.5).bound ==
        doctest::Approx(359.48787282647892).epsilon(1e-12));
  CHECK(nodrift_bound(2.0, 0.0).bound ==
        doctest::Approx(16.635532333438687).epsilon(1e-12));
  BoundReport degenerate = nodrift_bound(1.0, 0.5);
  CHECK(degenerate.bound == 0.0);
  CHECK(degenerate.has_aux("degenerate_d0"));
  BoundReport flagged = nodrift_bound(10.0, 0.001, 100);
  CHECK_FALSE(flagged.valid);
}

TEST_CASE("thm2 bound") {
  BoundReport rep = thm2_bound(1.0, 100, 0.5, 400, 1.0);
  CHECK(rep.bound == doctest::Approx(24398.299192263757).epsilon(1e-12));
  CHECK(rep.theorem == TheoremId::UpDrift2);

  BoundReport large = thm2_bound(2.0, 9, 0.5, 100, 1.0);
  CHECK(large.bound == doctest::Approx(250.3025641025641).epsilon(1e-12));

  CHECK_THROWS_AS(thm2_bound(1.0, 100, 0.5, 400, 0.0), std::domain_error);
  CHECK_THROWS_AS(thm2_bound(1.0, 100, 0.5, 400, -2.0), std::domain_error);

  // The zero-state cost vanishes as E0 grows.
  BoundReport limit = thm2_bound(1.0, 100, 0.5, 400, 1e15);
  CHECK(limit.bound ==
        doctest::Approx(thm1_bound(1.0, 100, 0.5, 400).bound).epsilon(1e-12));
}

TEST_CASE("thm3 bound") {
  BoundReport rep = thm3_bound(1.0, 1024, 4096, 128, 0.25);
  CHECK(rep.bound == doctest::Approx(46.8).epsilon(1e-12));
  CHECK(rep.valid);

  // xmin at or above the target zeroes the climb term.
  BoundReport high = thm3_bound(1.0, 100, 4096, 100, 0.5);
  CHECK(high.bound == doctest::Approx(3.6 / 0.5).epsilon(1e-12));

  BoundReport large = thm3_bound(3.0, 1024, 4096, 64, 0.5);
  CHECK(large.bound == doctest::Approx(7.8).epsilon(1e-12));

  BoundReport low_xmin = thm3_bound(1.0, 1024, 4096, 50, 0.25);
  CHECK_FALSE(low_xmin.valid);
  CHECK(low_xmin.violated_preconditions[0] == "xmin < D0");

  CHECK_THROWS_AS(thm3_bound(1.0, 1024, 4096, 128, 0.0), std::domain_error);
}

TEST_CASE("level-based bound, delta <= 1") {
  BoundReport rep = level_new_bound(small_delta_model());
  CHECK(rep.unit == BoundUnit::Evaluations);
  CHECK(rep.aux("d0") == 200.0);
  CHECK(rep.aux("t0") == doctest::Approx(437815.79827082756).epsilon(1e-12));
  CHECK(rep.aux("lambda_min") == doctest::Approx(20373.281362610964).epsilon(1e-12));
  CHECK(rep.bound == doctest::Approx(3502526386.1666205).epsilon(1e-12));
  CHECK_FALSE(rep.valid);  // lambda = 1000 is far below lambda_min
  CHECK(rep.aux("c1") == 80000.0);

  // Clamped logarithm: D0 = gamma0*lambda = 1 and large z push the log term to 0.
  LevelModel clamp;
  clamp.m = 2;
  clamp.z = {0.5};
  clamp.delta = 1.0;
  clamp.gamma0 = 0.1;
  clamp.lambda = 10;
  BoundReport crep = level_new_bound(clamp);
  CHECK(crep.aux("t0") == doctest::Approx(1e4 * 2.2).epsilon(1e-12));

  // gamma0 = 1/(1+delta) is admitted (closed interval).
  LevelModel boundary;
  boundary.m = 2;
  boundary.z = {0.5};
  boundary.delta = 1.0;
  boundary.gamma0 = 0.5;
  boundary.lambda = 2;
  BoundReport brep = level_new_bound(boundary);
  for (const auto& violation : brep.violated_preconditions)
    CHECK(violation != "gamma0 > 1/(1+delta)");
}

TEST_CASE("level-based bound, delta > 1") {
  LevelModel model;
  model.m = 2;
  model.z = {0.1};
  model.delta = 3.0;
  model.gamma0 = 0.25;
  model.lambda = 128;
  BoundReport rep = level_large_delta_bound(model);
  CHECK(rep.valid);
  CHECK(rep.aux("d0") == 32.0);
  CHECK(rep.aux("t0") == doctest::Approx(261.69707012467869).epsilon(1e-12));
  CHECK(rep.aux("lambda_min") == doctest::Approx(124.23059506016133).epsilon(1e-12));
  CHECK(rep.bound == doctest::Approx(301475.02478362985).epsilon(1e-12));

  // Huge z_1 lambda / D0 clamps the middle term.
  LevelModel clamp;
  clamp.m = 2;
  clamp.z = {1.0};
  clamp.delta = 3.0;
  clamp.gamma0 = 32.0 / 4096.0;
  clamp.lambda = 4096;
  BoundReport crep = level_large_delta_bound(clamp);
  CHECK(crep.aux("t0") == doctest::Approx(203.2 + 657.0 / 4096.0).epsilon(1e-12));

  // Single level: nothing to climb.
  LevelModel single;
  single.m = 1;
  single.delta = 3.0;
  single.gamma0 = 0.25;
  single.lambda = 128;
  CHECK(level_large_delta_bound(single).aux("t0") == doctest::Approx(101.6).epsilon(1e-12));

  LevelModel small = model;
  small.lambda = 64;
  small.gamma0 = 0.25;  // gamma0*lambda = 16 < 32
  CHECK_FALSE(level_large_delta_bound(small).valid);
}

TEST_CASE("old level-based bound for comparison") {
  BoundReport rep = level_old_bound(small_delta_model());
  CHECK(rep.aux("lambda_min") == doctest::Approx(369.17254373080142).epsilon(1e-12));
  CHECK(rep.bound == doctest::Approx(189092.57569004888).epsilon(1e-12));
  CHECK(rep.valid);  // lambda = 1000 >= 369.2

  // Ratio of the two calculators stays finite and positive.
  BoundReport neu = level_new_bound(small_delta_model());
  CHECK(neu.bound / rep.bound > 0.0);
  CHECK(std::isfinite(neu.bound / rep.bound));
}

TEST_CASE("additive drift with overshooting") {
  CHECK(additive_overshoot_bound(0.0, 10.0, 1.0) == 10.0);
  CHECK(additive_overshoot_bound(5.0, 5.0, 2.0) == 0.0);
  CHECK_THROWS_AS(additive_overshoot_bound(6.0, 5.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(additive_overshoot_bound(0.0, 5.0, 0.0), std::domain_error);

  // Instantiated with the fluctuation-phase constants it reproduces the
  // no-drift bound.
  double d0 = 10.0;
  double gamma0 = 0.5;
  double reproduced =
      additive_overshoot_bound(0.0, 2.0 * d0 * std::log(2.0 * d0), (1.0 - gamma0) / 3.0);
  CHECK(reproduced == doctest::Approx(nodrift_bound(d0, gamma0).bound).epsilon(1e-12));
}

TEST_CASE("thm1 monotonicity over a grid") {
  const std::int64_t k = 1000000;
  for (int i = 0; i < 20; ++i) {
    double delta_lo = 0.05 + 0.05 * i;
    for (int j = 0; j + 1 < 20; ++j) {
      std::int64_t n_lo = 10 + 50 * j;
      std::int64_t n_hi = 10 + 50 * (j + 1);
      // Nondecreasing in n.
      CHECK(thm1_bound(delta_lo, n_lo, 0.5, k).bound <=
            thm1_bound(delta_lo, n_hi, 0.5, k).bound + 1e-9);
      // Nonincreasing in delta (delta <= 1 branch).
      if (i + 1 < 20 && delta_lo + 0.05 <= 1.0)
        CHECK(thm1_bound(delta_lo + 0.05, n_lo, 0.5, k).bound <=
              thm1_bound(delta_lo, n_lo, 0.5, k).bound + 1e-9);
    }
  }
}

TEST_CASE("level t0 is monotone in m and 1/z") {
  LevelModel base = small_delta_model();
  LevelModel more_levels = base;
  more_levels.m = 3;
  more_levels.z = {0.01, 0.01};
  CHECK(level_new_bound(more_levels).aux("t0") >= level_new_bound(base).aux("t0"));

  LevelModel smaller_z = base;
  smaller_z.z = {0.005};
  CHECK(level_new_bound(smaller_z).aux("t0") >= level_new_bound(base).aux("t0"));
}

TEST_CASE("calculators are pure") {
  BoundReport a = thm1_bound(0.37, 123, 0.41, 5000);
  BoundReport b = thm1_bound(0.37, 123, 0.41, 5000);
  CHECK(a.bound == b.bound);
  BoundReport c = level_new_bound(small_delta_model());
  BoundReport d = level_new_bound(small_delta_model());
  CHECK(c.bound == d.bound);
}

TEST_CASE("all valid bounds are positive and finite") {
  for (double delta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    for (std::int64_t n : {2, 10, 100}) {
      BoundReport rep = thm1_bound(delta, n, 0.5, 1000000);
      if (rep.valid) {
        CHECK(rep.bound > 0.0);
        CHECK(std::isfinite(rep.bound));
      }
    }
  }
}

TEST_CASE("branch selection at delta = 1 uses the small-delta formula") {
  BoundReport rep = thm1_bound(1.0, 1000, 0.5, 1000000);
  // The delta > 1 branch would give 2.6 log_2(1000) + 81 < 110; the
  // fluctuation-phase term dominates far beyond that.
  CHECK(rep.bound > 1000.0);
  CHECK(rep.aux("d0") == 100.0);
}

TEST_CASE("level model structural validation") {
  LevelModel bad = small_delta_model();
  bad.z = {};
  CHECK_THROWS_AS(level_new_bound(bad), std::domain_error);
  bad = small_delta_model();
  bad.z = {0.0};
  CHECK_THROWS_AS(level_new_bound(bad), std::invalid_argument);
}

TEST_CASE("lambda fixed-point suggestion") {
  LevelModel model = small_delta_model();
  auto suggestion = suggest_feasible_lambda(model);
  REQUIRE(suggestion.has_value());
  LevelModel solved = model;
  solved.lambda = *suggestion;
  BoundReport rep = level_new_bound(solved);
  CHECK(rep.valid);
  CHECK(static_cast<double>(*suggestion) >= rep.aux("lambda_min"));
  // gamma0 * lambda integral.
  double g0l = solved.gamma0 * static_cast<double>(*suggestion);
  CHECK(std::fabs(g0l - std::round(g0l)) < 1e-9);
}
