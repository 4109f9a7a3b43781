#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "updrift/binomial.hpp"
#include "updrift/potential.hpp"
#include "updrift/rng.hpp"

using namespace updrift;

namespace {

// Test grid of expansion points: fine below 2, integer steps up to 100.
std::vector<double> expansion_points() {
  std::vector<double> a;
  for (int i = 1; i <= 20; ++i) a.push_back(0.1 * i);
  for (int i = 3; i <= 100; ++i) a.push_back(static_cast<double>(i));
  return a;
}

}  // namespace

TEST_CASE("g potential basics") {
  CHECK(g_potential(0.0) == 0.0);
  CHECK(g_potential(1.0) == 0.0);
  CHECK(g_potential(std::exp(1.0)) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(g_potential(-0.5), std::domain_error);
}

TEST_CASE("taylor estimates at the stated points") {
  CHECK(taylor_upper(1.0, 1.0) == 0.0);
  CHECK(taylor_lower(1.0, 1.0) == 0.0);
  CHECK(taylor_upper(1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(taylor_lower(1.0, 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  double g2 = g_potential(2.0);
  CHECK(g2 == doctest::Approx(1.3862943611198906).epsilon(1e-15));
  CHECK(taylor_lower(1.0, 2.0) <= g2);
  CHECK(g2 <= taylor_upper(1.0, 2.0));
  CHECK(taylor_upper(2.0, 2.0) == doctest::Approx(g2).epsilon(1e-15));
  CHECK(taylor_lower(2.0, 2.0) == doctest::Approx(g2).epsilon(1e-15));
}

TEST_CASE("taylor bounds sandwich g on the grid") {
  for (double a : expansion_points()) {
    for (double x = 0.0; x <= 200.0; x += 0.25) {
      double gx = g_potential(x);
      CHECK(taylor_lower(a, x) <= gx + 1e-12);
      CHECK(gx <= taylor_upper(a, x) + 1e-12);
    }
  }
}

TEST_CASE("g is convex") {
  RngStream rng(123);
  for (int trial = 0; trial < 5000; ++trial) {
    double x = rng.next_unit() * 200.0;
    double y = rng.next_unit() * 200.0;
    double t = rng.next_unit();
    double lhs = g_potential(t * x + (1.0 - t) * y);
    double rhs = t * g_potential(x) + (1.0 - t) * g_potential(y);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("binomial central moments") {
  MomentTriple m = binomial_central_moments(10, 0.5);
  CHECK(m.mean == 5.0);
  CHECK(m.variance == 2.5);
  CHECK(m.third_central == 0.0);

  m = binomial_central_moments(1, 1.0);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == 0.0);
  CHECK(m.third_central == 0.0);

  m = binomial_central_moments(4, 0.25);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.third_central == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("exact binomial g expectation") {
  // Three-term enumeration: 0.25 g(0) + 0.5 g(1) + 0.25 g(2) = 0.5 ln 2.
  CHECK(exact_binomial_g_expectation(2, 0.5) ==
        doctest::Approx(0.34657359027997265).epsilon(1e-14));
  CHECK(exact_binomial_g_expectation(1, 1.0) == 0.0);
  // Lower drift floor at (2, 0.5): E[g] >= g(1) + (1-p)/3 = 1/6.
  CHECK(exact_binomial_g_expectation(2, 0.5) >= 1.0 / 6.0);
  CHECK_THROWS_AS(exact_binomial_g_expectation(kExactEnumerationCutoff + 1, 0.5),
                  std::length_error);
}

TEST_CASE("g drift bound checks") {
  GDriftReport r = check_g_drift_bounds(10, 0.1);
  CHECK(r.lb_applicable);
  CHECK(r.lb_holds);
  CHECK(r.ub_holds);

  r = check_g_drift_bounds(100, 0.5);
  CHECK(r.lb_holds);
  CHECK(r.ub_holds);

  // Degenerate point mass: equality on the upper side with slack (1-p) = 0.
  r = check_g_drift_bounds(1, 1.0);
  CHECK(r.expectation == 0.0);
  CHECK(r.slack_ub == 0.0);
  CHECK(r.ub_holds);
}

TEST_CASE("exact pmf sums to one") {
  const std::vector<std::int64_t> ks = {1, 2, 7, 40, 200, 1000};
  const std::vector<double> ps = {0.001, 0.1, 0.25, 0.5, 0.9, 0.999};
  for (auto k : ks) {
    for (double p : ps) {
      double total = 0.0;
      for (std::int64_t i = 0; i <= k; ++i) total += binomial_pmf(k, i, p);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("g expectation sandwich on a reduced grid") {
  // The acceptance suite runs the full k <= 500 sweep; this covers the shape.
  for (std::int64_t k : {2, 3, 5, 10, 40, 100}) {
    std::vector<double> ps = {1.0 / static_cast<double>(k)};
    for (int j = 1; j <= 10; ++j) ps.push_back(0.1 * j);
    for (double p : ps) {
      if (p < 1.0 / static_cast<double>(k)) continue;
      double e = exact_binomial_g_expectation(k, p);
      double mean = static_cast<double>(k) * p;
      double lower = g_potential(mean) + (1.0 - p) / 2.0 -
                     (1.0 - p) * (1.0 - 2.0 * p) / (6.0 * mean);
      double upper = g_potential(mean) + (1.0 - p);
      CHECK(e >= lower - 1e-12);
      CHECK(e <= upper + 1e-12);
    }
  }
}

TEST_CASE("capped reseed variable keeps its expectation") {
  // Z agrees with Bin(k,p) on [0..E] and parks the rest at ceil(4E); its
  // mean must not drop below E = kp.
  for (std::int64_t k : {2, 5, 10, 40, 100, 400}) {
    for (double p : {0.1, 0.25, 0.5, 0.75, 1.0}) {
      double mean = static_cast<double>(k) * p;
      if (mean < 1.0) continue;
      auto mean_floor = static_cast<std::int64_t>(std::floor(mean));
      double below = 0.0;
      double mass_below = 0.0;
      for (std::int64_t i = 0; i <= mean_floor; ++i) {
        double q = binomial_pmf(k, i, p);
        below += static_cast<double>(i) * q;
        mass_below += q;
      }
      double capped = below + std::ceil(4.0 * mean) * (1.0 - mass_below);
      CHECK(capped >= mean - 1e-9);
    }
  }
}

TEST_CASE("tail at mean matches direct sums") {
  CHECK(binomial_tail_at_mean(10, 0.3) == doctest::Approx(0.6172172136).epsilon(1e-9));
  CHECK(binomial_tail_at_mean(1, 1.0) == 1.0);
  CHECK(binomial_tail_at_mean(4, 0.25) == doctest::Approx(0.68359375).epsilon(1e-12));
}

TEST_CASE("expected min of a binomial") {
  // E[min(Bin(4, 0.5), 2)] = (4*1 + 2*(6+4+1)) / 16 = 26/16.
  CHECK(binomial_expected_min(4, 0.5, 2.0) == doctest::Approx(1.625).epsilon(1e-12));
  CHECK(binomial_expected_min(4, 0.5, 100.0) == doctest::Approx(2.0).epsilon(1e-12));
}
