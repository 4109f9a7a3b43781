#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "updrift/verify.hpp"

using namespace updrift;

namespace {

ProcessSpec clamped(std::int64_t k, double delta, std::int64_t n, std::int64_t x0 = 1) {
  ProcessSpec spec;
  spec.kind = ProcessKind::BinomialClamped;
  spec.k = k;
  spec.delta = delta;
  spec.target_n = n;
  spec.gamma0 = 0.5;
  spec.x0 = x0;
  return spec;
}

MonteCarloSummary fake_summary(double mean, double se, std::int64_t censored = 0) {
  MonteCarloSummary s;
  s.trials = 1000;
  s.mean = mean;
  s.stderr_mean = se;
  s.ci95 = {mean - 1.96 * se, mean + 1.96 * se};
  s.censored = censored;
  return s;
}

}  // namespace

TEST_CASE("markov oracle closed forms") {
  ProcessSpec jackpot;
  jackpot.kind = ProcessKind::Jackpot;
  jackpot.delta = 0.5;
  jackpot.target_n = 11;
  jackpot.x0 = 1;
  CHECK(exact_hitting_time_markov(jackpot) == 20.0);

  ProcessSpec det;
  det.kind = ProcessKind::Deterministic;
  det.delta = 1.0;
  det.target_n = 8;
  det.x0 = 1;
  CHECK(exact_hitting_time_markov(det) == 3.0);
  det.delta = 0.5;
  det.target_n = 1000;
  CHECK(exact_hitting_time_markov(det) == 18.0);  // ceil(log_1.5 1000)

  det.x0 = 2000;
  CHECK(exact_hitting_time_markov(det) == 0.0);
}

TEST_CASE("markov oracle solves the clamped chain") {
  // One-step certainty: p = (1+1)*1/2 = 1.
  CHECK(exact_hitting_time_markov(clamped(2, 1.0, 2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Independently computed linear-solve references.
  CHECK(exact_hitting_time_markov(clamped(40, 0.5, 10)) ==
        doctest::Approx(7.0849492891927985).epsilon(1e-9));

  ProcessSpec unbiased = clamped(30, 1.0, 6);
  unbiased.kind = ProcessKind::UnbiasedBinomial;
  CHECK(exact_hitting_time_markov(unbiased) ==
        doctest::Approx(24.404654308257175).epsilon(1e-9));
}

TEST_CASE("markov oracle handles the zero state") {
  ProcessSpec spec = clamped(40, 0.5, 10, 0);
  spec.kind = ProcessKind::BinomialWithZero;
  spec.zero_law = ZeroLaw::point_mass(1);
  CHECK(exact_hitting_time_markov(spec) ==
        doctest::Approx(8.7509824583469).epsilon(1e-9));
  spec.x0 = 1;
  CHECK(exact_hitting_time_markov(spec) ==
        doctest::Approx(7.750982458346901).epsilon(1e-9));

  // An absorbing zero state cannot be solved.
  spec.zero_law = ZeroLaw::point_mass(0);
  spec.x0 = 0;
  CHECK_THROWS_AS(exact_hitting_time_markov(spec), std::domain_error);
}

TEST_CASE("markov oracle rejects oversize state spaces") {
  CHECK_THROWS_AS(exact_hitting_time_markov(clamped(kMarkovOracleMaxK + 1, 0.5, 10)),
                  std::length_error);
}

TEST_CASE("hitting-time estimates agree with the oracle") {
  ProcessSpec spec = clamped(40, 0.5, 10);
  MonteCarloSummary s = estimate_hitting_time(spec, 10000, 1000000, 7);
  CHECK(s.censored == 0);
  double exact = exact_hitting_time_markov(spec);
  CHECK(std::fabs(s.mean - exact) <= 3.0 * s.stderr_mean);
}

TEST_CASE("deterministic estimates have zero spread") {
  ProcessSpec det;
  det.kind = ProcessKind::Deterministic;
  det.delta = 1.0;
  det.target_n = 8;
  det.x0 = 1;
  MonteCarloSummary s = estimate_hitting_time(det, 100, 1000, 5);
  CHECK(s.mean == 3.0);
  CHECK(s.stderr_mean == 0.0);
}

TEST_CASE("summaries are reproducible") {
  ProcessSpec spec = clamped(40, 0.5, 10);
  MonteCarloSummary a = estimate_hitting_time(spec, 2000, 100000, 21);
  MonteCarloSummary b = estimate_hitting_time(spec, 2000, 100000, 21);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_mean == b.stderr_mean);
}

TEST_CASE("all-censored estimates are explicit") {
  ProcessSpec spec = clamped(400, 0.1, 100);
  MonteCarloSummary s = estimate_hitting_time(spec, 50, 2, 3);
  CHECK(s.all_censored());
  CHECK(std::isnan(s.mean));
}

TEST_CASE("event probability estimation") {
  // Fair-coin reference.
  MonteCarloSummary coin = estimate_event_probability(
      [](RngStream& rng) { return std::optional<bool>(rng.bernoulli(0.5)); }, 100000, 9);
  CHECK(coin.ci95.contains(0.5));

  // Jackpot success-per-step event has probability delta/(n-1) = 0.05.
  ProcessSpec jackpot;
  jackpot.kind = ProcessKind::Jackpot;
  jackpot.delta = 0.5;
  jackpot.target_n = 11;
  jackpot.x0 = 1;
  MonteCarloSummary jp = estimate_event_probability(
      [&](RngStream& rng) {
        return std::optional<bool>(step(jackpot, 1, rng) == jackpot.target_n);
      },
      100000, 10);
  CHECK(jp.ci95.contains(0.05));
}

TEST_CASE("verdicts compare with a three-sigma margin") {
  Verdict ok = check_value(100.0, fake_summary(40.0, 1.0), Direction::UpperBoundsMean);
  CHECK(ok.consistent);
  CHECK_FALSE(ok.withheld);
  CHECK(ok.margin == doctest::Approx(63.0));

  Verdict bad = check_value(100.0, fake_summary(200.0, 1.0), Direction::UpperBoundsMean);
  CHECK_FALSE(bad.consistent);

  Verdict climb =
      check_value(0.2782, fake_summary(0.35, 0.01), Direction::LowerBoundsProb);
  CHECK(climb.consistent);

  Verdict withheld =
      check_value(100.0, fake_summary(40.0, 1.0, 5), Direction::UpperBoundsMean);
  CHECK(withheld.withheld);
  CHECK_FALSE(withheld.consistent);
}

TEST_CASE("check_theorem refuses invalid reports and reads aux constants") {
  BoundReport invalid = thm1_bound(1.0, 100, 0.5, 100);
  REQUIRE_FALSE(invalid.valid);
  CHECK_THROWS_AS(check_theorem(invalid, fake_summary(1.0, 0.1), Direction::UpperBoundsMean),
                  std::invalid_argument);

  BoundReport rep = thm1_bound(0.5, 300, 0.5, 2000);
  Verdict v = check_theorem(rep, fake_summary(0.1, 0.01), Direction::UpperBoundsProb);
  CHECK(v.bound == 0.7218);
  Verdict f = check_theorem(rep, fake_summary(0.5, 0.01), Direction::LowerBoundsProb);
  CHECK(f.bound == 0.2782);
}

TEST_CASE("binomial tail at the mean stays above one quarter") {
  Lemma14Report spot = lemma14_exact_check(10, {0.3});
  CHECK(spot.pass());

  // Small full sweep; the acceptance suite runs k <= 200.
  Lemma14Report sweep = lemma14_exact_check(60, lemma14_default_grid());
  CHECK(sweep.pass());
  CHECK(sweep.min_tail >= 0.25);
  CHECK(sweep.cases_checked > 60);
}

TEST_CASE("wilson interval coverage on a synthetic reference") {
  int covered = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    RngStream rng = RngStream::substream(777, rep);
    std::int64_t hits = 0;
    const std::int64_t draws = 500;
    for (std::int64_t i = 0; i < draws; ++i)
      if (rng.bernoulli(0.3)) ++hits;
    if (wilson_interval(hits, draws).contains(0.3)) ++covered;
  }
  CHECK(covered >= 180);  // >= 90% of 200 meta-repetitions
}

TEST_CASE("dip event never fires on the deterministic process") {
  ProcessSpec det;
  det.kind = ProcessKind::Deterministic;
  det.delta = 1.0;
  det.target_n = 1000;
  det.x0 = 100;
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream rng = RngStream::substream(31, i);
    auto dipped = dip_event(det, 100, rng);
    REQUIRE(dipped.has_value());
    CHECK_FALSE(*dipped);
  }
  Verdict v = dip_probability_check(det, 100, 200, 8);
  CHECK(v.consistent);
  CHECK(v.empirical.mean == 0.0);
  CHECK(v.bound == doctest::Approx(std::exp(-100.0 / 169.0)).epsilon(1e-12));
}

TEST_CASE("climb succeeds trivially from a start at the target") {
  ProcessSpec spec = clamped(4000, 1.0, 1000);
  RngStream rng(3);
  auto res = climb_event(spec, 1200, rng);
  REQUIRE(res.has_value());
  CHECK(*res);

  Verdict v = climb_success_check(spec, 1200, 100, 4);
  CHECK(v.empirical.mean == 1.0);
  CHECK(v.consistent);
}

TEST_CASE("climb floor values") {
  // At D = 1690, delta = 1 the floor is 1 - 1/(e^10 - 1).
  ProcessSpec spec = clamped(8000, 1.0, 2000);
  Verdict v = climb_success_check(spec, 1690, 50, 12);
  CHECK(v.bound ==
        doctest::Approx(1.0 - 1.0 / (std::exp(10.0) - 1.0)).epsilon(1e-12));
  // At D = 100 the exponential floor is negative, so 0.2782 applies.
  Verdict w = climb_success_check(clamped(4000, 1.0, 1000), 100, 50, 12);
  CHECK(w.bound == 0.2782);
}

TEST_CASE("return probability checks") {
  // Deterministic growth never returns.
  ProcessSpec det;
  det.kind = ProcessKind::Deterministic;
  det.delta = 1.0;
  det.target_n = 300;
  det.x0 = 1;
  Verdict v = return_probability_check(det, 500, 5);
  CHECK(v.empirical.mean == 0.0);
  CHECK(v.consistent);
  CHECK(v.bound == 0.7218);

  // delta > 1 uses the 1/(e(e-1)) constant and thresholds 32/31.
  ProcessSpec fast = clamped(200, 3.0, 40);
  Verdict w = return_probability_check(fast, 500, 6);
  CHECK(w.bound == doctest::Approx(0.2140972656978841).epsilon(1e-12));
  CHECK(w.consistent);

  // Target below the high threshold withholds the verdict.
  ProcessSpec tiny = clamped(400, 1.0, 50);
  Verdict t = return_probability_check(tiny, 10, 7);
  CHECK(t.withheld);
}
