#include "updrift/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "updrift/binomial.hpp"

namespace updrift {

namespace {

constexpr double kSigmas = 3.0;
constexpr double kNormal95 = 1.959963984540054;

double ceil_guard(double v) { return std::ceil(v - 1e-12); }

MonteCarloSummary summarize(const RunningStat& stat, std::int64_t trials,
                            std::int64_t censored, std::uint64_t seed) {
  MonteCarloSummary s;
  s.trials = trials;
  s.censored = censored;
  s.seed = seed;
  if (stat.count() == 0) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.stderr_mean = std::numeric_limits<double>::quiet_NaN();
    s.ci95 = {s.mean, s.mean};
    return s;
  }
  s.mean = stat.mean();
  s.stderr_mean = stat.stderr_mean();
  s.ci95 = {s.mean - kNormal95 * s.stderr_mean, s.mean + kNormal95 * s.stderr_mean};
  return s;
}

}  // namespace

MonteCarloSummary estimate_hitting_time(const ProcessSpec& spec, std::int64_t trials,
                                        std::int64_t cap, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_hitting_time: trials must be >= 1");
  validate(spec);
  RunningStat stat;
  std::int64_t censored = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
    auto t = hitting_time(spec, cap, rng);
    if (t)
      stat.add(static_cast<double>(*t));
    else
      ++censored;
  }
  return summarize(stat, trials, censored, seed);
}

double exact_hitting_time_markov(const ProcessSpec& spec) {
  validate(spec);
  if (spec.x0 >= spec.target_n) return 0.0;
  switch (spec.kind) {
    case ProcessKind::Deterministic: {
      double ratio = static_cast<double>(spec.target_n) / static_cast<double>(spec.x0);
      return ceil_guard(std::log(ratio) / std::log1p(spec.delta));
    }
    case ProcessKind::Jackpot:
      return static_cast<double>(spec.target_n - 1) / spec.delta;
    default:
      break;
  }
  if (spec.k > kMarkovOracleMaxK)
    throw std::length_error("exact_hitting_time_markov: k exceeds oracle cutoff");

  const std::int64_t n = spec.target_n;
  const std::int64_t lo = (spec.kind == ProcessKind::BinomialWithZero ||
                           spec.kind == ProcessKind::BinomialFreshStart)
                              ? 0
                              : 1;
  const auto size = static_cast<Eigen::Index>(n - lo);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(size, size);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(size);

  auto drift_p = [&](std::int64_t x) {
    double p = (1.0 + spec.delta) * static_cast<double>(x) / static_cast<double>(spec.k);
    if (p > 1.0) {
      if (p > 1.0 + 1e-12)
        throw std::domain_error(
            "exact_hitting_time_markov: transient state violates (1+delta)*x <= k");
      p = 1.0;
    }
    return p;
  };

  for (std::int64_t x = lo; x < n; ++x) {
    auto row = static_cast<Eigen::Index>(x - lo);
    auto put = [&](std::int64_t y, double prob) {
      if (prob == 0.0 || y >= n) return;  // mass at >= n is absorbed
      a(row, static_cast<Eigen::Index>(y - lo)) -= prob;
    };
    switch (spec.kind) {
      case ProcessKind::BinomialClamped: {
        double p = drift_p(x);
        put(1, binomial_pmf(spec.k, 0, p) + binomial_pmf(spec.k, 1, p));
        for (std::int64_t y = 2; y < n; ++y) put(y, binomial_pmf(spec.k, y, p));
        break;
      }
      case ProcessKind::UnbiasedBinomial: {
        double p = static_cast<double>(x) / static_cast<double>(spec.k);
        put(1, binomial_pmf(spec.k, 0, p) + binomial_pmf(spec.k, 1, p));
        for (std::int64_t y = 2; y < n; ++y) put(y, binomial_pmf(spec.k, y, p));
        break;
      }
      case ProcessKind::BinomialWithZero: {
        if (x == 0) {
          for (std::int64_t y = 0; y < n; ++y) put(y, spec.zero_law->pmf(y));
        } else {
          double p = drift_p(x);
          for (std::int64_t y = 0; y < n; ++y) put(y, binomial_pmf(spec.k, y, p));
        }
        break;
      }
      case ProcessKind::BinomialFreshStart: {
        const FreshStart& fs = *spec.fresh_start;
        if (x < fs.xmin) {
          put(0, 1.0 - fs.p);
          if (fs.xmin < n) put(fs.xmin, fs.p);
        } else {
          double p = drift_p(x);
          for (std::int64_t y = 0; y < n; ++y) put(y, binomial_pmf(spec.k, y, p));
        }
        break;
      }
      default:
        throw std::logic_error("exact_hitting_time_markov: unexpected kind");
    }
  }

  Eigen::VectorXd h = a.partialPivLu().solve(b);
  double result = h(static_cast<Eigen::Index>(spec.x0 - lo));
  if (!std::isfinite(result) || result < 0.0)
    throw std::domain_error(
        "exact_hitting_time_markov: chain is not absorbed from x0 (zero state "
        "absorbing or matrix singular)");
  return result;
}

MonteCarloSummary estimate_event_probability(const EventRunner& event,
                                             std::int64_t trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("estimate_event_probability: trials must be >= 1");
  std::int64_t successes = 0;
  std::int64_t decided = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
    if (auto outcome = event(rng)) {
      ++decided;
      if (*outcome) ++successes;
    }
  }
  MonteCarloSummary s;
  s.trials = trials;
  s.censored = trials - decided;
  s.seed = seed;
  if (decided == 0) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.stderr_mean = std::numeric_limits<double>::quiet_NaN();
    s.ci95 = {s.mean, s.mean};
    return s;
  }
  double nd = static_cast<double>(decided);
  s.mean = static_cast<double>(successes) / nd;
  s.stderr_mean = std::sqrt(s.mean * (1.0 - s.mean) / nd);
  s.ci95 = wilson_interval(successes, decided);
  return s;
}

Verdict check_value(double bound, const MonteCarloSummary& empirical,
                    Direction direction) {
  Verdict v;
  v.bound = bound;
  v.empirical = empirical;
  if (empirical.all_censored()) {
    v.withheld = true;
    v.reason = "all trials censored";
    return v;
  }
  if (empirical.censored > 0) {
    // Censoring biases hitting-time means downward and leaves event outcomes
    // undecided, so no verdict is issued either way.
    v.withheld = true;
    v.reason = "censored trials present (" + std::to_string(empirical.censored) + ")";
    return v;
  }
  switch (direction) {
    case Direction::UpperBoundsMean:
    case Direction::UpperBoundsProb:
      v.margin = bound - (empirical.mean - kSigmas * empirical.stderr_mean);
      v.consistent = v.margin >= 0.0;
      break;
    case Direction::LowerBoundsProb:
      v.margin = empirical.mean + kSigmas * empirical.stderr_mean - bound;
      v.consistent = v.margin >= 0.0;
      break;
  }
  return v;
}

Verdict check_theorem(const BoundReport& bound, const MonteCarloSummary& empirical,
                      Direction direction) {
  if (!bound.valid) {
    std::string why = "refusing verdict: bound report invalid:";
    for (const auto& p : bound.violated_preconditions) why += " [" + p + "]";
    throw std::invalid_argument(why);
  }
  double value = bound.bound;
  if (direction == Direction::UpperBoundsProb) {
    if (bound.has_aux("dip_prob_bound"))
      value = bound.aux("dip_prob_bound");
    else if (bound.has_aux("return_prob_bound"))
      value = bound.aux("return_prob_bound");
    else
      throw std::invalid_argument("check_theorem: report carries no probability bound");
  } else if (direction == Direction::LowerBoundsProb) {
    if (!bound.has_aux("climb_success_floor"))
      throw std::invalid_argument("check_theorem: report carries no probability floor");
    value = bound.aux("climb_success_floor");
  }
  return check_value(value, empirical, direction);
}

std::vector<double> lemma14_default_grid() {
  std::vector<double> grid;
  for (int j = 1; j <= 20; ++j) grid.push_back(static_cast<double>(j) * 0.05);
  return grid;
}

Lemma14Report lemma14_exact_check(std::int64_t k_max, const std::vector<double>& p_grid) {
  if (k_max < 1) throw std::invalid_argument("lemma14_exact_check: k_max must be >= 1");
  Lemma14Report report;
  auto check_one = [&](std::int64_t k, double p) {
    double tail = binomial_tail_at_mean(k, p);
    ++report.cases_checked;
    report.min_tail = std::min(report.min_tail, tail);
    if (tail < 0.25) report.violations.push_back({k, p, tail});
  };
  for (std::int64_t k = 1; k <= k_max; ++k) {
    double admissible = 1.0 / static_cast<double>(k);
    check_one(k, admissible);  // the boundary point p = 1/k is always in scope
    for (double p : p_grid) {
      if (p < admissible - 1e-15 || p > 1.0) continue;
      check_one(k, p);
    }
  }
  return report;
}

std::optional<bool> dip_event(const ProcessSpec& spec, std::int64_t d, RngStream& rng) {
  validate(spec);
  auto window = static_cast<std::int64_t>(ceil_guard(3.0 / spec.delta));
  double dd = static_cast<double>(d);
  double n_tilde = std::min(static_cast<double>(spec.target_n), 2.0 * dd);
  std::int64_t state = d;
  for (std::int64_t s = 0;; ++s) {
    double line = 0.5 * dd + 0.5 * static_cast<double>(s) * spec.delta * dd;
    if (static_cast<double>(state) <= line) return true;
    if (static_cast<double>(state) >= n_tilde) return false;  // window ends at T
    if (s == window) return false;
    state = step(spec, state, rng);
  }
}

std::optional<bool> climb_event(const ProcessSpec& spec, std::int64_t d, RngStream& rng) {
  validate(spec);
  if (d >= spec.target_n) return true;
  double ratio = static_cast<double>(spec.target_n) / static_cast<double>(d);
  auto window = static_cast<std::int64_t>(ceil_guard(log0(2.0, ratio)) *
                                          ceil_guard(3.0 / spec.delta));
  std::int64_t state = d;
  for (std::int64_t t = 1; t <= window; ++t) {
    state = step(spec, state, rng);
    if (state >= spec.target_n) return true;
  }
  return false;
}

std::optional<bool> return_event(const ProcessSpec& spec, std::int64_t hi,
                                 std::int64_t lo, std::int64_t cap, RngStream& rng) {
  ReturnWatchRecord rec = run_with_return_watch(spec, hi, lo, cap, rng);
  if (!rec.reached_hi) return std::nullopt;  // never qualified before the cap
  if (rec.returned_lo) return true;
  if (rec.hit_target) return false;
  return std::nullopt;  // qualified but undecided at the cap
}

Verdict dip_probability_check(const ProcessSpec& spec, std::int64_t d,
                              std::int64_t trials, std::uint64_t seed) {
  double bound = std::exp(-spec.delta * static_cast<double>(d) / 169.0);
  auto summary = estimate_event_probability(
      [&](RngStream& rng) { return dip_event(spec, d, rng); }, trials, seed);
  Verdict v = check_value(bound, summary, Direction::UpperBoundsProb);
  if (static_cast<double>(d) < 100.0 / spec.delta)
    v.reason += (v.reason.empty() ? "" : "; ") + std::string("precondition: D < 100/delta");
  if (d >= spec.target_n)
    v.reason += (v.reason.empty() ? "" : "; ") + std::string("precondition: D >= n");
  return v;
}

Verdict climb_success_check(const ProcessSpec& spec, std::int64_t d,
                            std::int64_t trials, std::uint64_t seed) {
  double floor_exp = std::exp(spec.delta * static_cast<double>(d) / 169.0) - 1.0;
  double floor = std::max(0.2782, 1.0 - 1.0 / floor_exp);
  auto summary = estimate_event_probability(
      [&](RngStream& rng) { return climb_event(spec, d, rng); }, trials, seed);
  Verdict v = check_value(floor, summary, Direction::LowerBoundsProb);
  if (static_cast<double>(d) < 100.0 / spec.delta)
    v.reason += (v.reason.empty() ? "" : "; ") + std::string("precondition: D < 100/delta");
  return v;
}

Verdict return_probability_check(const ProcessSpec& spec, std::int64_t trials,
                                 std::uint64_t seed, std::int64_t cap) {
  std::int64_t hi;
  std::int64_t lo;
  double bound;
  std::string precondition;
  if (spec.delta <= 1.0) {
    hi = static_cast<std::int64_t>(std::ceil(100.0 / spec.delta));
    lo = static_cast<std::int64_t>(std::floor(50.0 / spec.delta));
    bound = 0.7218;
    if (static_cast<double>(spec.target_n) <= 100.0 / spec.delta)
      precondition = "precondition: n <= 100/delta";
  } else {
    hi = 32;
    lo = 31;
    bound = 1.0 / (std::exp(1.0) * (std::exp(1.0) - 1.0));
    if (spec.target_n <= 32) precondition = "precondition: n <= 32";
  }
  if (hi > spec.target_n) {
    Verdict v;
    v.bound = bound;
    v.withheld = true;
    v.reason = "high threshold exceeds target; " + precondition;
    return v;
  }
  auto summary = estimate_event_probability(
      [&](RngStream& rng) { return return_event(spec, hi, lo, cap, rng); }, trials, seed);
  Verdict v = check_value(bound, summary, Direction::UpperBoundsProb);
  if (!precondition.empty())
    v.reason += (v.reason.empty() ? "" : "; ") + precondition;
  return v;
}

}  // namespace updrift
