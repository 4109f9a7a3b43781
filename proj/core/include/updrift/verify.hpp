#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "updrift/bounds.hpp"
#include "updrift/process.hpp"
#include "updrift/stats.hpp"

namespace updrift {

struct MonteCarloSummary {
  std::int64_t trials = 0;
  double mean = 0.0;         // over uncensored trials only
  double stderr_mean = 0.0;  // standard error of the mean
  Interval ci95;
  std::int64_t censored = 0;
  std::uint64_t seed = 0;

  bool all_censored() const { return trials > 0 && censored == trials; }
};

enum class Direction { UpperBoundsMean, UpperBoundsProb, LowerBoundsProb };

/// Comparison of an empirical estimate against a theorem bound with a
/// 3-standard-error margin. Censored trials never enter a <=-verdict on a
/// mean; the verdict is withheld instead.
struct Verdict {
  double bound = 0.0;
  MonteCarloSummary empirical;
  bool consistent = false;
  bool withheld = false;
  std::string reason;
  double margin = 0.0;  // slack in the favorable direction, in estimate units
};

/// Monte Carlo estimate of E[T] with one independent substream per trial.
MonteCarloSummary estimate_hitting_time(const ProcessSpec& spec, std::int64_t trials,
                                        std::int64_t cap, std::uint64_t seed);

/// Exact expected hitting time. Binomial kinds build the one-step transition
/// matrix over transient states below target_n and solve h = 1 + Q h;
/// Deterministic and Jackpot use their closed forms. Throws std::length_error
/// for k above kMarkovOracleMaxK.
double exact_hitting_time_markov(const ProcessSpec& spec);

inline constexpr std::int64_t kMarkovOracleMaxK = 5000;

/// An event runner drives one trajectory and reports whether the event
/// occurred; nullopt means the run was censored before the event was decided.
using EventRunner = std::function<std::optional<bool>(RngStream&)>;

/// p-hat with a 95% Wilson interval stored in ci95.
MonteCarloSummary estimate_event_probability(const EventRunner& event,
                                             std::int64_t trials, std::uint64_t seed);

/// Compares empirical against bound.bound (or a probability constant carried
/// in bound.auxiliary, keyed by direction). Throws std::invalid_argument when
/// the bound report is invalid.
Verdict check_theorem(const BoundReport& bound, const MonteCarloSummary& empirical,
                      Direction direction);

/// Same comparison against a raw bound value.
Verdict check_value(double bound, const MonteCarloSummary& empirical,
                    Direction direction);

struct Lemma14Report {
  struct Violation {
    std::int64_t k = 0;
    double p = 0.0;
    double tail = 0.0;
  };
  std::int64_t cases_checked = 0;
  double min_tail = 1.0;
  std::vector<Violation> violations;

  bool pass() const { return cases_checked > 0 && violations.empty(); }
};

/// Exact sweep of Pr[Bin(k,p) >= kp] >= 1/4 over k in [1..k_max], checking
/// the boundary point p = 1/k plus every grid point with p >= 1/k.
Lemma14Report lemma14_exact_check(std::int64_t k_max, const std::vector<double>& p_grid);

/// 0.05 .. 1.00 in steps of 0.05.
std::vector<double> lemma14_default_grid();

/// Event: starting from state D, within ceil(3/delta) steps (or until
/// reaching min{n, 2D}) the process dips to or below D/2 + s*delta*D/2.
std::optional<bool> dip_event(const ProcessSpec& spec, std::int64_t d, RngStream& rng);

/// Event: starting from state D, the process reaches n within
/// ceil(log2(n/D)) * ceil(3/delta) iterations.
std::optional<bool> climb_event(const ProcessSpec& spec, std::int64_t d, RngStream& rng);

/// Event: among trajectories that reach hi, a later state <= lo occurs
/// before the target. nullopt when the trajectory never decided (cap).
std::optional<bool> return_event(const ProcessSpec& spec, std::int64_t hi,
                                 std::int64_t lo, std::int64_t cap, RngStream& rng);

/// Empirical dip frequency vs. exp(-delta*D/169).
Verdict dip_probability_check(const ProcessSpec& spec, std::int64_t d,
                              std::int64_t trials, std::uint64_t seed);

/// Empirical in-window climb success vs. max{0.2782, 1 - 1/(e^{delta D/169}-1)}.
Verdict climb_success_check(const ProcessSpec& spec, std::int64_t d,
                            std::int64_t trials, std::uint64_t seed);

/// Empirical return frequency vs. 0.7218 (delta <= 1, thresholds 100/delta
/// and 50/delta) or 1/(e(e-1)) (delta > 1, thresholds 32 and 31).
Verdict return_probability_check(const ProcessSpec& spec, std::int64_t trials,
                                 std::uint64_t seed, std::int64_t cap = kDefaultStepCap);

}  // namespace updrift
