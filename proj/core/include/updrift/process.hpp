#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "updrift/rng.hpp"

namespace updrift {

enum class ProcessKind {
  Deterministic,       // X_{t+1} = (1+delta) X_t, real-valued track
  Jackpot,             // X_{t+1} = n w.p. delta/(n-1), else 1
  BinomialClamped,     // max(1, Bin(k, (1+delta) x / k))
  BinomialWithZero,    // Bin(k, (1+delta) x / k); state 0 leaves via zero_law
  BinomialFreshStart,  // below xmin: xmin w.p. p else 0; above: binomial step
  UnbiasedBinomial,    // max(1, Bin(k, x / k)), no drift
};

std::string to_string(ProcessKind kind);
std::optional<ProcessKind> process_kind_from_string(const std::string& name);

/// Distribution for leaving state 0. The drift theorems constrain only
/// E[min(X_{t+1}, D0)] from state 0, so the law is an explicit descriptor
/// rather than any assumed default.
struct ZeroLaw {
  enum class Kind { PointMass, Binomial, Tabulated };

  Kind kind = Kind::PointMass;
  std::int64_t point = 1;                // PointMass
  std::int64_t trials = 0;               // Binomial
  double prob = 0.0;                     // Binomial
  std::vector<std::int64_t> values;      // Tabulated
  std::vector<double> weights;           // Tabulated, normalized on use

  static ZeroLaw point_mass(std::int64_t v);
  static ZeroLaw binomial(std::int64_t trials, double p);
  static ZeroLaw tabulated(std::vector<std::int64_t> values,
                           std::vector<double> weights);

  std::int64_t sample(RngStream& rng) const;
  /// E[min(X, cap)], exact.
  double expected_min(double cap) const;
  /// Pr[X = v], exact (used by the Markov oracle).
  double pmf(std::int64_t v) const;
  /// Pr[X >= v], exact.
  double tail_at_least(std::int64_t v) const;
};

/// Fresh-start condition: from anywhere, next state is >= xmin with
/// probability at least p.
struct FreshStart {
  std::int64_t xmin = 1;
  double p = 0.0;
};

/// Full parameterization of an up-drift test process.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::BinomialClamped;
  std::int64_t k = 1;         // binomial trial count
  double delta = 1.0;         // relative drift
  std::int64_t target_n = 1;  // hitting threshold
  double gamma0 = 0.5;        // slack parameter
  std::optional<ZeroLaw> zero_law;
  std::optional<FreshStart> fresh_start;
  std::int64_t x0 = 1;        // initial state
};

/// Phase threshold min{ceil(100/delta), n} for delta <= 1, min{32, n} above.
double d0_threshold(double delta, double n);
/// Variant without the ceiling, min{100/delta, n}, as used by the
/// fresh-start theorem.
double d0_threshold_smooth(double delta, double n);

/// Throws std::invalid_argument for structurally nonsensical specs
/// (nonpositive k/n/delta, missing laws, x0 inconsistent with kind).
void validate(const ProcessSpec& spec);

/// Named theorem-precondition violations. A violating spec is still
/// constructible and runnable; the flags are surfaced in reports.
std::vector<std::string> precondition_violations(const ProcessSpec& spec);

struct Trajectory {
  std::vector<std::int64_t> states;       // states[0] = x0
  std::optional<std::int64_t> hit_time;   // first t with X_t >= target_n
  bool censored = false;                  // cap reached before hit
};

struct ReturnWatchRecord {
  bool reached_hi = false;
  bool returned_lo = false;  // implies reached_hi
  std::int64_t hi_threshold = 0;
  std::int64_t lo_threshold = 0;
  bool hi_is_target = false;  // degenerate hi = n: the hit ends the run
  bool hit_target = false;    // run ended by reaching target_n
};

inline constexpr std::int64_t kDefaultStepCap = 10'000'000;

/// One transition from an integer state. Throws std::domain_error when the
/// implied success probability (1+delta) x / k exceeds 1.
std::int64_t step(const ProcessSpec& spec, std::int64_t state, RngStream& rng);

/// Iterates until the state reaches target_n or cap steps have been taken.
/// The deterministic kind advances an internal real-valued track and
/// discretizes only for recording/hit testing, so no per-step rounding
/// distorts the closed-form hitting time.
Trajectory run_to_target(const ProcessSpec& spec, std::int64_t cap, RngStream& rng);

/// Like run_to_target but records nothing; nullopt when censored.
std::optional<std::int64_t> hitting_time(const ProcessSpec& spec, std::int64_t cap,
                                         RngStream& rng);

/// Runs until target or cap, recording whether a state >= hi occurred and
/// whether a later state <= lo occurred before the hit.
ReturnWatchRecord run_with_return_watch(const ProcessSpec& spec, std::int64_t hi,
                                        std::int64_t lo, std::int64_t cap,
                                        RngStream& rng);

}  // namespace updrift
