#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace updrift {

enum class TheoremId {
  UpDrift1,         // first up-drift theorem
  NoDrift,          // fluctuation-only phase bound
  UpDrift2,         // second up-drift theorem (state 0 allowed)
  UpDrift3,         // third up-drift theorem (fresh start)
  LevelNew,         // level-based theorem, delta <= 1
  LevelLargeDelta,  // level-based theorem, delta > 1
  LevelOld,         // earlier level-based theorem, for comparison
};

std::string to_string(TheoremId id);
std::optional<TheoremId> theorem_id_from_string(const std::string& name);

/// Whether a bound counts process iterations or fitness evaluations.
/// Level-based bounds are in evaluations (lambda per generation); carrying
/// the unit explicitly prevents dropped lambda factors.
enum class BoundUnit { Iterations, Evaluations };

std::string to_string(BoundUnit unit);

struct BoundReport {
  TheoremId theorem = TheoremId::UpDrift1;
  BoundUnit unit = BoundUnit::Iterations;
  double bound = 0.0;
  bool valid = true;
  std::vector<std::string> violated_preconditions;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> auxiliary;

  /// Lookup in auxiliary; throws std::out_of_range when absent.
  double aux(std::string_view key) const;
  bool has_aux(std::string_view key) const;
};

/// Level partition data for the level-based theorems.
struct LevelModel {
  std::int64_t m = 1;      // level count
  std::vector<double> z;   // z_1 .. z_{m-1}
  double delta = 1.0;
  double gamma0 = 0.5;
  std::int64_t lambda = 1;
};

/// max{0, log_b(x)}.
double log0(double base, double x);

/// First up-drift theorem. delta <= 1:
///   (21.6/(1-gamma0)) D0 ln(2 D0) + 3.6 log2(n) ceil(3/delta),
/// delta > 1: 2.6 log_{1+delta}(n) + 81. Iterations.
BoundReport thm1_bound(double delta, std::int64_t n, double gamma0, std::int64_t k);

/// Fluctuation-phase bound 6 D0 ln(2 D0) / (1-gamma0). Pass k > 0 to check
/// D0-1 <= gamma0 k. Iterations.
BoundReport nodrift_bound(double d0, double gamma0, std::int64_t k = 0);

/// Second up-drift theorem (process may visit 0, leaving it with
/// E[min(X', D0)] >= e0). Iterations.
BoundReport thm2_bound(double delta, std::int64_t n, double gamma0, std::int64_t k,
                       double e0);

/// Third up-drift theorem (fresh start to at least xmin with probability p).
/// Iterations.
BoundReport thm3_bound(double delta, std::int64_t n, std::int64_t k,
                       std::int64_t xmin, double p);

/// Level-based theorem for delta <= 1. Bound 8 lambda t0, in evaluations.
BoundReport level_new_bound(const LevelModel& model);

/// Level-based theorem for delta > 1. Bound 9 lambda t0, in evaluations.
BoundReport level_large_delta_bound(const LevelModel& model);

/// Earlier level-based theorem (quadratic 1/delta dependence), as a
/// comparison calculator. Evaluations.
BoundReport level_old_bound(const LevelModel& model);

/// Additive drift with overshooting, oriented upward:
/// expected time <= (expected_final - x0) / drift.
double additive_overshoot_bound(double x0, double expected_final, double drift);

/// Iterates lambda -> lambda_min(lambda) on the matching level-based
/// theorem's population-size condition to suggest a feasible lambda (the
/// condition has lambda on both sides). Returns the smallest integer lambda
/// >= the fixed point with gamma0*lambda integral, or nullopt if no fixed
/// point emerged within 100 iterations.
std::optional<std::int64_t> suggest_feasible_lambda(LevelModel model);

}  // namespace updrift
