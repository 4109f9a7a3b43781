#include "updrift/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "updrift/process.hpp"

namespace updrift {

namespace {

constexpr double kReturnProbSmallDelta = 0.7218;
const double kReturnProbLargeDelta = 1.0 / (std::exp(1.0) * (std::exp(1.0) - 1.0));
constexpr double kClimbSuccessFloor = 0.2782;

// ceil with one-ulp head room so that quotients like 3/0.6 do not round up
// to the next integer.
double ceil_guard(double v) { return std::ceil(v - 1e-12); }

bool nearly_integral(double v) {
  return std::fabs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::fabs(v));
}

void check_level_model(const LevelModel& model) {
  if (model.m < 1) throw std::invalid_argument("LevelModel: m must be >= 1");
  if (static_cast<std::int64_t>(model.z.size()) != model.m - 1)
    throw std::domain_error("LevelModel: need exactly m-1 per-level probabilities");
  for (double zj : model.z)
    if (!(zj > 0.0 && zj <= 1.0))
      throw std::invalid_argument("LevelModel: z_j must lie in (0,1]");
  if (model.lambda < 1) throw std::invalid_argument("LevelModel: lambda must be >= 1");
  if (!(model.delta > 0.0)) throw std::invalid_argument("LevelModel: delta must be positive");
  if (!(model.gamma0 > 0.0 && model.gamma0 < 1.0))
    throw std::invalid_argument("LevelModel: gamma0 must lie in (0,1)");
}

void echo_level_inputs(BoundReport& rep, const LevelModel& model) {
  rep.inputs.emplace_back("m", static_cast<double>(model.m));
  rep.inputs.emplace_back("delta", model.delta);
  rep.inputs.emplace_back("gamma0", model.gamma0);
  rep.inputs.emplace_back("lambda", static_cast<double>(model.lambda));
  if (!model.z.empty()) {
    rep.inputs.emplace_back("z_min", *std::min_element(model.z.begin(), model.z.end()));
    rep.inputs.emplace_back("z_max", *std::max_element(model.z.begin(), model.z.end()));
  }
}

void finalize_validity(BoundReport& rep) { rep.valid = rep.violated_preconditions.empty(); }

}  // namespace

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::UpDrift1: return "thm1";
    case TheoremId::NoDrift: return "nodrift";
    case TheoremId::UpDrift2: return "thm2";
    case TheoremId::UpDrift3: return "thm3";
    case TheoremId::LevelNew: return "level-new";
    case TheoremId::LevelLargeDelta: return "level-large-delta";
    case TheoremId::LevelOld: return "level-old";
  }
  return "unknown";
}

std::optional<TheoremId> theorem_id_from_string(const std::string& name) {
  if (name == "thm1") return TheoremId::UpDrift1;
  if (name == "nodrift") return TheoremId::NoDrift;
  if (name == "thm2") return TheoremId::UpDrift2;
  if (name == "thm3") return TheoremId::UpDrift3;
  if (name == "level-new") return TheoremId::LevelNew;
  if (name == "level-large-delta") return TheoremId::LevelLargeDelta;
  if (name == "level-old") return TheoremId::LevelOld;
  return std::nullopt;
}

std::string to_string(BoundUnit unit) {
  return unit == BoundUnit::Iterations ? "iterations" : "evaluations";
}

double BoundReport::aux(std::string_view key) const {
  for (const auto& [k, v] : auxiliary)
    if (k == key) return v;
  throw std::out_of_range("BoundReport::aux: no key " + std::string(key));
}

bool BoundReport::has_aux(std::string_view key) const {
  for (const auto& [k, v] : auxiliary)
    if (k == key) return true;
  return false;
}

double log0(double base, double x) {
  if (!(base > 1.0)) throw std::invalid_argument("log0: base must exceed 1");
  if (x <= 1.0) return 0.0;
  return std::log(x) / std::log(base);
}

BoundReport thm1_bound(double delta, std::int64_t n, double gamma0, std::int64_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("thm1_bound: n and k must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("thm1_bound: delta must be positive");
  if (!(gamma0 > 0.0 && gamma0 < 1.0))
    throw std::invalid_argument("thm1_bound: gamma0 must lie in (0,1)");
  BoundReport rep;
  rep.theorem = TheoremId::UpDrift1;
  rep.unit = BoundUnit::Iterations;
  rep.inputs = {{"delta", delta},
                {"n", static_cast<double>(n)},
                {"gamma0", gamma0},
                {"k", static_cast<double>(k)}};
  double nd = static_cast<double>(n);
  double kd = static_cast<double>(k);
  if (nd - 1.0 > gamma0 * kd) rep.violated_preconditions.push_back("n-1 > gamma0*k");
  if (nd - 1.0 > kd / (1.0 + delta))
    rep.violated_preconditions.push_back("n-1 > k/(1+delta)");
  if (delta <= 1.0) {
    double d0 = d0_threshold(delta, nd);
    rep.bound = 21.6 / (1.0 - gamma0) * d0 * std::log(2.0 * d0) +
                3.6 * std::log2(nd) * ceil_guard(3.0 / delta);
    rep.auxiliary.emplace_back("d0", d0);
    rep.auxiliary.emplace_back("climb_success_floor", kClimbSuccessFloor);
    if (nd > 100.0 / delta)
      rep.auxiliary.emplace_back("return_prob_bound", kReturnProbSmallDelta);
  } else {
    rep.bound = 2.6 * log0(1.0 + delta, nd) + 81.0;
    rep.auxiliary.emplace_back("d0", std::min(32.0, nd));
    rep.auxiliary.emplace_back("return_prob_bound", kReturnProbLargeDelta);
  }
  if (n == 1) rep.auxiliary.emplace_back("degenerate_target", 1.0);
  finalize_validity(rep);
  return rep;
}

BoundReport nodrift_bound(double d0, double gamma0, std::int64_t k) {
  if (!(d0 >= 1.0)) throw std::invalid_argument("nodrift_bound: D0 must be >= 1");
  if (!(gamma0 >= 0.0 && gamma0 < 1.0))
    throw std::invalid_argument("nodrift_bound: gamma0 must lie in [0,1)");
  BoundReport rep;
  rep.theorem = TheoremId::NoDrift;
  rep.unit = BoundUnit::Iterations;
  rep.inputs = {{"d0", d0}, {"gamma0", gamma0}};
  if (k > 0) {
    rep.inputs.emplace_back("k", static_cast<double>(k));
    if (d0 - 1.0 > gamma0 * static_cast<double>(k))
      rep.violated_preconditions.push_back("D0-1 > gamma0*k");
  }
  if (d0 == 1.0) {
    // Nothing to show: the process starts at or above D0.
    rep.bound = 0.0;
    rep.auxiliary.emplace_back("degenerate_d0", 1.0);
  } else {
    rep.bound = 6.0 * d0 * std::log(2.0 * d0) / (1.0 - gamma0);
  }
  finalize_validity(rep);
  return rep;
}

BoundReport thm2_bound(double delta, std::int64_t n, double gamma0, std::int64_t k,
                       double e0) {
  if (!(e0 > 0.0)) throw std::domain_error("thm2_bound: E0 must be positive");
  BoundReport rep = thm1_bound(delta, n, gamma0, k);
  rep.theorem = TheoremId::UpDrift2;
  rep.inputs.emplace_back("e0", e0);
  double d0 = rep.aux("d0");
  if (delta <= 1.0) {
    rep.bound += 4.0 * d0 / (kClimbSuccessFloor * e0);
  } else {
    rep.bound += 128.0 / (0.78 * e0);
  }
  return rep;
}

BoundReport thm3_bound(double delta, std::int64_t n, std::int64_t k,
                       std::int64_t xmin, double p) {
  if (n < 1 || k < 1) throw std::invalid_argument("thm3_bound: n and k must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("thm3_bound: delta must be positive");
  if (xmin < 1) throw std::invalid_argument("thm3_bound: xmin must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("thm3_bound: p must lie in (0,1]");
  BoundReport rep;
  rep.theorem = TheoremId::UpDrift3;
  rep.unit = BoundUnit::Iterations;
  rep.inputs = {{"delta", delta},
                {"n", static_cast<double>(n)},
                {"k", static_cast<double>(k)},
                {"xmin", static_cast<double>(xmin)},
                {"p", p}};
  double nd = static_cast<double>(n);
  double kd = static_cast<double>(k);
  double d0 = d0_threshold_smooth(delta, nd);
  rep.auxiliary.emplace_back("d0", d0);
  if (static_cast<double>(xmin) < d0) rep.violated_preconditions.push_back("xmin < D0");
  if (nd - 1.0 > kd / (1.0 + delta))
    rep.violated_preconditions.push_back("n-1 > k/(1+delta)");
  double ratio = nd / static_cast<double>(xmin);
  if (delta <= 1.0) {
    double climb = ceil_guard(log0(2.0, ratio));
    rep.bound = 3.6 * (1.0 / p + climb * ceil_guard(3.0 / delta));
    rep.auxiliary.emplace_back("climb_window", climb * ceil_guard(3.0 / delta));
  } else {
    double climb = ceil_guard(log0(1.0 + delta, ratio));
    rep.bound = 1.3 / p + 2.6 * climb;
    rep.auxiliary.emplace_back("climb_window", climb);
  }
  finalize_validity(rep);
  return rep;
}

BoundReport level_new_bound(const LevelModel& model) {
  check_level_model(model);
  BoundReport rep;
  rep.theorem = TheoremId::LevelNew;
  rep.unit = BoundUnit::Evaluations;
  echo_level_inputs(rep, model);
  if (model.delta > 1.0) rep.violated_preconditions.push_back("delta > 1");
  if (model.gamma0 > 1.0 / (1.0 + model.delta))
    rep.violated_preconditions.push_back("gamma0 > 1/(1+delta)");
  double lam = static_cast<double>(model.lambda);
  double g0l = model.gamma0 * lam;
  if (!nearly_integral(g0l))
    rep.violated_preconditions.push_back("gamma0*lambda not integral");
  double d0 = std::min(std::ceil(100.0 / model.delta), g0l);
  double log_sum = 0.0;
  double inv_z_sum = 0.0;
  for (double zj : model.z) {
    log_sum += log0(2.0, 2.0 * g0l / (1.0 + zj * lam / d0));
    inv_z_sum += 1.0 / zj;
  }
  double t0 = (1e4 / model.delta) *
              (static_cast<double>(model.m) + log_sum / (1.0 - model.gamma0) +
               inv_z_sum / lam);
  double lambda_min = 338.0 / (model.gamma0 * model.delta) * std::log(8.0 * t0);
  if (lam < lambda_min)
    rep.violated_preconditions.push_back("lambda < lambda_min (G3)");
  rep.bound = 8.0 * lam * t0;
  rep.auxiliary = {{"d0", d0},
                   {"t0", t0},
                   {"lambda_min", lambda_min},
                   {"t0_prefactor", 1e4},
                   {"c1", 80000.0}};
  finalize_validity(rep);
  return rep;
}

BoundReport level_large_delta_bound(const LevelModel& model) {
  check_level_model(model);
  BoundReport rep;
  rep.theorem = TheoremId::LevelLargeDelta;
  rep.unit = BoundUnit::Evaluations;
  echo_level_inputs(rep, model);
  if (model.delta <= 1.0) rep.violated_preconditions.push_back("delta <= 1");
  if (model.gamma0 > 1.0 / (1.0 + model.delta))
    rep.violated_preconditions.push_back("gamma0 > 1/(1+delta)");
  double lam = static_cast<double>(model.lambda);
  double g0l = model.gamma0 * lam;
  if (!nearly_integral(g0l))
    rep.violated_preconditions.push_back("gamma0*lambda not integral");
  if (g0l < 32.0) rep.violated_preconditions.push_back("gamma0*lambda < 32");
  double d0 = std::min(32.0, g0l);
  double base = 1.0 + model.delta;
  double log_sum = 0.0;
  double inv_z_sum = 0.0;
  for (double zj : model.z) {
    log_sum += log0(base, 2.0 * g0l / (1.0 + zj * lam / d0));
    inv_z_sum += 1.0 / zj;
  }
  double t0 = 101.6 * static_cast<double>(model.m) + 2.6 * log_sum +
              657.0 / lam * inv_z_sum;
  double lambda_min = 4.0 / model.gamma0 * std::log(9.0 * t0);
  if (lam < lambda_min)
    rep.violated_preconditions.push_back("lambda < lambda_min (G3)");
  rep.bound = 9.0 * lam * t0;
  rep.auxiliary = {{"d0", d0}, {"t0", t0}, {"lambda_min", lambda_min}};
  finalize_validity(rep);
  return rep;
}

BoundReport level_old_bound(const LevelModel& model) {
  check_level_model(model);
  BoundReport rep;
  rep.theorem = TheoremId::LevelOld;
  rep.unit = BoundUnit::Evaluations;
  echo_level_inputs(rep, model);
  if (model.delta > 1.0) rep.violated_preconditions.push_back("delta > 1");
  double lam = static_cast<double>(model.lambda);
  double d2 = model.delta * model.delta;
  double sum = 0.0;
  for (double zj : model.z)
    sum += std::log(6.0 * model.delta * lam / (4.0 + zj * model.delta * lam)) +
           1.0 / (lam * zj);
  rep.bound = 8.0 * lam / d2 * sum;
  if (!model.z.empty()) {
    double z_star = *std::min_element(model.z.begin(), model.z.end());
    double lambda_min =
        4.0 / (model.gamma0 * d2) *
        std::log(128.0 * static_cast<double>(model.m) / (z_star * d2));
    rep.auxiliary.emplace_back("lambda_min", lambda_min);
    if (lam < lambda_min)
      rep.violated_preconditions.push_back("lambda < lambda_min (G3)");
  } else {
    rep.auxiliary.emplace_back("degenerate_single_level", 1.0);
  }
  finalize_validity(rep);
  return rep;
}

double additive_overshoot_bound(double x0, double expected_final, double drift) {
  if (!(drift > 0.0))
    throw std::domain_error("additive_overshoot_bound: drift must be positive");
  if (expected_final < x0)
    throw std::domain_error("additive_overshoot_bound: expected_final below x0");
  return (expected_final - x0) / drift;
}

std::optional<std::int64_t> suggest_feasible_lambda(LevelModel model) {
  const bool large = model.delta > 1.0;
  auto lambda_min_at = [&](std::int64_t lam) {
    model.lambda = lam;
    BoundReport rep = large ? level_large_delta_bound(model) : level_new_bound(model);
    return rep.aux("lambda_min");
  };
  double lam = std::max<double>(static_cast<double>(model.lambda), 2.0);
  bool converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    double next = lambda_min_at(static_cast<std::int64_t>(std::ceil(lam)));
    if (!(next > 0.0) || !std::isfinite(next)) return std::nullopt;
    if (std::fabs(next - lam) <= 0.5) {
      lam = std::max(lam, next);
      converged = true;
      break;
    }
    lam = next;
  }
  if (!converged) return std::nullopt;
  // Round up to an integer lambda with gamma0*lambda integral (and, for the
  // large-delta theorem, gamma0*lambda >= 32).
  auto lam_int = static_cast<std::int64_t>(std::ceil(lam - 1e-9));
  for (std::int64_t tries = 0; tries < 1000000; ++tries, ++lam_int) {
    double g0l = model.gamma0 * static_cast<double>(lam_int);
    if (!nearly_integral(g0l)) continue;
    if (large && g0l < 32.0) continue;
    if (static_cast<double>(lam_int) >= lambda_min_at(lam_int)) return lam_int;
  }
  return std::nullopt;
}

}  // namespace updrift
