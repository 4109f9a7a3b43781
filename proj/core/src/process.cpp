#include "updrift/process.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "updrift/binomial.hpp"

namespace updrift {

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::Deterministic: return "deterministic";
    case ProcessKind::Jackpot: return "jackpot";
    case ProcessKind::BinomialClamped: return "binomial-clamped";
    case ProcessKind::BinomialWithZero: return "binomial-zero";
    case ProcessKind::BinomialFreshStart: return "binomial-fresh";
    case ProcessKind::UnbiasedBinomial: return "unbiased";
  }
  return "unknown";
}

std::optional<ProcessKind> process_kind_from_string(const std::string& name) {
  if (name == "deterministic") return ProcessKind::Deterministic;
  if (name == "jackpot") return ProcessKind::Jackpot;
  if (name == "binomial-clamped") return ProcessKind::BinomialClamped;
  if (name == "binomial-zero") return ProcessKind::BinomialWithZero;
  if (name == "binomial-fresh") return ProcessKind::BinomialFreshStart;
  if (name == "unbiased") return ProcessKind::UnbiasedBinomial;
  return std::nullopt;
}

ZeroLaw ZeroLaw::point_mass(std::int64_t v) {
  if (v < 0) throw std::invalid_argument("ZeroLaw::point_mass: negative value");
  ZeroLaw law;
  law.kind = Kind::PointMass;
  law.point = v;
  return law;
}

ZeroLaw ZeroLaw::binomial(std::int64_t trials, double p) {
  if (trials < 1) throw std::invalid_argument("ZeroLaw::binomial: trials must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("ZeroLaw::binomial: p outside [0,1]");
  ZeroLaw law;
  law.kind = Kind::Binomial;
  law.trials = trials;
  law.prob = p;
  return law;
}

ZeroLaw ZeroLaw::tabulated(std::vector<std::int64_t> values, std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("ZeroLaw::tabulated: values/weights size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) throw std::invalid_argument("ZeroLaw::tabulated: negative value");
    if (weights[i] < 0.0) throw std::invalid_argument("ZeroLaw::tabulated: negative weight");
    total += weights[i];
  }
  if (total <= 0.0) throw std::invalid_argument("ZeroLaw::tabulated: zero total weight");
  ZeroLaw law;
  law.kind = Kind::Tabulated;
  law.values = std::move(values);
  law.weights = std::move(weights);
  return law;
}

std::int64_t ZeroLaw::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::PointMass:
      return point;
    case Kind::Binomial:
      return rng.binomial(trials, prob);
    case Kind::Tabulated: {
      double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double u = rng.next_unit() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        acc += weights[i];
        if (u < acc) return values[i];
      }
      return values.back();
    }
  }
  throw std::logic_error("ZeroLaw::sample: bad kind");
}

double ZeroLaw::expected_min(double cap) const {
  switch (kind) {
    case Kind::PointMass:
      return std::min(static_cast<double>(point), cap);
    case Kind::Binomial:
      return binomial_expected_min(trials, prob, cap);
    case Kind::Tabulated: {
      double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i)
        acc += weights[i] * std::min(static_cast<double>(values[i]), cap);
      return acc / total;
    }
  }
  throw std::logic_error("ZeroLaw::expected_min: bad kind");
}

double ZeroLaw::pmf(std::int64_t v) const {
  switch (kind) {
    case Kind::PointMass:
      return v == point ? 1.0 : 0.0;
    case Kind::Binomial:
      return (v >= 0 && v <= trials) ? binomial_pmf(trials, v, prob) : 0.0;
    case Kind::Tabulated: {
      double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == v) acc += weights[i];
      return acc / total;
    }
  }
  throw std::logic_error("ZeroLaw::pmf: bad kind");
}

double ZeroLaw::tail_at_least(std::int64_t v) const {
  switch (kind) {
    case Kind::PointMass:
      return point >= v ? 1.0 : 0.0;
    case Kind::Binomial: {
      double acc = 0.0;
      for (std::int64_t i = std::max<std::int64_t>(v, 0); i <= trials; ++i)
        acc += binomial_pmf(trials, i, prob);
      return acc;
    }
    case Kind::Tabulated: {
      double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] >= v) acc += weights[i];
      return acc / total;
    }
  }
  throw std::logic_error("ZeroLaw::tail_at_least: bad kind");
}

double d0_threshold(double delta, double n) {
  if (delta <= 0.0) throw std::domain_error("d0_threshold: delta must be positive");
  if (delta <= 1.0) return std::min(std::ceil(100.0 / delta), n);
  return std::min(32.0, n);
}

double d0_threshold_smooth(double delta, double n) {
  if (delta <= 0.0) throw std::domain_error("d0_threshold_smooth: delta must be positive");
  if (delta <= 1.0) return std::min(100.0 / delta, n);
  return std::min(32.0, n);
}

void validate(const ProcessSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("ProcessSpec: k must be >= 1");
  if (spec.target_n < 1) throw std::invalid_argument("ProcessSpec: target_n must be >= 1");
  if (!(spec.delta > 0.0)) throw std::invalid_argument("ProcessSpec: delta must be positive");
  if (!(spec.gamma0 > 0.0 && spec.gamma0 < 1.0))
    throw std::invalid_argument("ProcessSpec: gamma0 must lie in (0,1)");
  if (spec.x0 < 0) throw std::invalid_argument("ProcessSpec: x0 must be nonnegative");
  switch (spec.kind) {
    case ProcessKind::Deterministic:
      if (spec.x0 < 1)
        throw std::invalid_argument("ProcessSpec: deterministic process needs x0 >= 1");
      break;
    case ProcessKind::Jackpot:
      if (spec.target_n < 2)
        throw std::invalid_argument("ProcessSpec: jackpot process needs target_n >= 2");
      if (spec.delta > static_cast<double>(spec.target_n - 1))
        throw std::invalid_argument(
            "ProcessSpec: jackpot success probability delta/(n-1) exceeds 1");
      if (spec.x0 < 1)
        throw std::invalid_argument("ProcessSpec: jackpot process needs x0 >= 1");
      break;
    case ProcessKind::BinomialClamped:
    case ProcessKind::UnbiasedBinomial:
      if (spec.x0 < 1)
        throw std::invalid_argument("ProcessSpec: positive-state process needs x0 >= 1");
      break;
    case ProcessKind::BinomialWithZero:
      if (!spec.zero_law)
        throw std::invalid_argument("ProcessSpec: BinomialWithZero needs a zero_law");
      break;
    case ProcessKind::BinomialFreshStart:
      if (!spec.fresh_start)
        throw std::invalid_argument("ProcessSpec: BinomialFreshStart needs fresh_start");
      if (spec.fresh_start->xmin < 1)
        throw std::invalid_argument("ProcessSpec: fresh_start.xmin must be >= 1");
      if (!(spec.fresh_start->p > 0.0 && spec.fresh_start->p <= 1.0))
        throw std::invalid_argument("ProcessSpec: fresh_start.p must lie in (0,1]");
      break;
  }
}

std::vector<std::string> precondition_violations(const ProcessSpec& spec) {
  std::vector<std::string> out;
  bool binomial_kind = spec.kind == ProcessKind::BinomialClamped ||
                       spec.kind == ProcessKind::BinomialWithZero ||
                       spec.kind == ProcessKind::BinomialFreshStart ||
                       spec.kind == ProcessKind::UnbiasedBinomial;
  if (binomial_kind) {
    double nm1 = static_cast<double>(spec.target_n - 1);
    if (nm1 > spec.gamma0 * static_cast<double>(spec.k))
      out.push_back("target_n-1 > gamma0*k");
    if (spec.kind != ProcessKind::UnbiasedBinomial &&
        nm1 > static_cast<double>(spec.k) / (1.0 + spec.delta))
      out.push_back("target_n-1 > k/(1+delta)");
  }
  if (spec.kind == ProcessKind::BinomialFreshStart && spec.fresh_start) {
    double d0 = d0_threshold_smooth(spec.delta, static_cast<double>(spec.target_n));
    if (static_cast<double>(spec.fresh_start->xmin) < d0)
      out.push_back("fresh_start.xmin < D0");
  }
  return out;
}

namespace {

// Success probability for the drift step, with a little head room for the
// roundoff of (1+delta)*x/k when the exact value is 1.
double drift_probability(const ProcessSpec& spec, std::int64_t state) {
  double p = (1.0 + spec.delta) * static_cast<double>(state) /
             static_cast<double>(spec.k);
  if (p > 1.0) {
    if (p > 1.0 + 1e-12)
      throw std::domain_error(
          "step: success probability (1+delta)*x/k = " + std::to_string(p) +
          " exceeds 1; the binomial condition requires (1+delta)*x <= k");
    p = 1.0;
  }
  return p;
}

struct TrackedState {
  std::int64_t value;
  double track;  // equals value except for the deterministic kind
};

TrackedState step_tracked(const ProcessSpec& spec, TrackedState s, RngStream& rng) {
  if (spec.kind == ProcessKind::Deterministic) {
    double next = (1.0 + spec.delta) * s.track;
    return {static_cast<std::int64_t>(std::floor(next)), next};
  }
  std::int64_t v = step(spec, s.value, rng);
  return {v, static_cast<double>(v)};
}

}  // namespace

std::int64_t step(const ProcessSpec& spec, std::int64_t state, RngStream& rng) {
  switch (spec.kind) {
    case ProcessKind::Deterministic: {
      if (state < 1) throw std::domain_error("step: deterministic state must be >= 1");
      return static_cast<std::int64_t>(
          std::floor((1.0 + spec.delta) * static_cast<double>(state)));
    }
    case ProcessKind::Jackpot: {
      if (state < 1) throw std::domain_error("step: jackpot state must be >= 1");
      double psucc = spec.delta / static_cast<double>(spec.target_n - 1);
      return rng.bernoulli(psucc) ? spec.target_n : 1;
    }
    case ProcessKind::BinomialClamped: {
      if (state < 1) throw std::domain_error("step: clamped state must be >= 1");
      return std::max<std::int64_t>(1, rng.binomial(spec.k, drift_probability(spec, state)));
    }
    case ProcessKind::BinomialWithZero: {
      if (state == 0) return spec.zero_law->sample(rng);
      return rng.binomial(spec.k, drift_probability(spec, state));
    }
    case ProcessKind::BinomialFreshStart: {
      const FreshStart& fs = *spec.fresh_start;
      if (state >= fs.xmin)
        return rng.binomial(spec.k, drift_probability(spec, state));
      return rng.bernoulli(fs.p) ? fs.xmin : 0;
    }
    case ProcessKind::UnbiasedBinomial: {
      if (state < 1) throw std::domain_error("step: unbiased state must be >= 1");
      double p = static_cast<double>(state) / static_cast<double>(spec.k);
      if (p > 1.0)
        throw std::domain_error("step: unbiased state exceeds k");
      return std::max<std::int64_t>(1, rng.binomial(spec.k, p));
    }
  }
  throw std::logic_error("step: bad process kind");
}

Trajectory run_to_target(const ProcessSpec& spec, std::int64_t cap, RngStream& rng) {
  validate(spec);
  if (cap < 1) throw std::invalid_argument("run_to_target: cap must be >= 1");
  Trajectory traj;
  TrackedState s{spec.x0, static_cast<double>(spec.x0)};
  traj.states.push_back(s.value);
  if (s.value >= spec.target_n) {
    traj.hit_time = 0;
    return traj;
  }
  for (std::int64_t t = 1; t <= cap; ++t) {
    s = step_tracked(spec, s, rng);
    traj.states.push_back(s.value);
    if (s.value >= spec.target_n) {
      traj.hit_time = t;
      return traj;
    }
  }
  traj.censored = true;
  return traj;
}

std::optional<std::int64_t> hitting_time(const ProcessSpec& spec, std::int64_t cap,
                                         RngStream& rng) {
  validate(spec);
  if (cap < 1) throw std::invalid_argument("hitting_time: cap must be >= 1");
  TrackedState s{spec.x0, static_cast<double>(spec.x0)};
  if (s.value >= spec.target_n) return 0;
  for (std::int64_t t = 1; t <= cap; ++t) {
    s = step_tracked(spec, s, rng);
    if (s.value >= spec.target_n) return t;
  }
  return std::nullopt;
}

ReturnWatchRecord run_with_return_watch(const ProcessSpec& spec, std::int64_t hi,
                                        std::int64_t lo, std::int64_t cap,
                                        RngStream& rng) {
  validate(spec);
  if (!(lo < hi && hi <= spec.target_n))
    throw std::invalid_argument("run_with_return_watch: need lo < hi <= target_n");
  if (cap < 1) throw std::invalid_argument("run_with_return_watch: cap must be >= 1");
  ReturnWatchRecord rec;
  rec.hi_threshold = hi;
  rec.lo_threshold = lo;
  rec.hi_is_target = hi == spec.target_n;
  TrackedState s{spec.x0, static_cast<double>(spec.x0)};
  auto observe = [&](std::int64_t v) {
    if (!rec.reached_hi) {
      if (v >= hi) rec.reached_hi = true;
    } else if (v <= lo) {
      rec.returned_lo = true;
    }
  };
  observe(s.value);
  if (s.value >= spec.target_n) {
    rec.hit_target = true;
    return rec;
  }
  for (std::int64_t t = 1; t <= cap; ++t) {
    s = step_tracked(spec, s, rng);
    observe(s.value);
    if (s.value >= spec.target_n) {
      rec.hit_target = true;
      break;
    }
    if (rec.returned_lo) break;
  }
  return rec;
}

}  // namespace updrift
