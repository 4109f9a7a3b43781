#include "updrift/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace updrift {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double RngStream::next_unit() {
  // 53 random bits -> [0,1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

namespace {

// Successes counted through geometric failure gaps; exact and O(kp) expected.
std::int64_t binomial_by_waiting(std::int64_t k, double p, RngStream& rng) {
  double log_q = std::log1p(-p);
  std::int64_t successes = 0;
  std::int64_t position = 0;
  while (true) {
    double u = 1.0 - rng.next_unit();  // (0, 1]
    position += static_cast<std::int64_t>(std::floor(std::log(u) / log_q)) + 1;
    if (position > k) return successes;
    ++successes;
  }
}

// CDF inversion walking outward from the mode, pmf maintained by the ratio
// recurrence. Expected O(sqrt(k p (1-p))) steps.
std::int64_t binomial_by_inversion(std::int64_t k, double p, RngStream& rng) {
  double q = 1.0 - p;
  auto mode = static_cast<std::int64_t>(
      std::floor((static_cast<double>(k) + 1.0) * p));
  if (mode > k) mode = k;
  double kd = static_cast<double>(k);
  double md = static_cast<double>(mode);
  double log_pm = std::lgamma(kd + 1.0) - std::lgamma(md + 1.0) -
                  std::lgamma(kd - md + 1.0) + md * std::log(p) +
                  (kd - md) * std::log(q);
  double pm = std::exp(log_pm);
  double u = rng.next_unit();
  double acc = pm;
  if (u < acc) return mode;
  double ratio = p / q;
  std::int64_t lo = mode - 1;
  std::int64_t hi = mode + 1;
  double p_lo = pm;
  double p_hi = pm;
  while (lo >= 0 || hi <= k) {
    if (hi <= k) {
      p_hi *= ratio * (kd - static_cast<double>(hi) + 1.0) / static_cast<double>(hi);
      acc += p_hi;
      if (u < acc) return hi;
      ++hi;
    }
    if (lo >= 0) {
      p_lo *= (static_cast<double>(lo) + 1.0) /
              (ratio * (kd - static_cast<double>(lo)));
      acc += p_lo;
      if (u < acc) return lo;
      --lo;
    }
  }
  return mode;  // only reachable through rounding residue in acc
}

}  // namespace

std::int64_t RngStream::binomial(std::int64_t trials, double p) {
  if (trials < 0) throw std::invalid_argument("binomial: negative trial count");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binomial: success probability " +
                            std::to_string(p) + " outside [0,1]");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  // Sample the rarer outcome so both methods see p <= 1/2.
  if (p > 0.5) return trials - binomial(trials, 1.0 - p);
  double mean = static_cast<double>(trials) * p;
  if (mean <= 30.0) return binomial_by_waiting(trials, p, *this);
  return binomial_by_inversion(trials, p, *this);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  return dist(engine_);
}

}  // namespace updrift
