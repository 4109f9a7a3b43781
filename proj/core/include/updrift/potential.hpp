#pragma once

#include <cstdint>

namespace updrift {

/// Potential function x ln x with g(0) := 0 (continuous extension).
/// Throws std::domain_error for negative input.
double g_potential(double x);

/// Quadratic upper estimate of g around the expansion point a:
///   a ln a + (x-a)(1+ln a) + (x-a)^2 / a.
double taylor_upper(double a, double x);

/// Cubic lower estimate of g around the expansion point a:
///   a ln a + (x-a)(1+ln a) + (x-a)^2 / (2a) - (x-a)^3 / (6a^2).
double taylor_lower(double a, double x);

struct MomentTriple {
  double mean = 0.0;           // kp
  double variance = 0.0;       // kp(1-p)
  double third_central = 0.0;  // kp(1-p)(1-2p)
};

MomentTriple binomial_central_moments(std::int64_t k, double p);

/// Exact enumeration cutoff; above this the log-space pmf sum would be slow
/// and its accumulated error is no longer negligible.
inline constexpr std::int64_t kExactEnumerationCutoff = 10000;

/// E[g(Bin(k, p))], exact enumeration over the full support in log space.
/// Throws std::length_error for k above kExactEnumerationCutoff.
double exact_binomial_g_expectation(std::int64_t k, double p);

struct GDriftReport {
  std::int64_t k = 0;
  double p = 0.0;
  double expectation = 0.0;   // E[g(Bin(k,p))]
  double lower_bound = 0.0;   // g(kp) + (1-p)/3
  double upper_bound = 0.0;   // g(kp) + (1-p)
  double slack_lb = 0.0;      // expectation - lower_bound
  double slack_ub = 0.0;      // upper_bound - expectation
  bool lb_applicable = false; // the (1-p)/3 form needs p >= 1/k
  bool lb_holds = false;
  bool ub_holds = false;
};

/// Checks E[g(X)] against the drift-of-g corollaries via exact enumeration.
GDriftReport check_g_drift_bounds(std::int64_t k, double p);

}  // namespace updrift
