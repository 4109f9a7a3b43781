#include "updrift/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "updrift/binomial.hpp"

namespace updrift {

namespace {
constexpr double kClosedFormTol = 1e-12;
}

double g_potential(double x) {
  if (x < 0.0)
    throw std::domain_error("g_potential: negative input " + std::to_string(x));
  if (x == 0.0) return 0.0;
  return x * std::log(x);
}

double taylor_upper(double a, double x) {
  if (a <= 0.0) throw std::domain_error("taylor_upper: expansion point must be positive");
  if (x < 0.0) throw std::domain_error("taylor_upper: negative input");
  double d = x - a;
  return a * std::log(a) + d * (1.0 + std::log(a)) + d * d / a;
}

double taylor_lower(double a, double x) {
  if (a <= 0.0) throw std::domain_error("taylor_lower: expansion point must be positive");
  if (x < 0.0) throw std::domain_error("taylor_lower: negative input");
  double d = x - a;
  return a * std::log(a) + d * (1.0 + std::log(a)) + d * d / (2.0 * a) -
         d * d * d / (6.0 * a * a);
}

MomentTriple binomial_central_moments(std::int64_t k, double p) {
  if (k < 1) throw std::invalid_argument("binomial_central_moments: k must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binomial_central_moments: p outside [0,1]");
  double kd = static_cast<double>(k);
  MomentTriple m;
  m.mean = kd * p;
  m.variance = kd * p * (1.0 - p);
  m.third_central = kd * p * (1.0 - p) * (1.0 - 2.0 * p);
  return m;
}

double exact_binomial_g_expectation(std::int64_t k, double p) {
  if (k < 1) throw std::invalid_argument("exact_binomial_g_expectation: k must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("exact_binomial_g_expectation: p outside [0,1]");
  if (k > kExactEnumerationCutoff)
    throw std::length_error("exact_binomial_g_expectation: k = " + std::to_string(k) +
                            " above enumeration cutoff " +
                            std::to_string(kExactEnumerationCutoff));
  // Point-mass ends are exact by construction.
  if (p == 0.0) return 0.0;
  if (p == 1.0) return g_potential(static_cast<double>(k));
  double acc = 0.0;
  double comp = 0.0;
  for (std::int64_t i = 2; i <= k; ++i) {  // g(0) = g(1) = 0
    double term = binomial_pmf(k, i, p) * g_potential(static_cast<double>(i));
    double y = term - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

GDriftReport check_g_drift_bounds(std::int64_t k, double p) {
  GDriftReport r;
  r.k = k;
  r.p = p;
  r.expectation = exact_binomial_g_expectation(k, p);
  double mean = static_cast<double>(k) * p;
  r.lower_bound = g_potential(mean) + (1.0 - p) / 3.0;
  r.upper_bound = g_potential(mean) + (1.0 - p);
  r.slack_lb = r.expectation - r.lower_bound;
  r.slack_ub = r.upper_bound - r.expectation;
  r.lb_applicable = p >= 1.0 / static_cast<double>(k);
  r.lb_holds = r.lb_applicable && r.slack_lb >= -kClosedFormTol;
  r.ub_holds = r.slack_ub >= -kClosedFormTol;
  return r;
}

}  // namespace updrift
