#include "updrift/binomial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace updrift {

namespace {

void check_kp(std::int64_t k, double p) {
  if (k < 1) throw std::invalid_argument("binomial pmf: k must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binomial pmf: p outside [0,1]");
}

}  // namespace

double log_binomial_pmf(std::int64_t k, std::int64_t i, double p) {
  check_kp(k, p);
  if (i < 0 || i > k) return -std::numeric_limits<double>::infinity();
  if (p == 0.0)
    return i == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p == 1.0)
    return i == k ? 0.0 : -std::numeric_limits<double>::infinity();
  double kd = static_cast<double>(k);
  double id = static_cast<double>(i);
  double log_choose = std::lgamma(kd + 1.0) - std::lgamma(id + 1.0) -
                      std::lgamma(kd - id + 1.0);
  return log_choose + id * std::log(p) + (kd - id) * std::log1p(-p);
}

double binomial_pmf(std::int64_t k, std::int64_t i, double p) {
  double lp = log_binomial_pmf(k, i, p);
  return std::isinf(lp) ? 0.0 : std::exp(lp);
}

double binomial_tail_at_mean(std::int64_t k, double p) {
  check_kp(k, p);
  double mean = static_cast<double>(k) * p;
  // First integer >= kp; guard against kp landing a hair above an integer
  // from rounding.
  auto lo = static_cast<std::int64_t>(std::ceil(mean - 1e-9));
  if (lo < 0) lo = 0;
  double tail = 0.0;
  double comp = 0.0;
  for (std::int64_t i = k; i >= lo; --i) {
    double y = binomial_pmf(k, i, p) - comp;
    double t = tail + y;
    comp = (t - tail) - y;
    tail = t;
  }
  return tail;
}

double binomial_expected_min(std::int64_t k, double p, double cap) {
  check_kp(k, p);
  if (cap < 0.0) throw std::invalid_argument("binomial_expected_min: negative cap");
  double acc = 0.0;
  double comp = 0.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    double v = std::min(static_cast<double>(i), cap) * binomial_pmf(k, i, p);
    double y = v - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

}  // namespace updrift
