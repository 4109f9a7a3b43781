#include "updrift/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace updrift {

namespace {

void kahan_add(double& sum, double& comp, double x) {
  double y = x - comp;
  double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

}  // namespace

void RunningStat::add(double x) {
  ++count_;
  kahan_add(sum_, sum_comp_, x);
  kahan_add(sumsq_, sumsq_comp_, x * x);
}

double RunningStat::mean() const {
  if (count_ == 0) throw std::logic_error("RunningStat::mean on empty sample");
  return sum_ / static_cast<double>(count_);
}

double RunningStat::variance() const {
  if (count_ < 2) return 0.0;
  double n = static_cast<double>(count_);
  double m = sum_ / n;
  double var = (sumsq_ - n * m * m) / (n - 1.0);
  return var > 0.0 ? var : 0.0;
}

double RunningStat::stderr_mean() const {
  if (count_ == 0) return 0.0;
  return std::sqrt(variance() / static_cast<double>(count_));
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes outside [0, trials]");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

ProportionEstimate make_proportion(std::int64_t successes, std::int64_t trials) {
  ProportionEstimate est;
  est.successes = successes;
  est.trials = trials;
  double n = static_cast<double>(trials);
  est.p_hat = static_cast<double>(successes) / n;
  est.stderr_hat = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
  est.wilson95 = wilson_interval(successes, trials);
  return est;
}

}  // namespace updrift
