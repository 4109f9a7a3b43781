#pragma once

#include <cstdint>

namespace updrift {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

/// Streaming mean/variance with compensated summation. Feeding the same
/// values in the same order always yields bit-identical results, which keeps
/// aggregation independent of how trials were scheduled.
class RunningStat {
 public:
  void add(double x);

  std::int64_t count() const { return count_; }
  double mean() const;
  /// Unbiased sample variance.
  double variance() const;
  /// Standard error of the mean.
  double stderr_mean() const;

 private:
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double sum_comp_ = 0.0;    // Kahan compensation for sum_
  double sumsq_ = 0.0;
  double sumsq_comp_ = 0.0;  // Kahan compensation for sumsq_
};

/// 95% (by default) Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                         double z = 1.959963984540054);

struct ProportionEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double p_hat = 0.0;
  double stderr_hat = 0.0;  // sqrt(p(1-p)/n)
  Interval wilson95;
};

ProportionEstimate make_proportion(std::int64_t successes, std::int64_t trials);

}  // namespace updrift
