#pragma once

#include <cstdint>

namespace updrift {

/// log Pr[Bin(k, p) = i], computed in log space (lgamma); valid for k up to
/// at least 10^6. p = 0 and p = 1 are handled as point masses.
double log_binomial_pmf(std::int64_t k, std::int64_t i, double p);

/// Pr[Bin(k, p) = i] = exp(log_binomial_pmf).
double binomial_pmf(std::int64_t k, std::int64_t i, double p);

/// Upper tail at the mean: Pr[Bin(k, p) >= k p], exact sum.
double binomial_tail_at_mean(std::int64_t k, double p);

/// E[min(Bin(k, p), cap)], exact sum. cap may be non-integral.
double binomial_expected_min(std::int64_t k, double p, double cap);

}  // namespace updrift
