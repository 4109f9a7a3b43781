#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "updrift/binomial.hpp"
#include "updrift/rng.hpp"

using namespace updrift;

TEST_CASE("substreams are reproducible and distinct") {
  RngStream a = RngStream::substream(42, 7);
  RngStream b = RngStream::substream(42, 7);
  RngStream c = RngStream::substream(42, 8);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  bool differs = false;
  RngStream a2 = RngStream::substream(42, 7);
  for (int i = 0; i < 16; ++i) differs = differs || (a2.next_u64() != c.next_u64());
  CHECK(differs);
}

TEST_CASE("unit doubles stay in [0,1)") {
  RngStream rng(1);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("binomial sampler is unbiased across both methods") {
  // Parameter points covering the waiting-time path (small mean), the
  // inversion path (large mean), and the p > 1/2 reflection. Five
  // simultaneous gates, so each uses a 4-sigma band; the sample size keeps
  // a libstdc++-scale mean bias (0.2% at Bin(1000, 0.01)) above 6 sigma.
  struct Point {
    std::int64_t k;
    double p;
  };
  const Point points[] = {{10, 0.01}, {1000, 0.01}, {2000, 0.12}, {4000, 0.5}, {40, 0.875}};
  const std::int64_t samples = 1000000;
  for (const auto& pt : points) {
    RngStream rng(mix64(static_cast<std::uint64_t>(pt.k)));
    double sum = 0.0;
    for (std::int64_t i = 0; i < samples; ++i)
      sum += static_cast<double>(rng.binomial(pt.k, pt.p));
    double mean = sum / static_cast<double>(samples);
    double expect = static_cast<double>(pt.k) * pt.p;
    double se = std::sqrt(expect * (1.0 - pt.p) / static_cast<double>(samples));
    CHECK(std::fabs(mean - expect) <= 4.0 * se);
  }
}

TEST_CASE("binomial sampler matches the exact pmf") {
  const std::int64_t k = 60;
  const double p = 0.2;
  const std::int64_t samples = 400000;
  RngStream rng(55);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k) + 1, 0);
  for (std::int64_t i = 0; i < samples; ++i)
    ++counts[static_cast<std::size_t>(rng.binomial(k, p))];
  double chi2 = 0.0;
  int dof = 0;
  for (std::int64_t i = 0; i <= k; ++i) {
    double expected = binomial_pmf(k, i, p) * static_cast<double>(samples);
    if (expected < 10.0) continue;
    double diff = static_cast<double>(counts[static_cast<std::size_t>(i)]) - expected;
    chi2 += diff * diff / expected;
    ++dof;
  }
  CHECK(dof >= 20);
  CHECK(chi2 <= dof + 4.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("binomial sampler endpoint cases") {
  RngStream rng(3);
  CHECK(rng.binomial(10, 0.0) == 0);
  CHECK(rng.binomial(10, 1.0) == 10);
  CHECK(rng.binomial(0, 0.5) == 0);
  for (int i = 0; i < 1000; ++i) {
    std::int64_t v = rng.binomial(5, 0.5);
    CHECK(v >= 0);
    CHECK(v <= 5);
  }
  CHECK_THROWS_AS(rng.binomial(10, 1.5), std::domain_error);
}
