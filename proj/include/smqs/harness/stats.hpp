#pragma once

#include <cstddef>

namespace smqs::harness {

/// Observed proportion with its Wilson score interval.
struct RateEstimate {
  std::size_t successes = 0;
  std::size_t total = 0;
  double value = 0.0;
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval; total == 0 gives value 0 and the full [0, 1] interval.
RateEstimate wilson(std::size_t successes, std::size_t total, double z = kZ95);

/// P(X <= k) for X ~ Binomial(trials, p).
double binomial_cdf(std::size_t k, std::size_t trials, double p);

/// Standard deviation of a proportion over `total` Bernoulli(p) samples.
double proportion_sigma(double p, std::size_t total);

/// |observed - expected| <= bands * sigma, with a 1e-12 floor for point masses.
bool within_band(double observed, double expected, double sigma, double bands = 4.0);

}  // namespace smqs::harness
