#include "smqs/harness/stats.hpp"

#include <algorithm>
#include <cmath>

namespace smqs::harness {

RateEstimate wilson(std::size_t successes, std::size_t total, double z) {
  RateEstimate est;
  est.successes = successes;
  est.total = total;
  if (total == 0) return est;
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  est.value = p;
  est.low = std::clamp(std::min(centre - half, p), 0.0, 1.0);
  est.high = std::clamp(std::max(centre + half, p), 0.0, 1.0);
  return est;
}

double binomial_cdf(std::size_t k, std::size_t trials, double p) {
  if (k >= trials) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  // log-space pmf avoids underflow for large trial counts
  double total = 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double ln = std::lgamma(static_cast<double>(trials) + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    const double x = static_cast<double>(i);
    const double lpmf = ln - std::lgamma(x + 1) - std::lgamma(static_cast<double>(trials) - x + 1) + x * lp +
                        (static_cast<double>(trials) - x) * lq;
    total += std::exp(lpmf);
  }
  return std::min(total, 1.0);
}

double proportion_sigma(double p, std::size_t total) {
  if (total == 0) return 0.0;
  return std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(total));
}

bool within_band(double observed, double expected, double sigma, double bands) {
  return std::abs(observed - expected) <= std::max(bands * sigma, 1e-12);
}

}  // namespace smqs::harness
