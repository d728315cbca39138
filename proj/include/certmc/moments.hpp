#pragma once

#include <cstdint>

namespace certmc {

// One-pass mean/variance accumulator (Welford's update).  Accumulators over
// disjoint chunks combine with merge_moments using Chan's pairwise formula,
// which is what lets the parallel estimator reproduce the serial result
// bit for bit when chunks are merged in a fixed order.
struct StreamingMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations from the running mean

  void push(double x) {
    ++count;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(count);
    const double d2 = x - mean;
    m2 += d1 * d2;
  }

  // Unbiased sample variance; zero until two values have been seen.
  double variance() const {
    if (count < 2) return 0.0;
    return m2 / static_cast<double>(count - 1);
  }
};

inline StreamingMoments merge_moments(const StreamingMoments& a, const StreamingMoments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  StreamingMoments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = na + nb;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (nb / n);
  out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
  return out;
}

}  // namespace certmc
