#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace certmc::intervals {

enum class IntervalMethod { hoeffding, clopper_pearson, jeffreys };

std::string_view method_name(IntervalMethod method);

// Two-sided level-(1 - alpha) confidence interval for a binomial proportion,
// clipped to [0, 1].
struct BinomialInterval {
  double lower = 0.0;
  double upper = 1.0;
  IntervalMethod method = IntervalMethod::hoeffding;
  double alpha = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  double width() const { return upper - lower; }
  bool contains(double p) const { return lower <= p && p <= upper; }
};

// Distribution-free interval from the two-sided tail bound for means of
// [0, 1]-valued draws: x/k -+ sqrt(log(2/alpha) / (2k)).
BinomialInterval hoeffding_interval(std::uint64_t x, std::uint64_t k, double alpha);

// Classical exact interval from beta quantiles:
//   lower = Beta(x, k - x + 1) quantile at alpha/2      (0 when x = 0)
//   upper = Beta(x + 1, k - x) quantile at 1 - alpha/2  (1 when x = k)
BinomialInterval clopper_pearson(std::uint64_t x, std::uint64_t k, double alpha);

// Equal-tailed credible interval of the Beta(x + 1/2, k - x + 1/2) posterior
// (Jeffreys prior), without endpoint special-casing.
BinomialInterval jeffreys_interval(std::uint64_t x, std::uint64_t k, double alpha);

// All k + 1 intervals of one method, indexed by the success count.  Studies
// use these tables so replications and coverage integrals are lookups.
std::vector<BinomialInterval> interval_table(IntervalMethod method, std::uint64_t k, double alpha);

// P(p_true lands in the realized interval) under Binomial(k, p_true), summed
// exactly from the log-space pmf.
double exact_coverage(std::span<const BinomialInterval> table, double p_true);
double exact_coverage(IntervalMethod method, std::uint64_t k, double alpha, double p_true);

}  // namespace certmc::intervals
