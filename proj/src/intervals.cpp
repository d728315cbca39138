#include "certmc/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "certmc/specfun.hpp"

namespace certmc::intervals {
namespace {

void check_args(std::uint64_t x, std::uint64_t k, double alpha) {
  if (k == 0) throw std::invalid_argument("binomial interval: trials must be positive");
  if (x > k) throw std::invalid_argument("binomial interval: successes exceed trials");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("binomial interval: alpha must lie in (0, 1)");
  }
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// log C(k, x) via ln_gamma, stable for large k.
double log_choose(std::uint64_t k, std::uint64_t x) {
  return specfun::ln_gamma(static_cast<double>(k) + 1.0) -
         specfun::ln_gamma(static_cast<double>(x) + 1.0) -
         specfun::ln_gamma(static_cast<double>(k - x) + 1.0);
}

}  // namespace

std::string_view method_name(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::hoeffding:
      return "hoeffding";
    case IntervalMethod::clopper_pearson:
      return "clopper_pearson";
    case IntervalMethod::jeffreys:
      return "jeffreys";
  }
  return "unknown";
}

BinomialInterval hoeffding_interval(std::uint64_t x, std::uint64_t k, double alpha) {
  check_args(x, k, alpha);
  const double proportion = static_cast<double>(x) / static_cast<double>(k);
  const double halfwidth =
      std::sqrt((std::log(2.0) - std::log(alpha)) / (2.0 * static_cast<double>(k)));
  return {clip01(proportion - halfwidth), clip01(proportion + halfwidth),
          IntervalMethod::hoeffding, alpha, x, k};
}

BinomialInterval clopper_pearson(std::uint64_t x, std::uint64_t k, double alpha) {
  check_args(x, k, alpha);
  const double kd = static_cast<double>(k);
  const double xd = static_cast<double>(x);
  const double lower =
      x == 0 ? 0.0 : specfun::inv_reg_inc_beta(xd, kd - xd + 1.0, 0.5 * alpha);
  const double upper =
      x == k ? 1.0 : specfun::inv_reg_inc_beta(xd + 1.0, kd - xd, 1.0 - 0.5 * alpha);
  return {clip01(lower), clip01(upper), IntervalMethod::clopper_pearson, alpha, x, k};
}

BinomialInterval jeffreys_interval(std::uint64_t x, std::uint64_t k, double alpha) {
  check_args(x, k, alpha);
  const double a = static_cast<double>(x) + 0.5;
  const double b = static_cast<double>(k - x) + 0.5;
  // Plain posterior quantiles; at x = 0 the lower endpoint is a small positive
  // number rather than 0, which is exactly what costs Jeffreys its coverage
  // near the edges of the parameter range.
  const double lower = specfun::inv_reg_inc_beta(a, b, 0.5 * alpha);
  const double upper = specfun::inv_reg_inc_beta(a, b, 1.0 - 0.5 * alpha);
  return {clip01(lower), clip01(upper), IntervalMethod::jeffreys, alpha, x, k};
}

std::vector<BinomialInterval> interval_table(IntervalMethod method, std::uint64_t k,
                                             double alpha) {
  check_args(0, k, alpha);
  std::vector<BinomialInterval> table;
  table.reserve(k + 1);
  for (std::uint64_t x = 0; x <= k; ++x) {
    switch (method) {
      case IntervalMethod::hoeffding:
        table.push_back(hoeffding_interval(x, k, alpha));
        break;
      case IntervalMethod::clopper_pearson:
        table.push_back(clopper_pearson(x, k, alpha));
        break;
      case IntervalMethod::jeffreys:
        table.push_back(jeffreys_interval(x, k, alpha));
        break;
    }
  }
  return table;
}

double exact_coverage(std::span<const BinomialInterval> table, double p_true) {
  if (table.empty()) throw std::invalid_argument("exact_coverage: empty table");
  if (!(p_true >= 0.0 && p_true <= 1.0)) {
    throw std::invalid_argument("exact_coverage: p_true must lie in [0, 1]");
  }
  const std::uint64_t k = table.size() - 1;
  if (p_true == 0.0) return table[0].contains(0.0) ? 1.0 : 0.0;
  if (p_true == 1.0) return table[k].contains(1.0) ? 1.0 : 0.0;

  const double log_p = std::log(p_true);
  const double log_q = std::log1p(-p_true);
  double coverage = 0.0;
  for (std::uint64_t x = 0; x <= k; ++x) {
    if (!table[x].contains(p_true)) continue;
    const double log_pmf = log_choose(k, x) + static_cast<double>(x) * log_p +
                           static_cast<double>(k - x) * log_q;
    coverage += std::exp(log_pmf);
  }
  return std::min(coverage, 1.0);
}

double exact_coverage(IntervalMethod method, std::uint64_t k, double alpha, double p_true) {
  const auto table = interval_table(method, k, alpha);
  return exact_coverage(table, p_true);
}

}  // namespace certmc::intervals
