#include "certmc/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "certmc/errors.hpp"
#include "certmc/specfun.hpp"

namespace certmc::bounds {
namespace {

// Largest plan the toolkit will schedule; anything beyond is reported
// infeasible instead of silently overflowing 64-bit counters.
constexpr double kMaxPlanned = 4611686018427387904.0;  // 2^62

double log_two_over(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  return std::log(2.0) - std::log(alpha);
}

void check_n(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
}

}  // namespace

std::string_view bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::bounded_sub_gaussian:
      return "bounded";
    case BoundKind::convex_lipschitz_cube:
      return "convex_lipschitz";
    case BoundKind::lipschitz_log_concave:
      return "lipschitz_log_concave";
  }
  return "unknown";
}

BoundSpec BoundSpec::bounded(double range_width) {
  if (!(range_width > 0.0)) {
    throw std::invalid_argument("BoundSpec::bounded: range width must be positive");
  }
  BoundSpec s;
  s.kind = BoundKind::bounded_sub_gaussian;
  s.range_width = range_width;
  return s;
}

BoundSpec BoundSpec::convex_lipschitz(double lipschitz) {
  if (!(lipschitz > 0.0)) {
    throw std::invalid_argument("BoundSpec::convex_lipschitz: constant must be positive");
  }
  BoundSpec s;
  s.kind = BoundKind::convex_lipschitz_cube;
  s.lipschitz = lipschitz;
  return s;
}

BoundSpec BoundSpec::log_concave_lipschitz(double lipschitz, double gamma) {
  if (!(lipschitz > 0.0)) {
    throw std::invalid_argument("BoundSpec::log_concave_lipschitz: constant must be positive");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("BoundSpec::log_concave_lipschitz: gamma must be positive");
  }
  BoundSpec s;
  s.kind = BoundKind::lipschitz_log_concave;
  s.lipschitz = lipschitz;
  s.gamma = gamma;
  return s;
}

BoundSpec BoundSpec::with_mean_lower_bound(double mu) const {
  if (!(mu > 0.0)) {
    throw std::invalid_argument("with_mean_lower_bound: bound must be positive");
  }
  BoundSpec s = *this;
  s.mean_lower_bound = mu;
  return s;
}

double BoundSpec::tail_rate() const {
  switch (kind) {
    case BoundKind::bounded_sub_gaussian:
      // proxy variance sigma^2 = range^2 / 4, tail exponent delta^2 n / (2 sigma^2)
      return 2.0 / (range_width * range_width);
    case BoundKind::convex_lipschitz_cube:
      return 1.0 / (2.0 * lipschitz * lipschitz);
    case BoundKind::lipschitz_log_concave:
      return gamma / (4.0 * lipschitz * lipschitz);
  }
  throw std::logic_error("BoundSpec: unknown kind");
}

TailBoundResult absolute_tail(const BoundSpec& spec, std::uint64_t n, double delta) {
  check_n(n);
  if (!(delta > 0.0)) throw std::invalid_argument("absolute_tail: delta must be positive");
  const double exponent = spec.tail_rate() * delta * delta * static_cast<double>(n);
  return {delta, n, 2.0 * std::exp(-exponent)};
}

TailBoundResult relative_tail(const BoundSpec& spec, std::uint64_t n, double delta_rel) {
  if (!spec.mean_lower_bound) {
    throw MissingMeanBound("relative_tail: spec carries no mean lower bound");
  }
  return absolute_tail(spec, n, delta_rel * *spec.mean_lower_bound);
}

double ci_halfwidth(const BoundSpec& spec, std::uint64_t n, double alpha) {
  check_n(n);
  return std::sqrt(log_two_over(alpha) / (spec.tail_rate() * static_cast<double>(n)));
}

SamplePlan plan_sample_size(const BoundSpec& spec, double delta_rel, double alpha) {
  if (!(delta_rel > 0.0)) {
    throw std::invalid_argument("plan_sample_size: delta must be positive");
  }
  if (!spec.mean_lower_bound) {
    throw MissingMeanBound("plan_sample_size: spec carries no mean lower bound");
  }
  const double mu = *spec.mean_lower_bound;
  const double n_exact =
      log_two_over(alpha) / (spec.tail_rate() * delta_rel * delta_rel * mu * mu);

  SamplePlan plan;
  plan.n_exact = n_exact;
  if (!std::isfinite(n_exact) || n_exact > kMaxPlanned) {
    plan.feasible = false;
    return plan;
  }
  plan.feasible = true;
  plan.n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(n_exact)));
  return plan;
}

std::vector<GrowthRow> growth_exponent_table(PlanFamily family, std::span<const int> p_list,
                                             double delta_rel, double alpha, double q,
                                             double gamma) {
  std::vector<GrowthRow> rows;
  rows.reserve(p_list.size());
  for (int p : p_list) {
    if (p < 1) throw std::invalid_argument("growth_exponent_table: dimensions must be >= 1");
    BoundSpec spec;
    double mu = 0.0;
    switch (family) {
      case PlanFamily::hypersphere:
        spec = BoundSpec::bounded(std::ldexp(1.0, p));
        mu = specfun::unit_ball_volume(p);
        break;
      case PlanFamily::qnorm: {
        if (!(q >= 1.0)) throw std::invalid_argument("growth_exponent_table: q must be >= 1");
        const double eta = std::max(1.0 / q - 0.5, 0.0);
        spec = BoundSpec::convex_lipschitz(std::pow(static_cast<double>(p), eta));
        mu = 2.0 / (2.0 + static_cast<double>(p));
        break;
      }
      case PlanFamily::arctan_mvn:
        spec = BoundSpec::log_concave_lipschitz(std::sqrt(static_cast<double>(p)), gamma);
        mu = std::numbers::pi / 4.0;
        break;
    }
    if (mu > 0.0) {
      spec = spec.with_mean_lower_bound(mu);
      rows.push_back({p, spec, plan_sample_size(spec, delta_rel, alpha)});
    } else {
      // The mean bound underflowed (astronomically thin ball); the plan is
      // beyond any cap, so mark it infeasible without arithmetic.
      SamplePlan plan;
      plan.feasible = false;
      plan.n_exact = std::numeric_limits<double>::infinity();
      rows.push_back({p, spec, plan});
    }
  }
  return rows;
}

}  // namespace certmc::bounds
