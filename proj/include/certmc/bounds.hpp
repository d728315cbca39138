#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace certmc::bounds {

// The three structural assumptions under which a sample mean of n draws gets a
// two-sided sub-Gaussian tail 2 exp(-rate * delta^2 * n):
//
//   bounded_sub_gaussian    f in [a, b]; proxy variance (b-a)^2/4, rate 2/(b-a)^2
//   convex_lipschitz_cube   f convex or concave, L-Lipschitz on a cube; rate 1/(2 L^2)
//   lipschitz_log_concave   f L-Lipschitz, density gamma-strongly log-concave;
//                           rate gamma/(4 L^2)
enum class BoundKind { bounded_sub_gaussian, convex_lipschitz_cube, lipschitz_log_concave };

std::string_view bound_kind_name(BoundKind kind);

struct BoundSpec {
  BoundKind kind = BoundKind::bounded_sub_gaussian;
  double range_width = 0.0;  // b - a, bounded kind only
  double lipschitz = 0.0;    // Lipschitz kinds only
  double gamma = 0.0;        // log-concave kind only
  std::optional<double> mean_lower_bound;  // needed for relative-error work

  static BoundSpec bounded(double range_width);
  static BoundSpec convex_lipschitz(double lipschitz);
  static BoundSpec log_concave_lipschitz(double lipschitz, double gamma);
  BoundSpec with_mean_lower_bound(double mu) const;

  // Coefficient `rate` in the tail 2 exp(-rate * delta^2 * n).
  double tail_rate() const;
};

struct TailBoundResult {
  double delta = 0.0;
  std::uint64_t n = 0;
  double probability_bound = 0.0;  // in (0, 2]; trivially true above 1
};

// P(|mean_n - mu| >= delta) bound.
TailBoundResult absolute_tail(const BoundSpec& spec, std::uint64_t n, double delta);

// P(|mean_n - mu| >= delta_rel * mu) bound, using mean_lower_bound for mu.
TailBoundResult relative_tail(const BoundSpec& spec, std::uint64_t n, double delta_rel);

// Half-width of the level-(1 - alpha) two-sided confidence interval, i.e. the
// delta at which absolute_tail equals alpha.  log(2/alpha) is computed as
// log(2) - log(alpha) so tiny alpha stays accurate.
double ci_halfwidth(const BoundSpec& spec, std::uint64_t n, double alpha);

// Smallest n whose relative tail bound at delta_rel is <= alpha.  Plans above
// 2^62 samples come back marked infeasible rather than overflowing.
struct SamplePlan {
  bool feasible = false;
  std::uint64_t n = 0;       // meaningful only when feasible
  double n_exact = 0.0;      // the pre-ceiling real value (inf when overflowed)
};

SamplePlan plan_sample_size(const BoundSpec& spec, double delta_rel, double alpha);

// The three worked sweep families used by the studies and the planner CLI.
enum class PlanFamily { hypersphere, qnorm, arctan_mvn };

struct GrowthRow {
  int p = 0;
  BoundSpec spec;
  SamplePlan plan;
};

// Planned sample sizes across dimensions for one family:
//   hypersphere   ball volume in [-1,1]^p; range 2^p, mean bound = ball volume
//   qnorm         1/(1 + |x|_q) on the unit cube; L = p^eta with
//                 eta = max(1/q - 1/2, 0), mean bound 2/(2 + p)
//   arctan_mvn    arctan(1 + |x|_1) under a Gaussian with rate gamma;
//                 L = sqrt(p), mean bound pi/4
// `q` is read only by the qnorm family and `gamma` only by arctan_mvn.
std::vector<GrowthRow> growth_exponent_table(PlanFamily family, std::span<const int> p_list,
                                             double delta_rel, double alpha, double q = 2.0,
                                             double gamma = 1.0);

}  // namespace certmc::bounds
