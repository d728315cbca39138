#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "certmc/bounds.hpp"
#include "certmc/moments.hpp"
#include "certmc/rng.hpp"
#include "certmc/sampling.hpp"

namespace certmc::estimators {

enum class Domain { unit_cube, symmetric_cube, real_line };
enum class Convexity { convex, concave, neither };

// Parallel runs the chunk loop under OpenMP; serial is the reference path.
// Chunk boundaries and per-chunk streams depend only on (seed, chunk_size),
// never on worker count, so both paths produce bit-identical results.
enum class Execution { serial, parallel };

// An integrand plus the caller-declared structure the tail bounds lean on.
// Declarations are trusted; validate_integrand runs the documented smoke test
// (finiteness and a sampled Lipschitz-ratio probe) but cannot prove convexity.
struct Integrand {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> evaluate;
  std::optional<double> lipschitz;
  Convexity convexity = Convexity::neither;
  std::optional<double> mean_lower_bound;
  Domain domain = Domain::unit_cube;
  std::string name;
};

// The three sampling distributions the estimators draw from.
class Sampler {
 public:
  static Sampler unit_cube(std::size_t dim);
  static Sampler symmetric_cube(std::size_t dim);
  static Sampler mvn(sampling::CovarianceFactor factor);

  std::size_t dim() const { return dim_; }
  Domain domain() const { return domain_; }
  std::string_view id() const { return id_; }

  // True for the Gaussian sampler, whose density is gamma-strongly log-concave.
  bool gaussian() const { return gaussian_; }
  double gamma() const { return factor_.gamma; }
  const sampling::CovarianceFactor& factor() const { return factor_; }

  // Draws one point; scratch is reused across calls to avoid reallocation.
  void fill(RngStream& stream, std::span<double> point, std::vector<double>& scratch) const;

 private:
  Sampler() = default;
  std::size_t dim_ = 0;
  Domain domain_ = Domain::unit_cube;
  bool gaussian_ = false;
  sampling::CovarianceFactor factor_;
  std::string id_;
};

struct EstimateOptions {
  double alpha = 0.05;
  Execution execution = Execution::parallel;
  // Draws handled per stream; fixed so results never depend on thread count.
  std::uint64_t chunk_size = 65536;
};

// A point estimate together with the non-asymptotic confidence interval the
// declared structure buys at level 1 - alpha.
struct CertifiedEstimate {
  double estimate = 0.0;
  std::uint64_t n = 0;
  double alpha = 0.0;
  double halfwidth = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  bounds::BoundKind bound_kind = bounds::BoundKind::bounded_sub_gaussian;
  std::optional<double> relative_halfwidth;  // halfwidth / mean_lower_bound
  std::uint64_t hits = 0;                    // volume estimates: raw success count
};

// Volume of {indicator true} inside an envelope of known volume: the scaled
// hit proportion, with the bounded-kind interval for range [0, envelope_volume].
CertifiedEstimate estimate_volume(std::uint64_t seed,
                                  const std::function<bool(std::span<const double>)>& indicator,
                                  double envelope_volume, const Sampler& envelope,
                                  std::uint64_t n, const EstimateOptions& options = {});

// Sample-mean estimate of E f(X) with the interval implied by `spec`.  Throws
// SpecMismatch when the spec's assumptions contradict the declared metadata
// and EvaluationError when f produces a non-finite value.
CertifiedEstimate estimate_expectation(std::uint64_t seed, const Integrand& integrand,
                                       const Sampler& sampler, std::uint64_t n,
                                       const bounds::BoundSpec& spec,
                                       const EstimateOptions& options = {});

// Smoke test for a freshly declared integrand: evaluates trial points drawn
// from the sampler, throwing EvaluationError on non-finite output and
// SpecMismatch when a sampled pair beats the declared Lipschitz constant.
void validate_integrand(const Integrand& integrand, const Sampler& sampler, std::uint64_t seed,
                        std::size_t trial_count = 10000);

// Largest sampled difference quotient of the blockwise average
//   g(x_1..x_B) = (1/B) sum_i f(x_i)
// over the product domain.  Averaging n blocks of an L-Lipschitz function
// contracts the constant to L/sqrt(n); the sampler mixes independent pairs
// with aligned pairs (same offset in every block) so affine integrands
// actually attain the contracted constant.
double empirical_lipschitz_ratio(const Integrand& f, std::size_t block_count,
                                 std::size_t pair_count, RngStream& stream);

using NegLogDensity = std::function<double(std::span<const double>)>;

// Convexity-gap deficit of a negative log-density at one interpolation triple:
//   gamma/2 * lambda(1-lambda) |y-z|^2  -  [lambda psi(y) + (1-lambda) psi(z) - psi(...)]
// Non-positive everywhere iff psi is gamma-strongly convex along that segment.
double logconcavity_violation(const NegLogDensity& psi, double gamma, double lambda,
                              std::span<const double> y, std::span<const double> z);

// Max violation over random triples (y, z standard normal, lambda uniform);
// a product of gamma-strongly log-concave factors stays gamma-strongly
// log-concave, and this probe checks the joint density empirically.
double strong_logconcavity_check(const NegLogDensity& psi, double gamma, std::size_t dim,
                                 std::size_t triple_count, RngStream& stream);

}  // namespace certmc::estimators
