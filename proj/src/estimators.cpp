#include "certmc/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "certmc/errors.hpp"

namespace certmc::estimators {
namespace {

struct ChunkGrid {
  std::uint64_t n = 0;
  std::uint64_t chunk_size = 0;
  std::uint64_t chunk_count = 0;

  ChunkGrid(std::uint64_t total, std::uint64_t size) : n(total), chunk_size(size) {
    if (total == 0) throw std::invalid_argument("estimator: sample size must be positive");
    if (size == 0) throw std::invalid_argument("estimator: chunk size must be positive");
    chunk_count = (total + size - 1) / size;
  }

  std::uint64_t begin(std::uint64_t k) const { return k * chunk_size; }
  std::uint64_t size(std::uint64_t k) const { return std::min(chunk_size, n - begin(k)); }
};

// First failure across chunks, reported in draw order so the error message is
// deterministic no matter how chunks were scheduled.
struct ChunkFailure {
  bool failed = false;
  std::uint64_t draw_index = 0;
  std::string message;
};

void check_common(const EstimateOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw std::invalid_argument("estimator: alpha must lie in (0, 1)");
  }
}

CertifiedEstimate certify(double estimate, std::uint64_t n, const bounds::BoundSpec& spec,
                          const EstimateOptions& options) {
  CertifiedEstimate out;
  out.estimate = estimate;
  out.n = n;
  out.alpha = options.alpha;
  out.halfwidth = bounds::ci_halfwidth(spec, n, options.alpha);
  out.ci_lower = estimate - out.halfwidth;
  out.ci_upper = estimate + out.halfwidth;
  out.bound_kind = spec.kind;
  if (spec.mean_lower_bound) out.relative_halfwidth = out.halfwidth / *spec.mean_lower_bound;
  return out;
}

Domain sampler_domain(const Sampler& s) { return s.domain(); }

void check_spec_against_metadata(const Integrand& integrand, const Sampler& sampler,
                                 const bounds::BoundSpec& spec) {
  if (integrand.dim != sampler.dim()) {
    throw SpecMismatch("estimate_expectation: integrand dimension " +
                       std::to_string(integrand.dim) + " != sampler dimension " +
                       std::to_string(sampler.dim()));
  }
  if (integrand.domain != sampler_domain(sampler)) {
    throw SpecMismatch("estimate_expectation: integrand domain does not match sampler");
  }
  switch (spec.kind) {
    case bounds::BoundKind::bounded_sub_gaussian:
      break;  // range is declared on the spec itself; nothing to cross-check
    case bounds::BoundKind::convex_lipschitz_cube:
      if (!integrand.lipschitz) {
        throw SpecMismatch("convex_lipschitz_cube bound needs a declared Lipschitz constant");
      }
      if (integrand.convexity == Convexity::neither) {
        throw SpecMismatch("convex_lipschitz_cube bound needs a convex or concave integrand");
      }
      if (sampler.domain() == Domain::real_line) {
        throw SpecMismatch("convex_lipschitz_cube bound needs a bounded cube sampler");
      }
      break;
    case bounds::BoundKind::lipschitz_log_concave:
      if (!integrand.lipschitz) {
        throw SpecMismatch("lipschitz_log_concave bound needs a declared Lipschitz constant");
      }
      if (!sampler.gaussian()) {
        throw SpecMismatch("lipschitz_log_concave bound needs a strongly log-concave sampler");
      }
      break;
  }
}

void raise_first_failure(const std::vector<ChunkFailure>& failures) {
  for (const auto& f : failures) {
    if (f.failed) {
      throw EvaluationError("integrand failed at draw " + std::to_string(f.draw_index) + ": " +
                            f.message);
    }
  }
}

}  // namespace

Sampler Sampler::unit_cube(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("Sampler: dimension must be positive");
  Sampler s;
  s.dim_ = dim;
  s.domain_ = Domain::unit_cube;
  s.id_ = "unit_cube";
  return s;
}

Sampler Sampler::symmetric_cube(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("Sampler: dimension must be positive");
  Sampler s;
  s.dim_ = dim;
  s.domain_ = Domain::symmetric_cube;
  s.id_ = "symmetric_cube";
  return s;
}

Sampler Sampler::mvn(sampling::CovarianceFactor factor) {
  if (factor.dim == 0) throw std::invalid_argument("Sampler: empty covariance factor");
  Sampler s;
  s.dim_ = factor.dim;
  s.domain_ = Domain::real_line;
  s.gaussian_ = true;
  s.factor_ = std::move(factor);
  s.id_ = "mvn";
  return s;
}

void Sampler::fill(RngStream& stream, std::span<double> point,
                   std::vector<double>& scratch) const {
  switch (domain_) {
    case Domain::unit_cube:
      sampling::fill_unit_cube(stream, point);
      return;
    case Domain::symmetric_cube:
      sampling::fill_symmetric_cube(stream, point);
      return;
    case Domain::real_line:
      sampling::fill_mvn(stream, factor_, point, scratch);
      return;
  }
}

CertifiedEstimate estimate_volume(std::uint64_t seed,
                                  const std::function<bool(std::span<const double>)>& indicator,
                                  double envelope_volume, const Sampler& envelope,
                                  std::uint64_t n, const EstimateOptions& options) {
  check_common(options);
  if (!(envelope_volume > 0.0)) {
    throw std::invalid_argument("estimate_volume: envelope volume must be positive");
  }
  const ChunkGrid grid(n, options.chunk_size);
  std::vector<std::uint64_t> chunk_hits(grid.chunk_count, 0);
  std::vector<ChunkFailure> failures(grid.chunk_count);

  const bool parallel = options.execution == Execution::parallel;
  const auto chunk_count = static_cast<std::int64_t>(grid.chunk_count);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t k = 0; k < chunk_count; ++k) {
    RngStream stream(seed, static_cast<std::uint64_t>(k));
    std::vector<double> point(envelope.dim());
    std::vector<double> scratch;
    const std::uint64_t count = grid.size(static_cast<std::uint64_t>(k));
    std::uint64_t local_hits = 0;
    try {
      for (std::uint64_t i = 0; i < count; ++i) {
        envelope.fill(stream, point, scratch);
        if (indicator(point)) ++local_hits;
      }
    } catch (const std::exception& e) {
      failures[k] = {true, grid.begin(static_cast<std::uint64_t>(k)), e.what()};
    }
    chunk_hits[k] = local_hits;
  }
  raise_first_failure(failures);

  std::uint64_t hits = 0;
  for (std::uint64_t h : chunk_hits) hits += h;

  const double proportion = static_cast<double>(hits) / static_cast<double>(n);
  auto out = certify(envelope_volume * proportion, n, bounds::BoundSpec::bounded(envelope_volume),
                     options);
  out.hits = hits;
  return out;
}

CertifiedEstimate estimate_expectation(std::uint64_t seed, const Integrand& integrand,
                                       const Sampler& sampler, std::uint64_t n,
                                       const bounds::BoundSpec& spec,
                                       const EstimateOptions& options) {
  check_common(options);
  if (!integrand.evaluate) throw std::invalid_argument("estimate_expectation: empty integrand");
  check_spec_against_metadata(integrand, sampler, spec);

  const ChunkGrid grid(n, options.chunk_size);
  std::vector<StreamingMoments> chunk_moments(grid.chunk_count);
  std::vector<ChunkFailure> failures(grid.chunk_count);

  const bool parallel = options.execution == Execution::parallel;
  const auto chunk_count = static_cast<std::int64_t>(grid.chunk_count);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t k = 0; k < chunk_count; ++k) {
    RngStream stream(seed, static_cast<std::uint64_t>(k));
    std::vector<double> point(sampler.dim());
    std::vector<double> scratch;
    const std::uint64_t base = grid.begin(static_cast<std::uint64_t>(k));
    const std::uint64_t count = grid.size(static_cast<std::uint64_t>(k));
    StreamingMoments local;
    try {
      for (std::uint64_t i = 0; i < count; ++i) {
        sampler.fill(stream, point, scratch);
        const double value = integrand.evaluate(point);
        if (!std::isfinite(value)) {
          failures[k] = {true, base + i, "non-finite value " + std::to_string(value)};
          break;
        }
        local.push(value);
      }
    } catch (const std::exception& e) {
      failures[k] = {true, base, e.what()};
    }
    chunk_moments[k] = local;
  }
  raise_first_failure(failures);

  // Fixed ascending merge order keeps parallel output identical to serial.
  StreamingMoments total;
  for (const auto& m : chunk_moments) total = merge_moments(total, m);

  return certify(total.mean, n, spec, options);
}

void validate_integrand(const Integrand& integrand, const Sampler& sampler, std::uint64_t seed,
                        std::size_t trial_count) {
  if (!integrand.evaluate) throw std::invalid_argument("validate_integrand: empty integrand");
  if (integrand.dim != sampler.dim()) {
    throw SpecMismatch("validate_integrand: integrand/sampler dimension mismatch");
  }
  RngStream stream(seed, 0);
  std::vector<double> current(integrand.dim);
  std::vector<double> previous(integrand.dim);
  std::vector<double> scratch;
  double previous_value = 0.0;
  for (std::size_t i = 0; i < trial_count; ++i) {
    sampler.fill(stream, current, scratch);
    const double value = integrand.evaluate(current);
    if (!std::isfinite(value)) {
      throw EvaluationError("validate_integrand: non-finite value at trial " + std::to_string(i));
    }
    if (integrand.lipschitz && i > 0) {
      double dist2 = 0.0;
      for (std::size_t j = 0; j < current.size(); ++j) {
        const double d = current[j] - previous[j];
        dist2 += d * d;
      }
      const double dist = std::sqrt(dist2);
      if (dist > 1e-12 &&
          std::fabs(value - previous_value) > *integrand.lipschitz * dist * (1.0 + 1e-9)) {
        throw SpecMismatch("validate_integrand: sampled pair exceeds the declared Lipschitz "
                           "constant for '" + integrand.name + "'");
      }
    }
    std::swap(current, previous);
    previous_value = value;
  }
}

double empirical_lipschitz_ratio(const Integrand& f, std::size_t block_count,
                                 std::size_t pair_count, RngStream& stream) {
  if (!f.evaluate) throw std::invalid_argument("empirical_lipschitz_ratio: empty integrand");
  if (block_count == 0 || pair_count == 0) {
    throw std::invalid_argument("empirical_lipschitz_ratio: counts must be positive");
  }
  const std::size_t p = f.dim;
  const std::size_t joint = block_count * p;
  constexpr double kMargin = 0.25;

  std::vector<double> x(joint), y(joint), offset(p);

  auto draw_coord = [&](bool interior) {
    switch (f.domain) {
      case Domain::unit_cube:
        return interior ? kMargin + (1.0 - 2.0 * kMargin) * stream.next_double()
                        : stream.next_double();
      case Domain::symmetric_cube: {
        const double u = 2.0 * stream.next_double() - 1.0;
        return interior ? (1.0 - kMargin) * u : u;
      }
      case Domain::real_line:
        return stream.next_normal();
    }
    return 0.0;
  };

  auto average = [&](const std::vector<double>& pts) {
    double s = 0.0;
    for (std::size_t b = 0; b < block_count; ++b) {
      s += f.evaluate(std::span<const double>(pts.data() + b * p, p));
    }
    return s / static_cast<double>(block_count);
  };

  double best = 0.0;
  for (std::size_t pair = 0; pair < pair_count; ++pair) {
    if (pair % 2 == 0) {
      // Independent endpoints.
      for (auto& v : x) v = draw_coord(false);
      for (auto& v : y) v = draw_coord(false);
    } else {
      // Aligned endpoints: one shared isotropic offset applied to every block,
      // the regime where the averaged function's constant is actually attained.
      for (auto& v : x) v = draw_coord(true);
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (auto& v : offset) {
          v = stream.next_normal();
          norm2 += v * v;
        }
      } while (norm2 < 1e-24);
      const double radius =
          (f.domain == Domain::real_line ? 1.0 : kMargin) * stream.next_double();
      const double scale = radius / std::sqrt(norm2);
      for (std::size_t b = 0; b < block_count; ++b) {
        for (std::size_t j = 0; j < p; ++j) {
          y[b * p + j] = x[b * p + j] + scale * offset[j];
        }
      }
    }
    double dist2 = 0.0;
    for (std::size_t j = 0; j < joint; ++j) {
      const double d = x[j] - y[j];
      dist2 += d * d;
    }
    if (dist2 < 1e-24) continue;
    const double ratio = std::fabs(average(x) - average(y)) / std::sqrt(dist2);
    best = std::max(best, ratio);
  }
  return best;
}

double logconcavity_violation(const NegLogDensity& psi, double gamma, double lambda,
                              std::span<const double> y, std::span<const double> z) {
  if (y.size() != z.size()) {
    throw std::invalid_argument("logconcavity_violation: dimension mismatch");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("logconcavity_violation: lambda must lie in [0, 1]");
  }
  std::vector<double> mid(y.size());
  double dist2 = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    mid[j] = lambda * y[j] + (1.0 - lambda) * z[j];
    const double d = y[j] - z[j];
    dist2 += d * d;
  }
  const double gap = lambda * psi(y) + (1.0 - lambda) * psi(z) - psi(mid);
  return 0.5 * gamma * lambda * (1.0 - lambda) * dist2 - gap;
}

double strong_logconcavity_check(const NegLogDensity& psi, double gamma, std::size_t dim,
                                 std::size_t triple_count, RngStream& stream) {
  if (dim == 0 || triple_count == 0) {
    throw std::invalid_argument("strong_logconcavity_check: counts must be positive");
  }
  std::vector<double> y(dim), z(dim);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triple_count; ++t) {
    for (auto& v : y) v = stream.next_normal();
    for (auto& v : z) v = stream.next_normal();
    const double lambda = stream.next_double();
    worst = std::max(worst, logconcavity_violation(psi, gamma, lambda, y, z));
  }
  return worst;
}

}  // namespace certmc::estimators
