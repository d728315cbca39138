#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "certmc/matrix.hpp"
#include "certmc/rng.hpp"

namespace certmc::sampling {

// A block of draws from one named sampler: count points of dimension dim,
// one point per row.
struct SampleBatch {
  std::size_t dim = 0;
  std::size_t count = 0;
  Matrix points;
  std::string sampler_id;
  std::uint64_t seed = 0;
};

// Lower-triangular Cholesky factor of a covariance matrix, together with the
// strong log-concavity rate of the corresponding Gaussian density, i.e. the
// smallest eigenvalue of sigma^{-1} (equivalently 1 / lambda_max(sigma)).
struct CovarianceFactor {
  std::size_t dim = 0;
  Matrix lower_triangular;
  double gamma = 0.0;
};

// Single-point fillers; the batch samplers and the streaming estimator kernels
// share these so both draw identical sequences from identical streams.
void fill_unit_cube(RngStream& stream, std::span<double> point);
void fill_symmetric_cube(RngStream& stream, std::span<double> point);
void fill_mvn(RngStream& stream, const CovarianceFactor& factor, std::span<double> point,
              std::vector<double>& scratch);

// Uniform draws on [0,1]^p.
SampleBatch sample_unit_cube(RngStream& stream, std::size_t p, std::size_t n);

// Uniform draws on [-1,1]^p, the affine image 2u - 1 of the unit-cube draws.
SampleBatch sample_symmetric_cube(RngStream& stream, std::size_t p, std::size_t n);

// Cholesky factorization of a symmetric positive-definite matrix.  Throws
// NotPositiveDefinite when a pivot falls at or below 1e-12 times the largest
// diagonal entry.  gamma comes from power iteration on sigma (tolerance 1e-10,
// at most 1e5 iterations).
CovarianceFactor cholesky(const Matrix& sigma);

// Centered Gaussian draws x = L z with z standard normal.
SampleBatch sample_mvn(RngStream& stream, const CovarianceFactor& factor, std::size_t n);

// Number of successes in `trials` Bernoulli(prob) draws.
std::uint64_t sample_binomial(RngStream& stream, std::uint64_t trials, double prob);

}  // namespace certmc::sampling
