#include "certmc/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "certmc/errors.hpp"

namespace certmc::sampling {
namespace {

// Rayleigh-quotient power iteration for the largest eigenvalue of a symmetric
// positive-definite matrix.
double largest_eigenvalue(const Matrix& a) {
  const std::size_t n = a.rows();
  // Deterministic start vector from a fixed internal stream; any vector with a
  // component along the top eigenspace works.
  RngStream stream(0x706f776572ull, 0);
  std::vector<double> v(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = stream.next_double() + 0.5;
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;

  std::vector<double> av(n);
  double lambda = 0.0;
  constexpr int kMaxIter = 100000;
  constexpr double kTol = 1e-10;
  for (int it = 0; it < kMaxIter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      av[i] = s;
    }
    double rayleigh = 0.0;
    double av_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rayleigh += v[i] * av[i];
      av_norm += av[i] * av[i];
    }
    av_norm = std::sqrt(av_norm);
    if (av_norm == 0.0) throw NotPositiveDefinite("power iteration: matrix annihilated the iterate");
    for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / av_norm;
    if (it > 0 && std::fabs(rayleigh - lambda) <= kTol * std::fabs(rayleigh)) {
      return rayleigh;
    }
    lambda = rayleigh;
  }
  return lambda;
}

}  // namespace

void fill_unit_cube(RngStream& stream, std::span<double> point) {
  for (auto& x : point) x = stream.next_double();
}

void fill_symmetric_cube(RngStream& stream, std::span<double> point) {
  for (auto& x : point) x = 2.0 * stream.next_double() - 1.0;
}

void fill_mvn(RngStream& stream, const CovarianceFactor& factor, std::span<double> point,
              std::vector<double>& scratch) {
  const std::size_t p = factor.dim;
  scratch.resize(p);
  for (std::size_t j = 0; j < p; ++j) scratch[j] = stream.next_normal();
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += factor.lower_triangular(i, j) * scratch[j];
    point[i] = s;
  }
}

SampleBatch sample_unit_cube(RngStream& stream, std::size_t p, std::size_t n) {
  if (p == 0) throw std::invalid_argument("sample_unit_cube: dimension must be positive");
  SampleBatch batch{p, n, Matrix(n, p), "unit_cube", stream.seed()};
  for (std::size_t i = 0; i < n; ++i) fill_unit_cube(stream, batch.points.row(i));
  return batch;
}

SampleBatch sample_symmetric_cube(RngStream& stream, std::size_t p, std::size_t n) {
  if (p == 0) throw std::invalid_argument("sample_symmetric_cube: dimension must be positive");
  SampleBatch batch{p, n, Matrix(n, p), "symmetric_cube", stream.seed()};
  for (std::size_t i = 0; i < n; ++i) fill_symmetric_cube(stream, batch.points.row(i));
  return batch;
}

CovarianceFactor cholesky(const Matrix& sigma) {
  const std::size_t n = sigma.rows();
  if (n == 0 || sigma.cols() != n) {
    throw std::invalid_argument("cholesky: matrix must be square and non-empty");
  }
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, std::fabs(sigma(i, i)));
    for (std::size_t j = 0; j < i; ++j) {
      const double scale = std::max({1.0, std::fabs(sigma(i, j)), std::fabs(sigma(j, i))});
      if (std::fabs(sigma(i, j) - sigma(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument("cholesky: matrix is not symmetric");
      }
    }
  }
  if (max_diag == 0.0) throw NotPositiveDefinite("cholesky: zero matrix");

  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = sigma(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 1e-12 * max_diag) {
          throw NotPositiveDefinite("cholesky: pivot " + std::to_string(i) +
                                    " is not positive enough");
        }
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }

  CovarianceFactor factor;
  factor.dim = n;
  factor.lower_triangular = std::move(l);
  factor.gamma = 1.0 / largest_eigenvalue(sigma);
  return factor;
}

SampleBatch sample_mvn(RngStream& stream, const CovarianceFactor& factor, std::size_t n) {
  if (factor.dim == 0) throw std::invalid_argument("sample_mvn: empty factor");
  SampleBatch batch{factor.dim, n, Matrix(n, factor.dim), "mvn", stream.seed()};
  std::vector<double> scratch;
  for (std::size_t i = 0; i < n; ++i) fill_mvn(stream, factor, batch.points.row(i), scratch);
  return batch;
}

std::uint64_t sample_binomial(RngStream& stream, std::uint64_t trials, double prob) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw std::invalid_argument("sample_binomial: prob must lie in [0, 1]");
  }
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (stream.next_double() < prob) ++hits;
  }
  return hits;
}

}  // namespace certmc::sampling
