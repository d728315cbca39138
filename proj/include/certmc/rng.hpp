#pragma once

#include <cstdint>

namespace certmc {

// Splittable counter-style generator in the SplittableRandom family: every
// (seed, stream_index) pair owns an independent stream, so chunked work can be
// handed to any worker and still draw exactly the same numbers.  State advances
// by a per-stream odd increment and outputs go through a 64-bit finalizer.
//
// Normal deviates use the Marsaglia polar method (no inverse CDF), with the
// spare deviate cached inside the stream.  Sequences are reproducible for a
// fixed build; bit-exactness is promised within one implementation, not across
// different libm versions.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_double();

  // Standard normal deviate.
  double next_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_index_ = 0;
  std::uint64_t state_ = 0;
  std::uint64_t increment_ = 1;
  double pending_normal_ = 0.0;
  bool has_pending_normal_ = false;
};

// Deterministically folds a label into a seed so nested stream families (study
// cell, then estimator chunks inside the cell) never share streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace certmc
