#include "certmc/rng.hpp"

#include <bit>
#include <cmath>

namespace certmc {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Stafford "mix13" finalizer of the SplitMix64 generator.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Picks the per-stream increment: MurmurHash3 finalizer, forced odd, and
// re-salted when the bit pattern is too regular (same guard SplittableRandom
// applies to its gamma values).
std::uint64_t mix_increment(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDull;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ull;
  z = (z ^ (z >> 33)) | 1ull;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xAAAAAAAAAAAAAAAAull;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
  const std::uint64_t h0 = mix64(seed + kGolden);
  const std::uint64_t h1 = mix64(h0 + mix64(stream_index + kGolden));
  state_ = h1;
  increment_ = mix_increment(h1 + kGolden);
}

std::uint64_t RngStream::next_u64() {
  state_ += increment_;
  return mix64(state_);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_pending_normal_) {
    has_pending_normal_ = false;
    return pending_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  pending_normal_ = v * f;
  has_pending_normal_ = true;
  return u * f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(seed ^ mix64(label + kGolden));
}

}  // namespace certmc
