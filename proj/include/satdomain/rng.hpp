#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace satdomain {

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

/// SplitMix64 as a UniformRandomBitGenerator. Seeding is free, which matters for the
/// emulator's one-stream-per-flow-pair arrivals.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    const std::uint64_t z = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return z;
  }

 private:
  std::uint64_t state_;
};

// Both engines are bit-specified; the std distributions are not, so
// uniform/exponential draws are derived from raw engine output.
template <class Engine>
class BasicRng {
 public:
  explicit BasicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  Engine engine_;
};

using Rng = BasicRng<std::mt19937_64>;
using StreamRng = BasicRng<SplitMix64>;

}  // namespace satdomain
