#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace lendsim {

// splitmix64 finalizer; good avalanche, used for seed derivation only.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a root seed and a key path,
// e.g. (master_seed, {sim_index, kLenderTag, lender_index}).  The whole
// simulation's determinism contract rests on streams being a pure function
// of these keys, never of execution order or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t root,
                                    std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = mix64(root);
  for (std::uint64_t k : keys) {
    s = mix64(s ^ mix64(k + 0x9e3779b97f4a7c15ULL));
  }
  return s;
}

// A seeded random stream: mt19937_64 engine plus the handful of samplers the
// simulator needs.  Samplers are written out explicitly (rather than using
// std::*_distribution) so draws are identical across standard library
// implementations and each sampler consumes a fixed number of engine words.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream from_keys(std::uint64_t root,
                             std::initializer_list<std::uint64_t> keys) {
    return RngStream(derive_seed(root, keys));
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe under log().
  double uniform01_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller; consumes exactly two engine words per draw.
  double normal(double mean, double sd) {
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Standard Gumbel(0,1) via inverse CDF.
  double gumbel() { return -std::log(-std::log(uniform01_open())); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer on [0, n); multiply-shift (bias < n / 2^64).
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Stream tags keep the per-purpose streams of one simulation independent.
namespace stream_tag {
inline constexpr std::uint64_t kPool = 1;
inline constexpr std::uint64_t kStyle = 2;
inline constexpr std::uint64_t kMarket = 3;
inline constexpr std::uint64_t kPrefs = 4;
inline constexpr std::uint64_t kChoice = 5;
}  // namespace stream_tag

}  // namespace lendsim
