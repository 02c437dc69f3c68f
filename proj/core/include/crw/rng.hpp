#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace crw {

__extension__ using uint128 = unsigned __int128;

/// SplitMix64 finalizer; used for seeding and stream derivation only.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// A xoshiro256** stream with explicit, platform-independent variate generation.
///
/// Streams are derived from (master seed, shard index, stream id) by
///
///   k0 = splitmix64(master)
///   k1 = splitmix64(k0 ^ (0xA0761D6478BD642F * (shard + 1)))
///   k2 = splitmix64(k1 ^ (0xE7037ED1A0B428DB * (stream + 1)))
///
/// and the 256-bit state is filled by four successive splitmix64 draws
/// starting from k2. Distinct (shard, stream) pairs therefore seed unrelated
/// states; the mapping is fixed and part of the reproducibility contract.
///
/// All variates are produced by inversion or integer arithmetic so results
/// do not depend on the standard library's distribution implementations.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0) noexcept { reseed(seed); }

  static RandomStream derive(std::uint64_t master, std::uint64_t shard,
                             std::uint64_t stream) noexcept {
    std::uint64_t k = splitmix64(master);
    k = splitmix64(k ^ (0xA0761D6478BD642FULL * (shard + 1)));
    k = splitmix64(k ^ (0xE7037ED1A0B428DBULL * (stream + 1)));
    return RandomStream(k);
  }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      s = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1); safe to take logarithms of.
  double uniform_open() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t uniform_index(std::uint64_t n) noexcept {
    uint128 m = static_cast<uint128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<uint128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Number of Bernoulli(p) trials up to and including the first success,
  /// by inversion: ceil(ln U / ln(1 - p)). p == 1 short-circuits to 1.
  std::uint64_t geometric(double p) noexcept {
    if (p >= 1.0) return 1;
    if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
    return geometric_log(std::log1p(-p));
  }

  /// geometric(p) with log(1 - p) < 0 precomputed by the caller.
  std::uint64_t geometric_log(double log_q) noexcept {
    const double g = std::ceil(std::log(uniform_open()) / log_q);
    if (!(g < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
    return g < 1.0 ? 1 : static_cast<std::uint64_t>(g);
  }

  double exponential(double rate) noexcept {
    return -std::log(uniform_open()) / rate;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace crw
