#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace coocnet {

// splitmix64 step; used to expand seeds into well-mixed streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent stream seed from a master seed and up to two tags.
/// Same inputs always give the same stream, on any platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ (tag_a + 0x9e3779b97f4a7c15ULL);
  h = splitmix64(s);
  s = h ^ (tag_b + 0xbf58476d1ce4e5b9ULL);
  return splitmix64(s);
}

/// mt19937_64 plus hand-rolled draw helpers. std::uniform_int_distribution is
/// not specified bit-for-bit across standard libraries, and reproducibility
/// given a seed is part of the public contract, so the distributions live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t u64() { return engine_(); }

  /// Unbiased draw in [0, n) via rejection sampling. n must be > 0.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (-n) % n; // 2^64 mod n
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(bounded(n)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (deterministic, no cached spare).
  double normal() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  /// Shuffle only the first k positions (enough to draw a uniform k-subset
  /// into v[0..k)).
  template <typename T>
  void partial_shuffle(std::vector<T>& v, std::size_t k) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      std::swap(v[i], v[i + index(n - i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

} // namespace coocnet
