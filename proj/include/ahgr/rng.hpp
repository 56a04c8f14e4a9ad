#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ahgr {

// All randomness in the project flows from one master seed through named
// sub-streams, so results are reproducible across platforms: mt19937_64 has a
// standard-fixed sequence and the uniform mappings below avoid the
// implementation-defined std::*_distribution classes.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[uniform_int(i)]);
  }

  std::uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace detail

/// Derives the seed of a named sub-stream from a master seed and up to three
/// indices (restart, trial, run, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t h = detail::splitmix64(master ^ detail::fnv1a(stream));
  h = detail::splitmix64(h ^ a);
  h = detail::splitmix64(h ^ b);
  h = detail::splitmix64(h ^ c);
  return h;
}

inline Rng derive_rng(std::uint64_t master, std::string_view stream,
                      std::uint64_t a = 0, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
  return Rng(derive_seed(master, stream, a, b, c));
}

} // namespace ahgr
