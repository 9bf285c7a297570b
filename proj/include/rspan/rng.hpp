#ifndef RSPAN_RNG_HPP
#define RSPAN_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace rspan {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a parent key and a tag path.
/// Only integer arithmetic, so keys agree on every platform.
constexpr std::uint64_t split_key(std::uint64_t key, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(key ^ 0x6A09E667F3BCC909ULL);
  for (auto t : tags) h = mix64(h ^ mix64(t + 0x9E3779B97F4A7C15ULL));
  return h;
}

/// Counter-mode SplitMix64: the i-th output is mix64(key + (i+1)*golden).
///
/// Every random decision in the library draws from one of these, keyed by
/// split_key(seed, {...}), so results never depend on iteration order or on
/// the standard library's distribution implementations.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform integer in [0, bound), Lemire's multiply-shift with rejection.
  constexpr std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 prod = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  [[nodiscard]] constexpr std::uint64_t key() const { return key_; }
  [[nodiscard]] constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rspan

#endif  // RSPAN_RNG_HPP
