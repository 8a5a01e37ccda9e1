#pragma once

#include <cstdint>
#include <string_view>

#include "gforecast/numeric.hpp"

namespace gforecast {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on u64.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// FNV-1a over a string, used to turn stage names into sub-stream tags.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Sub-stream key derivation: mix(key ^ mix(tag + gamma)). Bijective in
/// `key` for a fixed tag, so distinct (rep, stage) chains cannot merge two
/// master seeds, and distinct tags give unrelated streams.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t tag) {
  return splitmix64_mix(key ^ splitmix64_mix(tag + kSplitMix64Gamma));
}

constexpr std::uint64_t derive_key(std::uint64_t key, std::string_view stage) {
  return derive_key(key, fnv1a64(stage));
}

template <class T0, class T1, class... Rest>
constexpr std::uint64_t derive_key(std::uint64_t key, T0 t0, T1 t1, Rest... rest) {
  return derive_key(derive_key(key, t0), t1, rest...);
}

/// Counter-based generator: output i is a pure function of (key, i), so any
/// sub-range of a stream can be evaluated independently and in parallel
/// without changing a single draw. Identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t at(std::uint64_t i) const {
    return splitmix64_mix(key_ + (i + 1) * kSplitMix64Gamma);
  }
  std::uint64_t next_u64() { return at(counter_++); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return to_unit(next_u64()); }
  /// Uniform on the open interval (0,1); safe to feed into quantiles.
  double uniform_open() { return to_unit_open(next_u64()); }

  double normal() { return normal_quantile(uniform_open()); }
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }
  bool bernoulli(double prob) { return uniform01() < prob; }

  Rng fork(std::uint64_t tag) const { return Rng(derive_key(key_, tag)); }
  Rng fork(std::string_view stage) const { return Rng(derive_key(key_, stage)); }

  std::uint64_t key() const { return key_; }

  static double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }
  static double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gforecast
