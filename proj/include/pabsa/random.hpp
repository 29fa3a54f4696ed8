// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pabsa {

/// SplitMix64 generator. Every seeded operation in the library (split
/// shuffles, augmentation draws, fixture generation) goes through this so
/// results are reproducible across platforms and implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Uniform double in [0, 1) built from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Index in [0, bound) computed as next() mod bound. bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// The SplitMix64 output finalizer applied to a single value.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  return SplitMix64(x).next();
}

/// Seed for (instance, copy) derived from a base seed:
/// mix64(seed ^ mix64(instance) ^ mix64(~copy)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t instance,
                                    std::uint64_t copy) noexcept {
  return mix64(seed ^ mix64(instance) ^ mix64(~copy));
}

/// In-place Fisher-Yates: for i = n-1 down to 1, swap(v[i], v[below(i+1)]).
template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

}  // namespace pabsa
