#pragma once

#include <array>
#include <cstdint>

#include "nlstab/types.hpp"

namespace nlstab {

/// SplitMix64: tiny, portable, bit-reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Radical inverse of `index` in the given prime base.
double radical_inverse(std::uint64_t index, int base);

/// Halton points in [0,1)^dim with a seed-dependent Cranley-Patterson
/// rotation. Seed 0 still rotates; every seed gives an unbiased estimator.
class ScrambledHalton {
 public:
  ScrambledHalton(int dim, std::uint64_t seed);

  int dim() const { return dim_; }
  /// i-th point (i >= 0). Index 0 of the raw sequence is skipped.
  void point(std::uint64_t i, double* out) const;
  Point point_in(std::uint64_t i, const Box& box) const;

 private:
  int dim_;
  std::array<double, 8> shift_{};
};

}  // namespace nlstab
