#include "nlstab/qmc.hpp"

#include <cmath>

#include "nlstab/error.hpp"

namespace nlstab {

namespace {
constexpr std::array<int, 8> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19};
}

double radical_inverse(std::uint64_t index, int base) {
  const double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

ScrambledHalton::ScrambledHalton(int dim, std::uint64_t seed) : dim_(dim) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size())) {
    fail(ErrorCode::kInvalidArgument, "Halton dimension must be in [1, 8]");
  }
  SplitMix64 rng(seed);
  for (int d = 0; d < dim; ++d) shift_[d] = rng.uniform();
}

void ScrambledHalton::point(std::uint64_t i, double* out) const {
  for (int d = 0; d < dim_; ++d) {
    double v = radical_inverse(i + 1, kPrimes[d]) + shift_[d];
    out[d] = v - std::floor(v);
  }
}

Point ScrambledHalton::point_in(std::uint64_t i, const Box& box) const {
  std::array<double, 8> u{};
  point(i, u.data());
  Point p(dim_);
  for (int d = 0; d < dim_; ++d) p[d] = box.lo[d] + u[d] * (box.hi[d] - box.lo[d]);
  return p;
}

}  // namespace nlstab
