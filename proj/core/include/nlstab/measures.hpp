#pragma once

// Volumes, symmetric differences with reflected domains, slab measures, and
// the boundary-weighted integral over the part of a domain outside B_1.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "nlstab/domains.hpp"
#include "nlstab/movingplanes.hpp"

namespace nlstab {

enum class MeasureMethod { kMonteCarlo, kGrid, kClosedForm };

std::string_view to_string(MeasureMethod m);
/// Inverse of to_string; throws kInvalidArgument.
MeasureMethod measure_method_from_string(std::string_view text);

struct MeasureEstimate {
  double value = 0.0;
  double error = 0.0;  // 3 sigma half-width (monte-carlo) or refinement difference (grid)
  MeasureMethod method = MeasureMethod::kMonteCarlo;
  long n_samples = 0;
  std::uint64_t seed = 0;
  std::string flag;  // empty unless something needs attention
};

/// box volume * hit fraction over scrambled Halton points; error is the
/// 3 sigma binomial half-width.
MeasureEstimate mc_volume(const Predicate& inside, const Box& box, long n, std::uint64_t seed);

/// |d triangle d'| with d' the reflection of d across the critical plane.
/// The grid method integrates exact chord lengths over `n` lines
/// orthogonal to the plane (n = 2 only).
MeasureEstimate sym_diff_measure(const ImplicitDomain& d, const CriticalPlaneResult& res, long n,
                                 std::uint64_t seed,
                                 MeasureMethod method = MeasureMethod::kMonteCarlo);

/// |{x in d : x.e < lambda, reflect(x) not in d}|, half of the symmetric
/// difference.
MeasureEstimate one_sided_difference(const ImplicitDomain& d, const CriticalPlaneResult& res,
                                     long n, std::uint64_t seed,
                                     MeasureMethod method = MeasureMethod::kMonteCarlo);

/// |{x in d triangle d' : |x.e - lambda| <= gamma}|, 0 < gamma <= 1/4.
MeasureEstimate slab_measure(const ImplicitDomain& d, const CriticalPlaneResult& res, double gamma,
                             long n, std::uint64_t seed,
                             MeasureMethod method = MeasureMethod::kMonteCarlo);

/// int over {y in d, y1 > 0, |y| > 1} of y1 (dist(y, bd d) / (|y| - 1))^s dy
/// (n = 2), sampled in 14 geometric shells towards the unit circle with
/// density proportional to (|y| - 1)^{-s}.
MeasureEstimate boundary_weighted_integral(const ImplicitDomain& d, double s, long n,
                                           std::uint64_t seed);

/// Closed form of the boundary-weighted integral for d = B_{1+h}.
double boundary_weighted_integral_ball(double h, double s);

/// One CSV line {quantity, params, value, error, n, seed, method}; params
/// are rendered as key=value pairs joined by ';'.
std::string csv_header();
std::string csv_row(std::string_view quantity, const std::map<std::string, std::string>& params,
                    const MeasureEstimate& m);

}  // namespace nlstab
