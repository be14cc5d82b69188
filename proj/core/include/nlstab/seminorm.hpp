#pragma once

// Lipschitz seminorms of fields restricted to parametrized curves, the
// parallel-surface chart of the ellipsoid family, and the profile checks
// behind the O(eps) convergence of [u_eps] / eps.

#include <functional>
#include <string>
#include <vector>

#include "nlstab/specfun.hpp"
#include "nlstab/types.hpp"

namespace nlstab {

/// Inner parallel surface at distance 1/2 of the ellipse with semi-axes
/// 1+eps (along x1) and 1, half x1 > 0, parametrized by r in [-1, 1]:
///   phi(r) = (a(|r|) sqrt(1 - r^2), b(|r|) r).
/// Higher dimensions reduce to this profile by rotational symmetry.
struct EllipsoidChart {
  double eps = 0.0;

  double a(double tau) const;
  double b(double tau) const;
  Point phi(double r) const;
};

struct SeminormOptions {
  int grid = 448;          // chart nodes; about grid^2 / 2 pairs
  int refine = 32;         // best pairs refined coordinate-wise
  double diagonal_step = 1e-6;  // relative offset of near-diagonal pairs
  int sweeps = 16;          // coordinate sweeps per refined pair
};

struct SeminormResult {
  double value = 0.0;  // lower bound for the sup
  double t_a = 0.0;    // achieving chart parameters
  double t_b = 0.0;
  long n_pairs = 0;
  bool stable = true;  // refinement changed the grid maximum by < 1e-3 relative
};

/// sup over t != t' in [t0, t1] of |f(t) - f(t')| / |x(t) - x(t')|.
SeminormResult lipschitz_seminorm(const std::function<double(double)>& f,
                                  const std::function<Point(double)>& x, double t0, double t1,
                                  const SeminormOptions& opts = {});

/// [u_eps]_{boundary of G_eps} / eps for the ellipsoid torsion function,
/// G_eps the erosion of the ellipsoid by 1/2.
SeminormResult ellipsoid_seminorm_ratio(const FracParams& p, double eps,
                                        const SeminormOptions& opts = {});

/// s gamma_{n,s} (3/4)^{s-1}, the eps -> 0 limit of the ratio above.
double seminorm_limit(const FracParams& p);

/// ||r|^2 - |r'|^2| / |phi_0(r) - phi_0(r')| on the unperturbed chart.
double phi0_quotient(double r, double r2);

/// Sup of phi0_quotient over r != r' in [-1, 1].
SeminormResult phi0_quotient_sup(const SeminormOptions& opts = {});

/// Rescaled deviation of the normalized torsion function along the chart:
///   [(1 - a^2 (1 - tau^2)/(1+eps)^2 - b^2 tau^2)^s - (3/4)^s] / eps
///     + s/2 (3/4)^{s-1} (1 - tau^2).
/// s in (0, 1].
double psi_profile(double s, double eps, double tau);

/// d psi / d tau from the closed-form derivative s g h^{s-1} of h^s.
double psi_profile_derivative(double s, double eps, double tau);

/// max over a tau grid on [0, 1) of |d psi / d tau| (central differences,
/// step 1e-5), divided by eps. eps in (0, 0.1], grid >= 64.
double psi_profile_check(double s, double eps, int grid);
double psi_profile_check(const FracParams& p, double eps, int grid);

/// Limit of r(eps) = L + A eps + B eps^2 from values at eps, eps/2, eps/4.
double richardson3(double r_eps, double r_half, double r_quarter);

}  // namespace nlstab
