#pragma once

// Closed-form torsion functions, the antisymmetric barrier, and a pointwise
// evaluator for the fractional Laplacian
//   (-Delta)^s f(x) = c_{n,s}/2 * int (2f(x) - f(x+z) - f(x-z)) |z|^{-n-2s} dz.

#include <nlohmann/json.hpp>

#include <string>

#include "nlstab/domains.hpp"
#include "nlstab/specfun.hpp"
#include "nlstab/types.hpp"

namespace nlstab {

enum class Smoothness { kClosedForm, kComposite };

std::string_view to_string(Smoothness s);

/// Real function on R^n vanishing outside `support`.
struct ScalarField {
  ScalarFn eval;
  ImplicitDomain support;
  Smoothness smoothness = Smoothness::kClosedForm;
  FracParams params;
  // Behaves like dist(x, boundary)^s at the support boundary; the evaluator
  // then sizes its inner ball by the boundary distance.
  bool boundary_singular = false;
  // Scale on which a smooth field varies (sizes the inner ball otherwise).
  double length_scale = 1.0;
  std::string name;

  double operator()(const Point& x) const { return eval(x); }
};

/// gamma_{n,s} (1 - |x|^2)_+^s.
ScalarField torsion_ball(const FracParams& p);

/// gamma_{n,s,eps} (1 - x1^2/(1+eps)^2 - |x'|^2)_+^s on the ellipsoid.
ScalarField torsion_ellipsoid(const FracParams& p, double eps);

/// Radial cutoff profile: 1 on [0, 1/2], 0 on [1, inf), C-infinity.
double radial_cutoff(double r);

/// rho^{2s} x1 (eta((x-a)/rho) + eta((x-a')/rho)), a' the mirror image of a
/// across {x1 = 0} and eta the radial cutoff. Odd in x1. n = 2 only.
ScalarField barrier(const FracParams& p, const Point& a, double rho);

ScalarField zero_field(const FracParams& p);

/// x -> f(r x), supported on support / r.
ScalarField rescaled(const ScalarField& f, double r);

struct QuadratureConfig {
  int inner_radial = 64;    // Gauss-Jacobi nodes on the inner ball
  int inner_angular = 64;   // half-circle nodes on the inner ball
  int outer_panels = 12;    // geometric panels per ray segment half
  int outer_angular = 256;  // rays
  int outer_nodes = 16;     // Gauss-Legendre nodes per panel
  double inner_fraction = 0.5;
  double tol = 1e-2;
  double min_boundary_distance = 1e-3;

  /// Every node count halved: the companion run used for the error estimate.
  QuadratureConfig coarsened() const;
};

nlohmann::json to_json(const QuadratureConfig& c);
QuadratureConfig quadrature_config_from_json(const nlohmann::json& j);

struct FrLapResult {
  double value = 0.0;
  double error = 0.0;      // |value - value on the coarsened config|
  bool converged = false;  // error <= tol * max(1, |value|)
};

/// (-Delta)^s f at x (n = 2). Throws kPointTooCloseToBoundary for a
/// boundary-singular field when dist(x, boundary) <= min_boundary_distance.
FrLapResult frlap_eval(const ScalarField& f, const Point& x, const QuadratureConfig& cfg = {});

/// Single quadrature pass, no error estimate.
double frlap_value(const ScalarField& f, const Point& x, const QuadratureConfig& cfg);

}  // namespace nlstab
