#pragma once

// Implicit domains: the ball, the ellipsoid family, the bump-perturbed disk,
// and derived domains (erosion, translation, scaling). Domains are values;
// every query is const and safe to call concurrently.

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlstab/types.hpp"

namespace nlstab {

/// Uniform C^alpha graph bound in balls of radius rho with norm at most M.
struct Regularity {
  double alpha = 2.0;
  double M = 0.0;
  double rho = 0.125;
};

/// One piece of a boundary curve (n = 2), t in [t0, t1].
struct Chart {
  std::function<Point(double)> map;
  double t0 = 0.0;
  double t1 = 1.0;
  bool periodic = false;
  int samples = 1024;  // share of the default boundary sampling
};

/// Serializable construction recipe. Numeric parameters are kept as the
/// decimal strings they were given in, so a JSON round trip is exact.
struct DomainRecipe {
  std::string kind;
  std::map<std::string, std::string> params;
  std::optional<Regularity> regularity;
  std::vector<DomainRecipe> children;

  double number(const std::string& key) const;
};

nlohmann::json to_json(const DomainRecipe& recipe);
DomainRecipe recipe_from_json(const nlohmann::json& j);

struct BoundarySample {
  Point p;
  int chart = 0;
  double t = 0.0;
};

/// Bounded open set {level < 0}. `level` is continuous, negative inside,
/// zero on the boundary and positive outside.
struct ImplicitDomain {
  int dim = 2;
  ScalarFn level;
  std::function<Point(const Point&)> gradient;  // optional analytic level gradient
  Box bbox;
  std::optional<ScalarFn> exact_sdf;
  std::vector<Chart> charts;
  std::optional<Regularity> regularity;
  std::optional<double> interior_ball_radius;
  DomainRecipe recipe;
  std::shared_ptr<const std::vector<BoundarySample>> samples;  // default boundary sampling

  bool contains(const Point& x) const { return level(x) < 0.0; }
  Point level_gradient(const Point& x) const;
  /// Outward unit normal of the level set through x.
  Point normal(const Point& x) const;
};

/// `count` chart-stratified boundary samples (n = 2 domains with charts).
std::vector<BoundarySample> boundary_samples(const ImplicitDomain& d, int count);

inline constexpr int kDefaultBoundarySamples = 4096;

ImplicitDomain ball(const Point& center, double r);

/// Omega_eps = {x1^2/(1+eps)^2 + |x'|^2 < 1} in R^n, 0 <= eps < 1/4.
ImplicitDomain ellipsoid(int n, double eps);

/// C-infinity transition: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

/// Smooth odd cutoff: 2t on (-1/4, 1/4), supported in [-1/2, 1/2], |eta| <= 1.
double bump_cutoff(double t);

/// Lower boundary graph of the bump-perturbed disk:
///   psi(tau) = -sqrt(1 - tau^2) - eps * eta((tau - eps^{1-1/alpha}) / eps^{1/alpha}).
double bump_profile(double eps, double alpha, double tau);

/// Unit disk whose lower boundary is replaced by the graph of bump_profile
/// over |x1| < 1/2. Requires alpha > 1 and the bump support inside (-1/2, 1/2).
ImplicitDomain bump_domain(double eps, double alpha);

/// Estimate of ||f||_{C^alpha(a,b)} from finite differences on a sample
/// grid refined in [focus_lo, focus_hi]. alpha in (1, 4].
double holder_norm(const std::function<double(double)>& f, double alpha, double a, double b,
                   double focus_lo, double focus_hi, int points = 400);

/// {x in d : dist(x, boundary) > rho}; requires 0 < rho < interior_ball_radius.
ImplicitDomain erode(const ImplicitDomain& d, double rho);
ImplicitDomain translate(const ImplicitDomain& d, const Point& shift);
ImplicitDomain scale(const ImplicitDomain& d, double factor);
/// Union of two domains (membership only, no boundary charts).
ImplicitDomain union_of(const ImplicitDomain& a, const ImplicitDomain& b);

ImplicitDomain from_recipe(const DomainRecipe& recipe);

struct Projection {
  Point point;
  double distance = 0.0;
  int chart = -1;
  double t = 0.0;
};

/// Nearest boundary point found from the chart samples plus Brent refinement.
Projection project_to_boundary(const ImplicitDomain& d, const Point& x);

/// Distance from x to the zero level set.
double boundary_distance(const ImplicitDomain& d, const Point& x);

/// Distance to the boundary, positive inside and negative outside.
double inner_signed_distance(const ImplicitDomain& d, const Point& x);

/// max over the boundary of |y - x| (refined).
double farthest_boundary_distance(const ImplicitDomain& d, const Point& x);

struct ShapeMetrics {
  double rho_shape = 0.0;  // inf over centers of R - r with B_r(x) in d in B_R(x)
  double rho_i = 0.0;      // min over the boundary of |x|
  double rho_e = 0.0;      // max over the boundary of |x|
  Point center;
  bool converged = true;
};

struct ShapeMetricsOptions {
  int starts = 20;
  double min_step = 1e-9;
  std::uint64_t seed = 0;
};

ShapeMetrics shape_metrics(const ImplicitDomain& d, const ShapeMetricsOptions& opts = {});

/// Origin-centered annulus radii only (cheap part of shape_metrics).
ShapeMetrics radial_extent(const ImplicitDomain& d);

}  // namespace nlstab
