#include "nlstab/frlap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlstab/error.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

namespace {

constexpr double kPi = std::numbers::pi;

int half_count(int n, int floor) { return std::max(floor, n / 2); }

struct Segment {
  double lo;
  double hi;
};

// Parts of the ray x + t w, t in [t0, t1], inside the support.
std::vector<Segment> inside_segments(const ImplicitDomain& d, const Point& x, const Point& w,
                                     double t0, double t1) {
  constexpr int kSamples = 256;
  auto level = [&](double t) { return d.level(x + t * w); };
  std::vector<Segment> out;
  double prev_t = t0;
  double prev = level(t0);
  double start = prev < 0.0 ? t0 : -1.0;
  for (int k = 1; k < kSamples; ++k) {
    const double t = t0 + (t1 - t0) * k / (kSamples - 1.0);
    const double v = level(t);
    if ((v < 0.0) != (prev < 0.0)) {
      const double c = quad::bisect(level, prev_t, t, 1e-15 * (1.0 + t));
      if (v < 0.0) {
        start = c;
      } else {
        out.push_back({start, c});
        start = -1.0;
      }
    }
    prev_t = t;
    prev = v;
  }
  if (start >= 0.0) out.push_back({start, t1});
  return out;
}

}  // namespace

std::string_view to_string(Smoothness s) {
  return s == Smoothness::kClosedForm ? "closed-form" : "composite";
}

ScalarField torsion_ball(const FracParams& p) {
  const double g = gamma_ns(p);
  const double s = p.s;
  ScalarField f;
  f.eval = [g, s](const Point& x) {
    const double t = 1.0 - x.squaredNorm();
    return t > 0.0 ? g * std::pow(t, s) : 0.0;
  };
  f.support = ball(Point::Zero(p.n), 1.0);
  f.params = p;
  f.boundary_singular = true;
  f.name = "torsion_ball";
  return f;
}

ScalarField torsion_ellipsoid(const FracParams& p, double eps) {
  const double g = gamma_nse(p, eps);
  const double a = 1.0 + eps;
  const double s = p.s;
  ScalarField f;
  f.eval = [g, a, s](const Point& x) {
    const double u = x[0] / a;
    const double t = 1.0 - u * u - x.tail(x.size() - 1).squaredNorm();
    return t > 0.0 ? g * std::pow(t, s) : 0.0;
  };
  f.support = ellipsoid(p.n, eps);
  f.params = p;
  f.boundary_singular = true;
  f.name = "torsion_ellipsoid";
  return f;
}

double radial_cutoff(double r) { return 1.0 - smooth_step(2.0 * r - 1.0); }

ScalarField barrier(const FracParams& p, const Point& a, double rho) {
  if (p.n != 2 || a.size() != 2) fail(ErrorCode::kParameterDomain, "barrier is implemented for n = 2");
  if (!(rho > 0.0)) fail(ErrorCode::kInvalidRadius, "barrier radius must be positive");
  if (a[0] < 0.0) fail(ErrorCode::kInvalidArgument, "barrier center must satisfy a1 >= 0");
  Point mirror = a;
  mirror[0] = -a[0];
  const double scale = std::pow(rho, 2.0 * p.s);
  ScalarField f;
  f.eval = [a, mirror, rho, scale](const Point& x) {
    const double e = radial_cutoff((x - a).norm() / rho) + radial_cutoff((x - mirror).norm() / rho);
    return e == 0.0 ? 0.0 : scale * x[0] * e;
  };
  f.support = union_of(ball(a, rho), ball(mirror, rho));
  f.smoothness = Smoothness::kComposite;
  f.params = p;
  f.length_scale = 0.5 * rho;
  f.name = "barrier";
  return f;
}

ScalarField zero_field(const FracParams& p) {
  ScalarField f;
  f.eval = [](const Point&) { return 0.0; };
  f.support = ball(Point::Zero(p.n), 1.0);
  f.params = p;
  f.name = "zero";
  return f;
}

ScalarField rescaled(const ScalarField& f, double r) {
  if (!(r > 0.0)) fail(ErrorCode::kInvalidArgument, "rescaling factor must be positive");
  ScalarField g = f;
  g.eval = [inner = f.eval, r](const Point& x) { return inner(r * x); };
  g.support = scale(f.support, 1.0 / r);
  g.length_scale = f.length_scale / r;
  g.smoothness = Smoothness::kComposite;
  g.name = f.name + "_rescaled";
  return g;
}

QuadratureConfig QuadratureConfig::coarsened() const {
  QuadratureConfig c = *this;
  c.inner_radial = half_count(inner_radial, 2);
  c.inner_angular = half_count(inner_angular, 4);
  c.outer_angular = half_count(outer_angular, 8);
  c.outer_nodes = half_count(outer_nodes, 2);
  return c;
}

nlohmann::json to_json(const QuadratureConfig& c) {
  return {{"inner_radial", c.inner_radial},
          {"inner_angular", c.inner_angular},
          {"outer_panels", c.outer_panels},
          {"outer_angular", c.outer_angular},
          {"outer_nodes", c.outer_nodes},
          {"inner_fraction", c.inner_fraction},
          {"tol", c.tol},
          {"min_boundary_distance", c.min_boundary_distance}};
}

QuadratureConfig quadrature_config_from_json(const nlohmann::json& j) {
  QuadratureConfig c;
  auto get_int = [&](const char* key, int& dst) {
    if (j.contains(key)) dst = j.at(key).get<int>();
  };
  auto get_real = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = j.at(key).get<double>();
  };
  get_int("inner_radial", c.inner_radial);
  get_int("inner_angular", c.inner_angular);
  get_int("outer_panels", c.outer_panels);
  get_int("outer_angular", c.outer_angular);
  get_int("outer_nodes", c.outer_nodes);
  get_real("inner_fraction", c.inner_fraction);
  get_real("tol", c.tol);
  get_real("min_boundary_distance", c.min_boundary_distance);
  if (c.inner_radial < 1 || c.inner_angular < 1 || c.outer_panels < 1 || c.outer_angular < 1 ||
      c.outer_nodes < 1 || !(c.inner_fraction > 0.0 && c.inner_fraction < 1.0) || !(c.tol > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "quadrature config out of range");
  }
  return c;
}

double frlap_value(const ScalarField& f, const Point& x, const QuadratureConfig& cfg) {
  if (x.size() != 2 || f.params.n != 2) {
    fail(ErrorCode::kParameterDomain, "fractional Laplacian quadrature is implemented for n = 2");
  }
  const double s = f.params.s;
  double r_in = cfg.inner_fraction * f.length_scale;
  if (f.boundary_singular) {
    const double delta = boundary_distance(f.support, x);
    if (!f.support.contains(x) || delta <= cfg.min_boundary_distance) {
      fail(ErrorCode::kPointTooCloseToBoundary, "point within the minimum boundary distance");
    }
    r_in = cfg.inner_fraction * delta;
  }
  const double fx = f.eval(x);

  // Inner ball: rho^{1-2s} times the smooth angular mean of the second
  // difference over rho^2.
  const quad::Rule jacobi = quad::gauss_jacobi(cfg.inner_radial, 0.0, 1.0 - 2.0 * s);
  const double dth = kPi / cfg.inner_angular;
  double inner = 0.0;
  for (std::size_t i = 0; i < jacobi.nodes.size(); ++i) {
    const double rho = 0.5 * r_in * (1.0 + jacobi.nodes[i]);
    double acc = 0.0;
    for (int k = 0; k < cfg.inner_angular; ++k) {
      const double th = (k + 0.5) * dth;
      Point z = make_point({rho * std::cos(th), rho * std::sin(th)});
      acc += 2.0 * fx - f.eval(x + z) - f.eval(x - z);
    }
    inner += jacobi.weights[i] * 2.0 * acc * dth / (rho * rho);
  }
  inner *= std::pow(0.5 * r_in, 2.0 - 2.0 * s);

  // Outside the inner ball: f(x) against the exact kernel mass, minus the
  // ray integrals of f.
  double t_max = 0.0;
  const Box& box = f.support.bbox;
  for (int c = 0; c < 4; ++c) {
    const Point corner = make_point({(c & 1) ? box.hi[0] : box.lo[0], (c & 2) ? box.hi[1] : box.lo[1]});
    t_max = std::max(t_max, (corner - x).norm());
  }
  t_max *= 1.01;
  const double kernel_power = -1.0 - 2.0 * s;
  double rays = 0.0;
  if (t_max > r_in) {
    for (int k = 0; k < cfg.outer_angular; ++k) {
      const double th = 2.0 * kPi * k / cfg.outer_angular;
      const Point w = make_point({std::cos(th), std::sin(th)});
      auto g = [&](double t) { return f.eval(x + t * w) * std::pow(t, kernel_power); };
      for (const Segment& seg : inside_segments(f.support, x, w, r_in, t_max)) {
        const double mid = 0.5 * (seg.lo + seg.hi);
        rays += quad::integrate_graded(g, seg.lo, mid, cfg.outer_nodes, cfg.outer_panels, true);
        rays += quad::integrate_graded(g, mid, seg.hi, cfg.outer_nodes, cfg.outer_panels, false);
      }
    }
    rays *= 2.0 * kPi / cfg.outer_angular;
  }
  const double outer = 2.0 * (fx * kPi * std::pow(r_in, -2.0 * s) / s - rays);

  return 0.5 * f.params.c_ns * (inner + outer);
}

FrLapResult frlap_eval(const ScalarField& f, const Point& x, const QuadratureConfig& cfg) {
  FrLapResult r;
  r.value = frlap_value(f, x, cfg);
  r.error = std::abs(r.value - frlap_value(f, x, cfg.coarsened()));
  r.converged = r.error <= cfg.tol * std::max(1.0, std::abs(r.value));
  return r;
}

}  // namespace nlstab
