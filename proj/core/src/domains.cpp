#include "nlstab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlstab/decimal.hpp"
#include "nlstab/error.hpp"
#include "nlstab/qmc.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

namespace {

constexpr double kPi = std::numbers::pi;

void attach_samples(ImplicitDomain& d) {
  if (d.charts.empty()) return;
  d.samples = std::make_shared<const std::vector<BoundarySample>>(
      boundary_samples(d, kDefaultBoundarySamples));
}

double chart_spacing(const Chart& c, int total_share) {
  const int m = std::max(total_share, 2);
  return (c.t1 - c.t0) / (c.periodic ? m : m - 1);
}

// Distance from (x, y), x, y >= 0, to the ellipse x^2/a^2 + y^2/b^2 = 1 with
// a >= b, via a safeguarded Newton iteration on the Lagrange parameter.
double ellipse_distance(double a, double b, double x, double y) {
  if (a == b) return std::abs(std::hypot(x, y) - a);
  if (y > 0.0) {
    if (x > 0.0) {
      const double ax = a * x;
      const double by = b * y;
      // Lagrange parameter shifted by b^2, so tiny y does not cancel.
      const double gap = a * a - b * b;
      auto F = [&](double t) {
        const double u = ax / (t + gap);
        const double v = by / t;
        return u * u + v * v - 1.0;
      };
      auto dF = [&](double t) {
        const double ta = t + gap;
        return -2.0 * ax * ax / (ta * ta * ta) - 2.0 * by * by / (t * t * t);
      };
      double lo = by;
      double hi = std::hypot(ax, by);
      double t = lo;
      for (int it = 0; it < 200; ++it) {
        const double f = F(t);
        if (f == 0.0) break;
        if (f > 0.0) lo = std::max(lo, t); else hi = std::min(hi, t);
        double next = t - f / dF(t);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::abs(t)) {
          t = next;
          break;
        }
        t = next;
      }
      const double qx = a * a * x / (t + gap);
      const double qy = b * b * y / t;
      return std::hypot(x - qx, y - qy);
    }
    return std::abs(y - b);
  }
  const double threshold = (a * a - b * b) / a;
  if (x < threshold) {
    const double qx = a * a * x / (a * a - b * b);
    const double r = qx / a;
    const double qy = b * std::sqrt(std::max(0.0, 1.0 - r * r));
    return std::hypot(qx - x, qy);
  }
  return std::abs(x - a);
}

std::string dec(double x) { return to_decimal(x); }

}  // namespace

double DomainRecipe::number(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) fail(ErrorCode::kInvalidArgument, "recipe '" + kind + "' lacks '" + key + "'");
  return parse_decimal(it->second);
}

nlohmann::json to_json(const DomainRecipe& recipe) {
  nlohmann::json j;
  j["kind"] = recipe.kind;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : recipe.params) j["params"][k] = v;
  if (recipe.regularity) {
    j["regularity"] = {{"alpha", dec(recipe.regularity->alpha)},
                       {"M", dec(recipe.regularity->M)},
                       {"rho", dec(recipe.regularity->rho)}};
  } else {
    j["regularity"] = nullptr;
  }
  if (!recipe.children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& c : recipe.children) j["children"].push_back(to_json(c));
  }
  return j;
}

DomainRecipe recipe_from_json(const nlohmann::json& j) {
  DomainRecipe r;
  if (!j.is_object() || !j.contains("kind")) {
    fail(ErrorCode::kInvalidArgument, "domain recipe must be an object with 'kind'");
  }
  r.kind = j.at("kind").get<std::string>();
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) {
      r.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  if (j.contains("regularity") && !j.at("regularity").is_null()) {
    const auto& g = j.at("regularity");
    auto num = [&](const char* key) {
      const auto& v = g.at(key);
      return v.is_string() ? parse_decimal(v.get<std::string>()) : v.get<double>();
    };
    r.regularity = Regularity{num("alpha"), num("M"), num("rho")};
  }
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) r.children.push_back(recipe_from_json(c));
  }
  return r;
}

Point ImplicitDomain::level_gradient(const Point& x) const {
  if (gradient) return gradient(x);
  Point g(x.size());
  Point y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-7 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    const double fp = level(y);
    y[i] = x[i] - h;
    const double fm = level(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Point ImplicitDomain::normal(const Point& x) const {
  Point g = level_gradient(x);
  const double n = g.norm();
  if (!(n > 0.0)) fail(ErrorCode::kProjectionNonconvergence, "degenerate level gradient");
  return g / n;
}

std::vector<BoundarySample> boundary_samples(const ImplicitDomain& d, int count) {
  if (d.charts.empty()) {
    fail(ErrorCode::kInvalidArgument, "domain '" + d.recipe.kind + "' has no boundary charts");
  }
  long weight = 0;
  for (const auto& c : d.charts) weight += c.samples;
  std::vector<BoundarySample> out;
  out.reserve(count + d.charts.size());
  for (std::size_t ci = 0; ci < d.charts.size(); ++ci) {
    const Chart& c = d.charts[ci];
    const int m = std::max(2, static_cast<int>(std::llround(double(count) * c.samples / weight)));
    for (int i = 0; i < m; ++i) {
      const double t = c.periodic ? c.t0 + (i + 0.5) * (c.t1 - c.t0) / m
                                  : c.t0 + i * (c.t1 - c.t0) / (m - 1);
      out.push_back({c.map(t), static_cast<int>(ci), t});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elementary domains

ImplicitDomain ball(const Point& center, double r) {
  if (!(r > 0.0)) fail(ErrorCode::kInvalidRadius, "ball radius must be positive");
  ImplicitDomain d;
  d.dim = static_cast<int>(center.size());
  d.level = [center, r](const Point& x) { return (x - center).norm() - r; };
  d.exact_sdf = d.level;
  d.gradient = [center](const Point& x) -> Point {
    Point g = x - center;
    const double n = g.norm();
    if (n == 0.0) return unit_vector(static_cast<int>(x.size()), 0);
    return g / n;
  };
  d.bbox = {(center.array() - r).matrix(), (center.array() + r).matrix()};
  d.interior_ball_radius = r;
  if (d.dim == 2) {
    d.charts.push_back({[center, r](double t) -> Point {
                          return center + r * make_point({std::cos(t), std::sin(t)});
                        },
                        0.0, 2.0 * kPi, true, 1});
  }
  d.recipe.kind = "ball";
  for (int i = 0; i < d.dim; ++i) d.recipe.params["c" + std::to_string(i)] = dec(center[i]);
  d.recipe.params["r"] = dec(r);
  attach_samples(d);
  return d;
}

ImplicitDomain ellipsoid(int n, double eps) {
  if (n < 2 || n > kMaxDim) fail(ErrorCode::kParameterDomain, "ellipsoid dimension must be in [2, 4]");
  if (!(eps >= 0.0 && eps < 0.25)) fail(ErrorCode::kEpsOutOfRange, "eps must lie in [0, 1/4)");
  const double a = 1.0 + eps;
  ImplicitDomain d;
  d.dim = n;
  d.level = [a](const Point& x) {
    const double u = x[0] / a;
    return u * u + x.tail(x.size() - 1).squaredNorm() - 1.0;
  };
  d.gradient = [a](const Point& x) -> Point {
    Point g = 2.0 * x;
    g[0] = 2.0 * x[0] / (a * a);
    return g;
  };
  d.exact_sdf = [a](const Point& x) {
    const double x1 = std::abs(x[0]);
    const double rho = x.tail(x.size() - 1).norm();
    const double dist = ellipse_distance(a, 1.0, x1, rho);
    const double u = x1 / a;
    return (u * u + rho * rho < 1.0) ? -dist : dist;
  };
  Point hi = Point::Ones(n);
  hi[0] = a;
  d.bbox = {-hi, hi};
  d.interior_ball_radius = 1.0 / a;
  if (n == 2) {
    d.charts.push_back({[a](double t) -> Point { return make_point({a * std::cos(t), std::sin(t)}); },
                        0.0, 2.0 * kPi, true, 1});
  }
  d.recipe.kind = "ellipsoid";
  d.recipe.params["n"] = std::to_string(n);
  d.recipe.params["eps"] = dec(eps);
  attach_samples(d);
  return d;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double bump_cutoff(double t) {
  const double at = std::abs(t);
  if (at >= 0.5) return 0.0;
  return 2.0 * t * (1.0 - smooth_step((at - 0.25) / 0.25));
}

double bump_profile(double eps, double alpha, double tau) {
  const double center = std::pow(eps, 1.0 - 1.0 / alpha);
  const double width = std::pow(eps, 1.0 / alpha);
  return -std::sqrt(1.0 - tau * tau) - eps * bump_cutoff((tau - center) / width);
}

double holder_norm(const std::function<double(double)>& f, double alpha, double a, double b,
                   double focus_lo, double focus_hi, int points) {
  if (!(alpha > 1.0 && alpha <= 4.0)) fail(ErrorCode::kParameterDomain, "holder_norm needs alpha in (1, 4]");
  const int order = static_cast<int>(std::ceil(alpha)) - 1;
  const double frac = alpha - order;
  const double focus_w = std::max(focus_hi - focus_lo, 1e-12);
  const double h = std::min(1e-3 * (b - a), 1e-2 * focus_w);
  std::vector<double> xs;
  for (int i = 0; i < points; ++i) {
    xs.push_back(a + 2 * h * order + (b - a - 4 * h * order) * i / (points - 1.0));
    xs.push_back(focus_lo + focus_w * i / (points - 1.0));
  }
  std::erase_if(xs, [&](double x) { return x - order * h < a || x + order * h > b; });
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto derivative = [&](double x, int k) {
    switch (k) {
      case 0: return f(x);
      case 1: return (f(x + h) - f(x - h)) / (2 * h);
      case 2: return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
      default:
        return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    }
  };
  double norm = 0.0;
  std::vector<double> top(xs.size());
  for (int k = 0; k <= order; ++k) {
    double mx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = derivative(xs[i], k);
      mx = std::max(mx, std::abs(v));
      if (k == order) top[i] = v;
    }
    norm += mx;
  }
  double semi = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double dx = xs[j] - xs[i];
      if (dx < 2 * h) continue;
      semi = std::max(semi, std::abs(top[j] - top[i]) / std::pow(dx, frac));
    }
  }
  return norm + semi;
}

ImplicitDomain bump_domain(double eps, double alpha) {
  if (!(alpha > 1.0)) fail(ErrorCode::kParameterDomain, "bump_domain needs alpha > 1");
  if (!(eps > 0.0)) fail(ErrorCode::kEpsOutOfRange, "bump_domain needs eps > 0");
  const double center = std::pow(eps, 1.0 - 1.0 / alpha);
  const double width = std::pow(eps, 1.0 / alpha);
  // The graph must stay in (-1/2, 1/2) x (-3/2, -1/2).
  if (center - width <= -0.5 || center + width >= 0.5 || eps >= 0.25) {
    std::ostringstream msg;
    msg << "bump_domain: eps=" << eps << " too large for alpha=" << alpha
        << " (bump support [" << center - width << ", " << center + width << "] leaves the strip)";
    fail(ErrorCode::kEpsOutOfRange, msg.str());
  }
  auto bump = [eps, center, width](double tau) { return eps * bump_cutoff((tau - center) / width); };

  ImplicitDomain d;
  d.dim = 2;
  d.level = [bump](const Point& x) {
    // Shift the lower part of the plane vertically by the bump; the zero set
    // is the unit circle away from the strip and the graph inside it.
    const double blend = 1.0 - smooth_step((x[1] + 0.5) / 0.25);
    return std::hypot(x[0], x[1] + blend * bump(x[0])) - 1.0;
  };
  d.bbox = {make_point({-1.0, -1.0 - eps}), make_point({1.0, 1.0})};
  auto graph = [eps, alpha](double tau) -> Point {
    return make_point({tau, bump_profile(eps, alpha, tau)});
  };
  d.charts.push_back({graph, -0.5, 0.5, false, 2});
  d.charts.push_back({graph, center - width, center + width, false, 1});
  d.charts.push_back({[](double t) -> Point { return make_point({std::cos(t), std::sin(t)}); },
                      -kPi / 3.0, 4.0 * kPi / 3.0, false, 1});

  const double M = holder_norm([eps, alpha](double tau) { return bump_profile(eps, alpha, tau); },
                               std::min(alpha, 4.0), -0.5, 0.5, center - width, center + width);
  d.regularity = Regularity{alpha, M, 0.125};
  d.recipe.kind = "bump";
  d.recipe.params["eps"] = dec(eps);
  d.recipe.params["alpha"] = dec(alpha);
  d.recipe.regularity = d.regularity;
  attach_samples(d);
  return d;
}

// ---------------------------------------------------------------------------
// Derived domains

ImplicitDomain erode(const ImplicitDomain& base, double rho) {
  if (!base.interior_ball_radius) {
    fail(ErrorCode::kInvalidArgument, "erode needs a domain with an interior ball radius");
  }
  if (!(rho > 0.0) || rho >= *base.interior_ball_radius) {
    fail(ErrorCode::kErosionTooLarge, "erosion radius must lie in (0, interior_ball_radius)");
  }
  auto parent = std::make_shared<const ImplicitDomain>(base);
  ImplicitDomain d;
  d.dim = base.dim;
  d.level = [parent, rho](const Point& x) { return rho - inner_signed_distance(*parent, x); };
  if (base.exact_sdf) d.exact_sdf = d.level;
  d.bbox = base.bbox;
  d.interior_ball_radius = *base.interior_ball_radius - rho;
  for (const Chart& c : base.charts) {
    Chart moved = c;
    moved.map = [parent, rho, inner = c.map](double t) -> Point {
      const Point p = inner(t);
      return p - rho * parent->normal(p);
    };
    d.charts.push_back(std::move(moved));
  }
  d.recipe.kind = "eroded";
  d.recipe.params["rho"] = dec(rho);
  d.recipe.children.push_back(base.recipe);
  attach_samples(d);
  return d;
}

ImplicitDomain translate(const ImplicitDomain& base, const Point& shift) {
  auto parent = std::make_shared<const ImplicitDomain>(base);
  ImplicitDomain d;
  d.dim = base.dim;
  d.level = [parent, shift](const Point& x) { return parent->level(x - shift); };
  if (base.gradient) {
    d.gradient = [parent, shift](const Point& x) { return parent->gradient(x - shift); };
  }
  if (base.exact_sdf) {
    d.exact_sdf = [parent, shift](const Point& x) { return (*parent->exact_sdf)(x - shift); };
  }
  d.bbox = {base.bbox.lo + shift, base.bbox.hi + shift};
  d.interior_ball_radius = base.interior_ball_radius;
  d.regularity = base.regularity;
  for (const Chart& c : base.charts) {
    Chart moved = c;
    moved.map = [shift, inner = c.map](double t) -> Point { return inner(t) + shift; };
    d.charts.push_back(std::move(moved));
  }
  d.recipe.kind = "translated";
  for (int i = 0; i < d.dim; ++i) d.recipe.params["v" + std::to_string(i)] = dec(shift[i]);
  d.recipe.children.push_back(base.recipe);
  attach_samples(d);
  return d;
}

ImplicitDomain scale(const ImplicitDomain& base, double factor) {
  if (!(factor > 0.0)) fail(ErrorCode::kInvalidArgument, "scale factor must be positive");
  auto parent = std::make_shared<const ImplicitDomain>(base);
  ImplicitDomain d;
  d.dim = base.dim;
  d.level = [parent, factor](const Point& x) { return parent->level(x / factor); };
  if (base.exact_sdf) {
    d.exact_sdf = [parent, factor](const Point& x) {
      return factor * (*parent->exact_sdf)(x / factor);
    };
  }
  d.bbox = {factor * base.bbox.lo, factor * base.bbox.hi};
  if (base.interior_ball_radius) d.interior_ball_radius = factor * *base.interior_ball_radius;
  for (const Chart& c : base.charts) {
    Chart moved = c;
    moved.map = [factor, inner = c.map](double t) -> Point { return factor * inner(t); };
    d.charts.push_back(std::move(moved));
  }
  d.recipe.kind = "scaled";
  d.recipe.params["factor"] = dec(factor);
  d.recipe.children.push_back(base.recipe);
  attach_samples(d);
  return d;
}

ImplicitDomain union_of(const ImplicitDomain& a, const ImplicitDomain& b) {
  if (a.dim != b.dim) fail(ErrorCode::kInvalidArgument, "union of domains of different dimension");
  auto pa = std::make_shared<const ImplicitDomain>(a);
  auto pb = std::make_shared<const ImplicitDomain>(b);
  ImplicitDomain d;
  d.dim = a.dim;
  d.level = [pa, pb](const Point& x) { return std::min(pa->level(x), pb->level(x)); };
  d.bbox = a.bbox.hull(b.bbox);
  d.recipe.kind = "union";
  d.recipe.children = {a.recipe, b.recipe};
  return d;
}

ImplicitDomain from_recipe(const DomainRecipe& r) {
  if (r.kind == "ball") {
    const int dim = static_cast<int>(r.params.size()) - 1;
    if (dim < 1 || dim > kMaxDim) fail(ErrorCode::kInvalidArgument, "ball recipe has a bad center");
    Point c(dim);
    for (int i = 0; i < dim; ++i) c[i] = r.number("c" + std::to_string(i));
    return ball(c, r.number("r"));
  }
  if (r.kind == "ellipsoid") {
    return ellipsoid(static_cast<int>(r.number("n")), r.number("eps"));
  }
  if (r.kind == "bump") return bump_domain(r.number("eps"), r.number("alpha"));
  if (r.children.empty() && r.kind != "ball") {
    fail(ErrorCode::kInvalidArgument, "unknown domain kind '" + r.kind + "'");
  }
  if (r.kind == "eroded") return erode(from_recipe(r.children.at(0)), r.number("rho"));
  if (r.kind == "scaled") return scale(from_recipe(r.children.at(0)), r.number("factor"));
  if (r.kind == "translated") {
    ImplicitDomain base = from_recipe(r.children.at(0));
    Point v(base.dim);
    for (int i = 0; i < base.dim; ++i) v[i] = r.number("v" + std::to_string(i));
    return translate(base, v);
  }
  if (r.kind == "union" && r.children.size() == 2) {
    return union_of(from_recipe(r.children[0]), from_recipe(r.children[1]));
  }
  fail(ErrorCode::kInvalidArgument, "unknown domain kind '" + r.kind + "'");
}

// ---------------------------------------------------------------------------
// Distances

namespace {

struct Candidate {
  double score;
  std::size_t index;
};

// Best `keep` samples by score (ascending), then Brent refinement of
// score(t) around each within one sample spacing.
Projection refine_extreme(const ImplicitDomain& d, const Point& x, bool farthest) {
  if (d.charts.empty()) {
    fail(ErrorCode::kInvalidArgument, "domain '" + d.recipe.kind + "' has no boundary charts");
  }
  std::vector<BoundarySample> local;
  const std::vector<BoundarySample>* samples = d.samples.get();
  if (!samples) {
    local = boundary_samples(d, kDefaultBoundarySamples);
    samples = &local;
  }
  const double sign = farthest ? -1.0 : 1.0;
  constexpr std::size_t kKeep = 4;
  std::vector<Candidate> best;
  for (std::size_t i = 0; i < samples->size(); ++i) {
    const double score = sign * ((*samples)[i].p - x).squaredNorm();
    if (best.size() < kKeep || score < best.back().score) {
      auto pos = std::upper_bound(best.begin(), best.end(), score,
                                  [](double s, const Candidate& c) { return s < c.score; });
      best.insert(pos, {score, i});
      if (best.size() > kKeep) best.pop_back();
    }
  }
  long weight = 0;
  for (const auto& c : d.charts) weight += c.samples;

  Projection out;
  double out_score = std::numeric_limits<double>::infinity();
  for (const Candidate& cand : best) {
    const BoundarySample& s = (*samples)[cand.index];
    const Chart& chart = d.charts[s.chart];
    const int share = static_cast<int>(double(kDefaultBoundarySamples) * chart.samples / weight);
    const double dt = 1.5 * chart_spacing(chart, share);
    double lo = s.t - dt;
    double hi = s.t + dt;
    if (!chart.periodic) {
      lo = std::max(lo, chart.t0);
      hi = std::min(hi, chart.t1);
    }
    auto score = [&](double t) { return -sign * (chart.map(t) - x).squaredNorm(); };
    quad::Extremum e = quad::maximize(score, lo, hi, 52);
    double t = e.x;
    double val = -e.value;
    if (cand.score < val) {
      t = s.t;
      val = cand.score;
    }
    if (val < out_score) {
      out_score = val;
      out.chart = s.chart;
      out.t = t;
      out.point = chart.map(t);
    }
  }
  out.distance = (out.point - x).norm();
  return out;
}

}  // namespace

Projection project_to_boundary(const ImplicitDomain& d, const Point& x) {
  return refine_extreme(d, x, false);
}

double boundary_distance(const ImplicitDomain& d, const Point& x) {
  if (d.exact_sdf) return std::abs((*d.exact_sdf)(x));
  return project_to_boundary(d, x).distance;
}

double inner_signed_distance(const ImplicitDomain& d, const Point& x) {
  if (d.exact_sdf) return -(*d.exact_sdf)(x);
  const double dist = project_to_boundary(d, x).distance;
  return d.contains(x) ? dist : -dist;
}

double farthest_boundary_distance(const ImplicitDomain& d, const Point& x) {
  return refine_extreme(d, x, true).distance;
}

ShapeMetrics radial_extent(const ImplicitDomain& d) {
  const Point origin = Point::Zero(d.dim);
  ShapeMetrics m;
  m.rho_i = project_to_boundary(d, origin).distance;
  m.rho_e = farthest_boundary_distance(d, origin);
  m.center = origin;
  return m;
}

ShapeMetrics shape_metrics(const ImplicitDomain& d, const ShapeMetricsOptions& opts) {
  ShapeMetrics m = radial_extent(d);
  if (d.dim != 2) fail(ErrorCode::kParameterDomain, "shape_metrics supports n = 2");

  auto objective = [&](const Point& x) {
    return farthest_boundary_distance(d, x) - inner_signed_distance(d, x);
  };
  const auto& samples = *d.samples;
  Point centroid = Point::Zero(d.dim);
  for (const auto& s : samples) centroid += s.p;
  centroid /= static_cast<double>(samples.size());

  const double diam = d.bbox.diagonal();
  std::vector<Point> dirs;
  for (int k = 0; k < 8; ++k) {
    const double th = k * kPi / 4.0;
    dirs.push_back(make_point({std::cos(th), std::sin(th)}));
  }
  SplitMix64 rng(opts.seed);
  std::vector<Point> starts{centroid};
  for (int k = 0; k < opts.starts; ++k) {
    starts.push_back(centroid + 0.1 * diam * make_point({rng.uniform() - 0.5, rng.uniform() - 0.5}));
  }

  double best = std::numeric_limits<double>::infinity();
  Point best_x = centroid;
  bool converged = true;
  for (const Point& start : starts) {
    Point x = start;
    double fx = objective(x);
    double step = 0.05 * diam;
    int evals = 0;
    while (step > opts.min_step) {
      bool improved = false;
      for (const Point& dir : dirs) {
        const Point y = x + step * dir;
        const double fy = objective(y);
        ++evals;
        if (fy < fx) {
          x = y;
          fx = fy;
          improved = true;
          break;
        }
      }
      if (!improved) step *= 0.5;
      if (evals > 20000) {
        converged = false;
        break;
      }
    }
    if (fx < best) {
      best = fx;
      best_x = x;
    }
  }
  m.rho_shape = std::max(0.0, best);
  m.center = best_x;
  m.converged = converged;
  return m;
}

}  // namespace nlstab
