#include "nlstab/movingplanes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "nlstab/decimal.hpp"
#include "nlstab/error.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

double chart_step(const ImplicitDomain& d, const std::vector<BoundarySample>& samples, int chart) {
  const Chart& c = d.charts[chart];
  const auto n = std::count_if(samples.begin(), samples.end(),
                               [chart](const BoundarySample& s) { return s.chart == chart; });
  return (c.t1 - c.t0) / std::max<long>(1, n - 1);
}

std::pair<double, double> window(const Chart& c, double t, double dt) {
  double lo = t - dt;
  double hi = t + dt;
  if (!c.periodic) {
    lo = std::max(lo, c.t0);
    hi = std::min(hi, c.t1);
  }
  return {lo, hi};
}

void check_direction(const ImplicitDomain& d, const Point& e) {
  if (e.size() != d.dim || std::abs(e.norm() - 1.0) > 1e-12) {
    fail(ErrorCode::kInvalidArgument, "direction must be a unit vector of the domain dimension");
  }
  if (d.charts.empty()) {
    fail(ErrorCode::kInvalidArgument, "moving planes need a domain with boundary charts");
  }
}

const std::vector<BoundarySample>& samples_of(const ImplicitDomain& d, int count,
                                              std::vector<BoundarySample>& storage) {
  if (d.samples && static_cast<int>(d.samples->size()) >= count) return *d.samples;
  storage = boundary_samples(d, count);
  return storage;
}

// Boundary point with normal orthogonal to e (an interior extremum of
// x.e_perp along a chart) lying within `band` of the plane {x.e = mu}.
std::optional<Point> orthogonal_point(const ImplicitDomain& d,
                                      const std::vector<BoundarySample>& samples, double mu,
                                      const Point& e, double band) {
  if (d.dim != 2) return std::nullopt;
  const Point perp = make_point({-e[1], e[0]});
  std::optional<Point> best;
  double best_gap = band;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const BoundarySample& a = samples[i - 1];
    const BoundarySample& b = samples[i];
    const BoundarySample& c = samples[i + 1];
    if (a.chart != b.chart || c.chart != b.chart) continue;
    const double ha = a.p.dot(perp);
    const double hb = b.p.dot(perp);
    const double hc = c.p.dot(perp);
    const bool is_max = hb >= ha && hb >= hc;
    const bool is_min = hb <= ha && hb <= hc;
    if (!is_max && !is_min) continue;
    const Chart& chart = d.charts[b.chart];
    const double sign = is_max ? 1.0 : -1.0;
    const quad::Extremum m = quad::maximize(
        [&](double t) { return sign * chart.map(t).dot(perp); }, a.t, c.t, 52);
    const Point p = chart.map(m.x);
    const double gap = std::abs(p.dot(e) - mu);
    if (gap <= best_gap) {
      best_gap = gap;
      best = p;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(PlaneCase c) {
  switch (c) {
    case PlaneCase::kInternalTangency: return "internal-tangency";
    case PlaneCase::kBoundaryOrthogonality: return "boundary-orthogonality";
    case PlaneCase::kUnresolved: break;
  }
  return "unresolved";
}

nlohmann::json to_json(const CriticalPlaneResult& r) {
  auto vec = [](const Point& p) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
    return a;
  };
  return {{"e", vec(r.e)},
          {"Lambda", r.Lambda},
          {"lambda", r.lambda},
          {"case", std::string(to_string(r.case_tag))},
          {"witness", vec(r.witness)},
          {"tol", r.tol}};
}

Point reflect(const Point& x, double mu, const Point& e) { return x - 2.0 * (x.dot(e) - mu) * e; }

double support_value(const ImplicitDomain& d, const Point& e) {
  check_direction(d, e);
  std::vector<BoundarySample> storage;
  const auto& samples = samples_of(d, kDefaultBoundarySamples, storage);
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t keep = std::min<std::size_t>(4, order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](auto a, auto b) {
    return samples[a].p.dot(e) > samples[b].p.dot(e);
  });
  double best = samples[order[0]].p.dot(e);
  for (std::size_t k = 0; k < keep; ++k) {
    const BoundarySample& s = samples[order[k]];
    const Chart& c = d.charts[s.chart];
    auto [lo, hi] = window(c, s.t, 1.5 * chart_step(d, samples, s.chart));
    const quad::Extremum m = quad::maximize([&](double t) { return c.map(t).dot(e); }, lo, hi, 52);
    best = std::max(best, m.value);
  }
  return best;
}

Violation violation(const ImplicitDomain& d, const std::vector<BoundarySample>& samples, double mu,
                    const Point& e, int refine_top) {
  Violation out;
  out.value = kNone;
  std::vector<std::pair<double, std::size_t>> scores;
  scores.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Point& q = samples[i].p;
    if (q.dot(e) <= mu) continue;
    scores.emplace_back(d.level(reflect(q, mu, e)), i);
  }
  if (scores.empty()) return out;
  out.any_cap = true;
  const std::size_t keep = std::min<std::size_t>(std::max(refine_top, 1), scores.size());
  std::partial_sort(scores.begin(), scores.begin() + keep, scores.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  out.value = scores[0].first;
  out.boundary_point = samples[scores[0].second].p;
  for (std::size_t k = 0; k < keep && refine_top > 0; ++k) {
    const BoundarySample& s = samples[scores[k].second];
    const Chart& c = d.charts[s.chart];
    auto [lo, hi] = window(c, s.t, 1.5 * chart_step(d, samples, s.chart));
    auto excess = [&](double t) {
      const Point q = c.map(t);
      return q.dot(e) > mu ? d.level(reflect(q, mu, e)) : -1e300;
    };
    const quad::Extremum m = quad::maximize(excess, lo, hi, 52);
    if (m.value > out.value) {
      out.value = m.value;
      out.boundary_point = c.map(m.x);
    }
  }
  return out;
}

CriticalPlaneResult critical_lambda(const ImplicitDomain& d, const Point& e,
                                    const CriticalPlaneOptions& opts) {
  check_direction(d, e);
  if (!(opts.tol > 0.0) || opts.samples < 16 || opts.scan_steps < 1) {
    fail(ErrorCode::kInvalidArgument, "critical_lambda options out of range");
  }
  std::vector<BoundarySample> storage;
  const auto& samples = samples_of(d, opts.samples, storage);

  CriticalPlaneResult res;
  res.e = e;
  res.tol = opts.tol;
  res.Lambda = support_value(d, e);
  const double bottom = -support_value(d, -e);
  auto violated = [&](double mu) {
    return violation(d, samples, mu, e, opts.refine_top).value > opts.threshold;
  };

  // Downward scan for the first violation, then bisection.
  const double step = (res.Lambda - bottom) / (2.0 * opts.scan_steps);
  double hi = res.Lambda;
  double lo = hi;
  bool found = false;
  while (lo > bottom) {
    lo = std::max(bottom, hi - step);
    if (violated(lo)) {
      found = true;
      break;
    }
    hi = lo;
  }
  if (!found) {
    res.lambda = bottom;
    res.witness = Point::Zero(d.dim);
    return res;
  }
  while (hi - lo > 0.5 * opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (violated(mid)) lo = mid; else hi = mid;
  }
  res.lambda = hi;

  const Violation below = violation(d, samples, res.lambda - opts.tol, e, opts.refine_top);
  res.witness = below.any_cap ? below.boundary_point : Point::Zero(d.dim);
  if (!(below.value > opts.threshold)) return res;  // no witness: unresolved

  // A violation above lambda that the scan stepped over makes the
  // first-sign-change reading unreliable.
  for (int k = 1; k < 64; ++k) {
    const double mu = res.lambda + opts.tol + (res.Lambda - res.lambda - opts.tol) * k / 64.0;
    if (violated(mu)) return res;
  }
  if (auto p = orthogonal_point(d, samples, res.lambda, e, 10.0 * opts.tol)) {
    res.case_tag = PlaneCase::kBoundaryOrthogonality;
    res.witness = *p;
  } else {
    res.case_tag = PlaneCase::kInternalTangency;
    res.witness = reflect(res.witness, res.lambda, e);
  }
  return res;
}

ImplicitDomain reflected_domain(const ImplicitDomain& d, const CriticalPlaneResult& res) {
  auto parent = std::make_shared<const ImplicitDomain>(d);
  const Point e = res.e;
  const double mu = res.lambda;
  ImplicitDomain out;
  out.dim = d.dim;
  out.level = [parent, e, mu](const Point& x) { return parent->level(reflect(x, mu, e)); };
  if (d.exact_sdf) {
    out.exact_sdf = [parent, e, mu](const Point& x) { return (*parent->exact_sdf)(reflect(x, mu, e)); };
  }
  Box box{reflect(d.bbox.lo, mu, e), reflect(d.bbox.lo, mu, e)};
  for (int c = 0; c < (1 << d.dim); ++c) {
    Point corner(d.dim);
    for (int i = 0; i < d.dim; ++i) corner[i] = (c >> i & 1) ? d.bbox.hi[i] : d.bbox.lo[i];
    const Point r = reflect(corner, mu, e);
    box = box.hull({r, r});
  }
  out.bbox = box;
  out.interior_ball_radius = d.interior_ball_radius;
  for (const Chart& c : d.charts) {
    Chart moved = c;
    moved.map = [inner = c.map, e, mu](double t) -> Point { return reflect(inner(t), mu, e); };
    out.charts.push_back(std::move(moved));
  }
  if (!out.charts.empty()) {
    out.samples = std::make_shared<const std::vector<BoundarySample>>(
        boundary_samples(out, kDefaultBoundarySamples));
  }
  out.recipe.kind = "reflected";
  out.recipe.params["lambda"] = to_decimal(mu);
  for (int i = 0; i < d.dim; ++i) out.recipe.params["e" + std::to_string(i)] = to_decimal(e[i]);
  out.recipe.children.push_back(d.recipe);
  return out;
}

}  // namespace nlstab
