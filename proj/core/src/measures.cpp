#include "nlstab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlstab/decimal.hpp"
#include "nlstab/error.hpp"
#include "nlstab/qmc.hpp"
#include "nlstab/quadrature.hpp"
#include "nlstab/specfun.hpp"

namespace nlstab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Interval {
  double lo;
  double hi;
};
using Intervals = std::vector<Interval>;

double length(const Intervals& a, double lo, double hi) {
  double total = 0.0;
  for (const auto& i : a) total += std::max(0.0, std::min(i.hi, hi) - std::max(i.lo, lo));
  return total;
}

double overlap(const Intervals& a, const Intervals& b, double lo, double hi) {
  double total = 0.0;
  for (const auto& i : a) {
    for (const auto& j : b) {
      const double l = std::max({i.lo, j.lo, lo});
      const double h = std::min({i.hi, j.hi, hi});
      total += std::max(0.0, h - l);
    }
  }
  return total;
}

// {t in [t0, t1] : x0 + t e inside d} from sign changes of the level.
Intervals chords(const ImplicitDomain& d, const Point& x0, const Point& e, double t0, double t1,
                 int samples) {
  auto level = [&](double t) { return d.level(x0 + t * e); };
  Intervals out;
  double prev_t = t0;
  double start = t0;
  bool inside = level(t0) < 0.0;
  for (int k = 1; k < samples; ++k) {
    const double t = t0 + (t1 - t0) * k / (samples - 1.0);
    const double v = level(t);
    if ((v < 0.0) != inside) {
      const double c = quad::bisect(level, prev_t, t, 1e-15);
      if (!inside) {
        start = c;
      } else {
        out.push_back({start, c});
      }
      inside = !inside;
    }
    prev_t = t;
  }
  if (inside) out.push_back({start, t1});
  return out;
}

Intervals mirrored(const Intervals& a, double mu) {
  Intervals out;
  for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back({2 * mu - it->hi, 2 * mu - it->lo});
  return out;
}

Box reflected_hull(const ImplicitDomain& d, const CriticalPlaneResult& res) {
  Box box = d.bbox;
  for (int c = 0; c < (1 << d.dim); ++c) {
    Point corner(d.dim);
    for (int i = 0; i < d.dim; ++i) corner[i] = (c >> i & 1) ? d.bbox.hi[i] : d.bbox.lo[i];
    const Point r = reflect(corner, res.lambda, res.e);
    box = box.hull({r, r});
  }
  return box;
}

enum class LineQuantity { kSymmetric, kOneSided };

struct LineIntegral {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

// Integral over lines x = t e + y e_perp of the chord measure of the
// requested difference set restricted to |t - lambda| <= half_width:
// adaptive Gauss-Kronrod in y on `panels` equal panels.
LineIntegral line_integral(const ImplicitDomain& d, const CriticalPlaneResult& res,
                           double half_width, LineQuantity what, long panels) {
  const Point& e = res.e;
  const Point perp = make_point({-e[1], e[0]});
  double ylo = 1e300, yhi = -1e300, tlo = 1e300, thi = -1e300;
  for (int c = 0; c < 4; ++c) {
    const Point corner = make_point({(c & 1) ? d.bbox.hi[0] : d.bbox.lo[0],
                                     (c & 2) ? d.bbox.hi[1] : d.bbox.lo[1]});
    ylo = std::min(ylo, corner.dot(perp));
    yhi = std::max(yhi, corner.dot(perp));
    tlo = std::min(tlo, corner.dot(e));
    thi = std::max(thi, corner.dot(e));
  }
  const double mu = res.lambda;
  // The window is symmetric about mu, so the chords inside it determine the
  // mirrored chords inside it.
  const double reach = std::max(std::abs(tlo - mu), std::abs(thi - mu));
  const double half = std::min(half_width, reach);
  const double wlo = mu - half - 1e-9;
  const double whi = mu + half + 1e-9;
  const int samples = std::clamp(static_cast<int>(std::ceil(half * 640.0)), 64, 1024);

  LineIntegral out;
  auto chord_measure = [&](double y) {
    ++out.evaluations;
    const Intervals a = chords(d, y * perp, e, wlo, whi, samples);
    const Intervals b = mirrored(a, mu);
    double len = 0.0;
    if (what == LineQuantity::kSymmetric) {
      len = length(a, wlo, whi) + length(b, wlo, whi) - 2.0 * overlap(a, b, wlo, whi);
    } else {
      len = length(a, wlo, mu) - overlap(a, b, wlo, mu);
    }
    // Rounding-level lengths would keep the relative GK tolerance from
    // ever being met on an (almost) symmetric domain.
    return len > 1e-13 ? len : 0.0;
  };
  const double h = (yhi - ylo) / panels;
  for (long k = 0; k < panels; ++k) {
    double rel_err = 0.0;
    double l1 = 0.0;
    out.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        chord_measure, ylo + k * h, ylo + (k + 1) * h, 15, 1e-9, &rel_err, &l1);
    out.error += rel_err * l1;
  }
  return out;
}

MeasureEstimate grid_estimate(const ImplicitDomain& d, const CriticalPlaneResult& res,
                              double half_width, LineQuantity what, long panels) {
  if (d.dim != 2) fail(ErrorCode::kParameterDomain, "grid measures are implemented for n = 2");
  if (panels < 1) fail(ErrorCode::kInvalidArgument, "grid method needs at least one panel");
  const LineIntegral li = line_integral(d, res, half_width, what, panels);
  MeasureEstimate m;
  m.method = MeasureMethod::kGrid;
  m.n_samples = li.evaluations;
  m.value = li.value;
  m.error = li.error;
  return m;
}

}  // namespace

std::string_view to_string(MeasureMethod m) {
  switch (m) {
    case MeasureMethod::kMonteCarlo: return "monte-carlo";
    case MeasureMethod::kGrid: return "grid";
    case MeasureMethod::kClosedForm: break;
  }
  return "closed-form";
}

MeasureMethod measure_method_from_string(std::string_view text) {
  for (auto m : {MeasureMethod::kMonteCarlo, MeasureMethod::kGrid, MeasureMethod::kClosedForm}) {
    if (to_string(m) == text) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown measure method '" + std::string(text) + "'");
}

MeasureEstimate mc_volume(const Predicate& inside, const Box& box, long n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "mc_volume needs n >= 1");
  ScrambledHalton halton(box.dim(), seed);
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    if (inside(halton.point_in(static_cast<std::uint64_t>(i), box))) ++hits;
  }
  const double p = static_cast<double>(hits) / n;
  MeasureEstimate m;
  m.value = box.volume() * p;
  m.error = 3.0 * box.volume() * std::sqrt(p * (1.0 - p) / n);
  m.n_samples = n;
  m.seed = seed;
  return m;
}

MeasureEstimate sym_diff_measure(const ImplicitDomain& d, const CriticalPlaneResult& res, long n,
                                 std::uint64_t seed, MeasureMethod method) {
  if (method == MeasureMethod::kGrid) {
    MeasureEstimate m = grid_estimate(d, res, std::numeric_limits<double>::infinity(),
                                      LineQuantity::kSymmetric, n);
    m.seed = seed;
    return m;
  }
  const Point e = res.e;
  const double mu = res.lambda;
  return mc_volume(
      [&](const Point& x) { return d.contains(x) != d.contains(reflect(x, mu, e)); },
      reflected_hull(d, res), n, seed);
}

MeasureEstimate one_sided_difference(const ImplicitDomain& d, const CriticalPlaneResult& res,
                                     long n, std::uint64_t seed, MeasureMethod method) {
  if (method == MeasureMethod::kGrid) {
    MeasureEstimate m = grid_estimate(d, res, std::numeric_limits<double>::infinity(),
                                      LineQuantity::kOneSided, n);
    m.seed = seed;
    return m;
  }
  const Point e = res.e;
  const double mu = res.lambda;
  return mc_volume(
      [&](const Point& x) {
        return x.dot(e) < mu && d.contains(x) && !d.contains(reflect(x, mu, e));
      },
      d.bbox, n, seed);
}

MeasureEstimate slab_measure(const ImplicitDomain& d, const CriticalPlaneResult& res, double gamma,
                             long n, std::uint64_t seed, MeasureMethod method) {
  if (!(gamma > 0.0 && gamma <= 0.25)) fail(ErrorCode::kInvalidArgument, "gamma must lie in (0, 1/4]");
  if (method == MeasureMethod::kGrid) {
    MeasureEstimate m = grid_estimate(d, res, gamma, LineQuantity::kSymmetric, n);
    m.seed = seed;
    return m;
  }
  const Point e = res.e;
  const double mu = res.lambda;
  return mc_volume(
      [&](const Point& x) {
        return std::abs(x.dot(e) - mu) <= gamma && d.contains(x) != d.contains(reflect(x, mu, e));
      },
      reflected_hull(d, res), n, seed);
}

MeasureEstimate boundary_weighted_integral(const ImplicitDomain& d, double s, long n,
                                           std::uint64_t seed) {
  if (d.dim != 2) fail(ErrorCode::kParameterDomain, "boundary_weighted_integral is implemented for n = 2");
  if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::kParameterDomain, "s must lie in (0, 1)");
  if (n < 14) fail(ErrorCode::kInvalidArgument, "boundary_weighted_integral needs n >= 14");
  MeasureEstimate m;
  m.n_samples = n;
  m.seed = seed;
  const double reach = radial_extent(d).rho_e - 1.0;
  if (!(reach > 0.0)) return m;

  constexpr int kShells = 14;  // 13 dyadic shells plus the innermost layer
  const long per_shell = n / kShells;
  const double q = 1.0 - s;
  ScrambledHalton halton(2, seed);
  double variance = 0.0;
  double peak = 0.0;
  for (int k = 0; k < kShells; ++k) {
    const double ub = reach * std::ldexp(1.0, -k);
    const double ua = (k + 1 < kShells) ? 0.5 * ub : 0.0;
    const double mass = (std::pow(ub, q) - std::pow(ua, q)) / q;  // int u^{-s} du
    double sum = 0.0;
    double sum2 = 0.0;
    for (long i = 0; i < per_shell; ++i) {
      double uv[2];
      halton.point(static_cast<std::uint64_t>(k * per_shell + i), uv);
      const double theta = kPi * (uv[0] - 0.5);
      const double u = std::pow(std::pow(ua, q) + uv[1] * q * mass, 1.0 / q);
      const double rho = 1.0 + u;
      const Point y = make_point({rho * std::cos(theta), rho * std::sin(theta)});
      double w = 0.0;
      if (u > 0.0 && d.contains(y)) {
        const double dist = boundary_distance(d, y);
        // integrand y1 (dist/u)^s rho over the density u^{-s} / (pi mass)
        w = y[0] * std::pow(dist, s) * rho * kPi * mass;
        peak = std::max(peak, y[0] * std::pow(dist / u, s));
      }
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / per_shell;
    m.value += mean;
    variance += std::max(0.0, sum2 / per_shell - mean * mean) / per_shell;
  }
  m.error = 3.0 * std::sqrt(variance);
  m.n_samples = per_shell * kShells;
  if (peak > 1e6) m.flag = "integrand_exceeds_1e6";
  return m;
}

double boundary_weighted_integral_ball(double h, double s) {
  auto beta = [](double a, double b) { return gamma(a) * gamma(b) / gamma(a + b); };
  return 2.0 * h *
         (beta(1.0 - s, 1.0 + s) + 2.0 * h * beta(2.0 - s, 1.0 + s) + h * h * beta(3.0 - s, 1.0 + s));
}

std::string csv_header() { return "quantity,params,value,error,n,seed,method"; }

std::string csv_row(std::string_view quantity, const std::map<std::string, std::string>& params,
                    const MeasureEstimate& m) {
  std::ostringstream out;
  out << quantity << ',';
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out << ';';
    out << k << '=' << v;
    first = false;
  }
  out << ',' << to_decimal(m.value) << ',' << to_decimal(m.error) << ',' << m.n_samples << ','
      << m.seed << ',' << to_string(m.method);
  return out.str();
}

}  // namespace nlstab
