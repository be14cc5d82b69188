// One PASS / FAIL line per acceptance criterion. Exit status is nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nlstab/domains.hpp"
#include "nlstab/experiments.hpp"
#include "nlstab/frlap.hpp"
#include "nlstab/measures.hpp"
#include "nlstab/qmc.hpp"
#include "nlstab/seminorm.hpp"

using namespace nlstab;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// `count` Halton points of the disk of radius r around the origin.
std::vector<Point> disk_points(int count, double r, std::uint64_t seed) {
  ScrambledHalton h(2, seed);
  const Box box{make_point({-r, -r}), make_point({r, r})};
  std::vector<Point> pts;
  for (std::uint64_t i = 0; static_cast<int>(pts.size()) < count; ++i) {
    const Point x = h.point_in(i, box);
    if (x.norm() < r) pts.push_back(x);
  }
  return pts;
}

Verdict torsion_ball_check() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool converged = true;
  for (double s : {0.25, 0.5, 0.75}) {
    const ScalarField u = torsion_ball(FracParams::make(2, s));
    for (const Point& x : disk_points(20, 0.8, 1)) {
      const FrLapResult r = frlap_eval(u, x);
      converged = converged && r.converged;
      worst = std::max(worst, std::abs(r.value - 1.0));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 0.01 && t < 120.0 && converged,
          fmt("max |(-Delta)^s u0 - 1| = %.2e over 60 points (limit 1e-2), %.1f s", worst, t)};
}

Verdict torsion_ellipse_check() {
  const double eps = 0.1;
  const ScalarField u = torsion_ellipsoid(FracParams::make(2, 0.5), eps);
  double worst = 0.0;
  int used = 0;
  for (const Point& x : disk_points(200, 1.0 + eps, 2)) {
    if (!u.support.contains(x) || boundary_distance(u.support, x) < 0.05) continue;
    worst = std::max(worst, std::abs(frlap_eval(u, x).value - 1.0));
    if (++used == 20) break;
  }
  return {used == 20 && worst <= 0.02,
          fmt("max |(-Delta)^s u_eps - 1| = %.2e over %d points (limit 2e-2)", worst, used)};
}

Verdict seminorm_limit_check() {
  const FracParams p = FracParams::make(2, 0.5);
  const double limit = 2.0 / (std::numbers::pi * std::sqrt(3.0));
  std::vector<double> r;
  std::vector<std::pair<double, double>> gap;
  bool stable = true;
  for (double eps : {0.02, 0.01, 0.005}) {
    const SeminormResult s = ellipsoid_seminorm_ratio(p, eps);
    stable = stable && s.stable;
    r.push_back(s.value);
    gap.emplace_back(eps, std::abs(s.value - limit));
  }
  const double extrapolated = richardson3(r[0], r[1], r[2]);
  const double rel = std::abs(extrapolated - limit) / limit;
  const FitResult fit = exponent_fit(gap);
  return {rel <= 0.02 && std::abs(fit.slope - 1.0) <= 0.2 && stable,
          fmt("extrapolated %.8f vs 2/(pi sqrt 3) = %.8f (rel %.1e); order %.3f", extrapolated,
              limit, rel, fit.slope)};
}

Verdict quotient_constant_check() {
  const SeminormResult s = phi0_quotient_sup();
  return {std::abs(s.value - 2.0) <= 1e-3, fmt("sup = %.10f", s.value)};
}

Verdict counterexample_check(ExperimentOutput& scan) {
  const auto t0 = Clock::now();
  scan = counterexample_scan({});
  const double t = seconds_since(t0);
  const auto& s = scan.summary;
  if (s.at("fit_lambda").is_null() || s.at("fit_slab").is_null()) return {false, "fit refused"};
  const double kl = s["fit_lambda"]["slope"], rl = s["fit_lambda"]["r2"];
  const double ks = s["fit_slab"]["slope"], rs = s["fit_slab"]["r2"];
  const bool bound = s["lambda_lower_bound_holds"];
  const bool pass = bound && std::abs(kl - 0.5) <= 0.05 && std::abs(ks - 0.5) <= 0.05 && rl >= 0.99 &&
                    rs >= 0.99 && t < 600.0 && s["flagged_rows"] == 0;
  return {pass, fmt("lambda >= eps^1/2: %s; lambda exponent %.4f (r2 %.6f), slab exponent %.4f "
                    "(r2 %.6f), %.1f s",
                    bound ? "yes" : "no", kl, rl, ks, rs, t)};
}

Verdict lemma_check() {
  LemmaCheckConfig c;
  c.include_disk = false;
  const ExperimentOutput out = geometric_lemma_check(c);
  const auto& g = out.summary.at("per_gamma").at(0);
  const double band = g.at("thm52_band");
  const double growth = g.at("linear_growth");
  return {band <= 3.0 && growth >= 10.0,
          fmt("slab/(gamma (R-r)^{1/2}) band %.4f (limit 3); slab/(gamma (R-r)) growth %.5f "
              "(needs >= 10)",
              band, growth)};
}

Verdict erosion_check() {
  int violations = 0;
  long checked = 0;
  for (double eps : {0.1, 0.01}) {
    const ImplicitDomain om = ellipsoid(2, eps);
    const ImplicitDomain g = erode(om, 0.5);
    ScrambledHalton h(2, 5);
    const Box box = om.bbox.inflated(0.05);
    for (int i = 0; i < 100000; ++i) {
      const Point x = h.point_in(i, box);
      const bool dilated = g.contains(x) || boundary_distance(g, x) < 0.5;
      if (dilated != om.contains(x) && boundary_distance(om, x) > 1e-6) ++violations;
      ++checked;
    }
  }
  return {violations == 0, fmt("%d violations on %ld samples (eps 0.1 and 0.01)", violations, checked)};
}

Verdict hopf_ratio_check() {
  const FracParams p = FracParams::make(2, 0.5);
  const ScalarField u = torsion_ball(p);
  double inf = INFINITY;
  for (const Point& x : disk_points(10000, 1.0, 3)) {
    inf = std::min(inf, u(x) / std::pow(1.0 - x.norm(), p.s));
  }
  const double g = gamma_ns(p);
  return {std::abs(inf - g) <= 0.01 * g, fmt("inf u0/delta^s = %.6f, gamma_ns = %.6f", inf, g)};
}

Verdict barrier_check() {
  const FracParams p = FracParams::make(2, 0.5);
  const double rho = 0.2;
  const Point a = make_point({0.1, 0.0});  // the two cutoffs overlap near x1 = 0
  const ScalarField phi = barrier(p, a, rho);
  const double scale = std::pow(rho, 2.0 * p.s);

  double asym = 0.0;
  int sandwich_bad = 0;
  ScrambledHalton h(2, 4);
  const Box box{make_point({a[0] - 0.5 * rho, -0.5 * rho}), make_point({a[0] + 0.5 * rho, 0.5 * rho})};
  std::vector<Point> inner;
  for (int i = 0; inner.size() < 10000; ++i) {
    const Point x = h.point_in(i, box);
    if ((x - a).norm() >= 0.5 * rho || x[0] <= 0.0) continue;
    inner.push_back(x);
    const Point xm = make_point({-x[0], x[1]});
    asym = std::max(asym, std::abs(phi(x) + phi(xm)));
    const double v = phi(x);
    if (v < scale * x[0] * (1.0 - 1e-14) || v > 2.0 * scale * x[0] * (1.0 + 1e-14)) ++sandwich_bad;
  }

  QuadratureConfig fine;
  fine.inner_radial *= 2;
  fine.inner_angular *= 2;
  fine.outer_panels *= 2;
  fine.outer_angular *= 2;
  fine.outer_nodes *= 2;
  double sup_base = 0.0, sup_fine = 0.0;
  for (std::size_t i = 0; i < inner.size(); i += 50) {
    const Point& x = inner[i];
    sup_base = std::max(sup_base, std::abs(frlap_value(phi, x, {})) / x[0]);
    sup_fine = std::max(sup_fine, std::abs(frlap_value(phi, x, fine)) / x[0]);
  }
  const double change = std::abs(sup_fine - sup_base) / sup_fine;
  return {asym == 0.0 && sandwich_bad == 0 && change < 0.2,
          fmt("max |phi(x) + phi(x*)| = %.1e; sandwich violations %d/10000; sup |(-Delta)^s phi|/x1 "
              "%.6f -> %.6f under refinement (change %.1e)",
              asym, sandwich_bad, sup_base, sup_fine, change)};
}

Verdict measure_engine_check() {
  const ImplicitDomain disk = ball(Point::Zero(2), 1.0);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MeasureEstimate m =
        mc_volume([&](const Point& x) { return disk.contains(x); }, disk.bbox, 100000, seed);
    if (std::abs(m.value - std::numbers::pi) <= m.error) ++inside;
  }
  CriticalPlaneResult plane;
  plane.e = make_point({1.0, 0.0});
  plane.Lambda = 1.0;
  plane.lambda = 0.2;
  plane.case_tag = PlaneCase::kBoundaryOrthogonality;
  const MeasureEstimate sym = sym_diff_measure(disk, plane, 400000, 7);
  const MeasureEstimate one = one_sided_difference(disk, plane, 400000, 8);
  const double exact = 2.0 * (std::numbers::pi - 2.0 * (std::acos(0.2) - 0.2 * std::sqrt(0.96)));
  const double combined = std::hypot(sym.error, 2.0 * one.error);
  const bool identity = std::abs(sym.value - 2.0 * one.value) <= combined;
  const bool exact_ok = std::abs(sym.value - exact) <= sym.error;
  return {inside >= 47 && identity && exact_ok,
          fmt("%d/50 seeds inside 3 sigma; |sym diff| %.5f vs 2 |one side| %.5f (tolerance %.1e), "
              "exact %.5f",
              inside, sym.value, 2.0 * one.value, combined, exact)};
}

}  // namespace

int main() {
  ExperimentOutput scan;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"torsion function of the ball", torsion_ball_check},
      {"torsion function of the ellipse", torsion_ellipse_check},
      {"seminorm limit", seminorm_limit_check},
      {"quotient constant", quotient_constant_check},
      {"counterexample scaling", [&] { return counterexample_check(scan); }},
      {"geometric lemma sharpness", lemma_check},
      {"erosion identity", erosion_check},
      {"boundary ratio", hopf_ratio_check},
      {"barrier", barrier_check},
      {"measure engine", measure_engine_check},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
