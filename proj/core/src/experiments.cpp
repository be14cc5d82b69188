#include "nlstab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "nlstab/domains.hpp"
#include "nlstab/error.hpp"
#include "nlstab/movingplanes.hpp"

namespace nlstab {

namespace {

// Runs fn(0..count-1) on up to `jobs` threads; results stay in index order.
template <class F>
auto run_rows(std::size_t count, int jobs, F fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Row = decltype(fn(std::size_t{}));
  std::vector<Row> rows(count);
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::vector<std::future<void>> workers;
  const std::size_t stride = static_cast<std::size_t>(jobs);
  for (std::size_t w = 0; w < std::min(stride, count); ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += stride) rows[i] = fn(i);
    }));
  }
  for (auto& f : workers) f.get();  // rethrows the first failure
  return rows;
}

std::string cell(double x) { return std::isfinite(x) ? to_decimal(x) : ""; }
std::string cell(bool b) { return b ? "true" : "false"; }

nlohmann::json decimals(const std::vector<Decimal>& list) {
  nlohmann::json a = nlohmann::json::array();
  for (const Decimal& d : list) a.push_back(d.text);
  return a;
}

// Decimal field: accepts the string form and, for hand-written configs,
// plain JSON numbers.
Decimal decimal_field(const nlohmann::json& j, const char* key, const Decimal& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return Decimal::parse(v.get<std::string>());
  if (v.is_number()) return Decimal::parse(v.dump());
  fail(ErrorCode::kInvalidArgument, std::string("config field '") + key + "' must be a number");
}

std::vector<Decimal> decimal_list_field(const nlohmann::json& j, const char* key,
                                        const std::vector<Decimal>& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return parse_decimal_list(v.get<std::string>());
  if (!v.is_array()) {
    fail(ErrorCode::kInvalidArgument, std::string("config field '") + key + "' must be a list");
  }
  std::vector<Decimal> out;
  for (const auto& x : v) {
    if (x.is_string()) out.push_back(Decimal::parse(x.get<std::string>()));
    else if (x.is_number()) out.push_back(Decimal::parse(x.dump()));
    else fail(ErrorCode::kInvalidArgument, std::string("config field '") + key + "' must hold numbers");
  }
  return out;
}

// Integer field; "64" is accepted as well as 64.
template <class T>
T integer_field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number_integer()) return v.get<T>();
  if (v.is_string()) {
    const std::string text = v.get<std::string>();
    T out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec == std::errc() && ptr == text.data() + text.size()) return out;
  }
  fail(ErrorCode::kInvalidArgument, std::string("config field '") + key + "' must be an integer");
}

template <class T>
T plain_field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::kInvalidArgument, std::string("config field '") + key + "' has the wrong type");
  }
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> known) {
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      fail(ErrorCode::kInvalidArgument, "unknown config field '" + key + "'");
    }
  }
}

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

void check_eps_grid(const std::vector<Decimal>& eps, double hi, bool hi_open) {
  require(!eps.empty(), ErrorCode::kInvalidArgument, "eps grid is empty");
  for (const Decimal& e : eps) {
    const bool ok = e.value > 0.0 && (hi_open ? e.value < hi : e.value <= hi);
    require(ok, ErrorCode::kEpsOutOfRange, "eps " + e.text + " out of range");
  }
}

// Fit or, when the data cannot support one, the reason.
void put_fit(nlohmann::json& summary, const std::string& key,
             const std::vector<std::pair<double, double>>& points) {
  try {
    summary[key] = to_json(exponent_fit(points));
  } catch (const Error& e) {
    summary[key] = nullptr;
    summary[key + "_error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  }
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

FitResult exponent_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) fail(ErrorCode::kInsufficientData, "exponent fit needs at least 3 points");
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) fail(ErrorCode::kNonpositiveData, "exponent fit needs positive data");
  }
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) fail(ErrorCode::kInsufficientData, "exponent fit needs distinct x values");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  // Constant data are fitted exactly.
  f.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  f.points = points;
  return f;
}

nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [x, y] : fit.points) pts.push_back({x, y});
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}, {"points", pts}};
}

std::string Table::csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out.str();
}

// ---- stability probe ----

nlohmann::json to_json(const StabilityProbeConfig& cfg) {
  return {{"n", cfg.n}, {"s", cfg.s.text}, {"eps", decimals(cfg.eps)}, {"seed", cfg.seed}};
}

StabilityProbeConfig stability_probe_config_from_json(const nlohmann::json& j) {
  check_keys(j, {"n", "s", "eps", "seed", "jobs"});
  StabilityProbeConfig c;
  c.n = integer_field(j, "n", c.n);
  c.s = decimal_field(j, "s", c.s);
  c.eps = decimal_list_field(j, "eps", c.eps);
  c.seed = integer_field(j, "seed", c.seed);
  c.jobs = integer_field(j, "jobs", c.jobs);
  return c;
}

ExperimentOutput stability_probe(const StabilityProbeConfig& cfg) {
  require(cfg.n >= 2, ErrorCode::kParameterDomain, "stability probe needs n >= 2");
  const FracParams p = FracParams::make(cfg.n, cfg.s.value);
  check_eps_grid(cfg.eps, 0.25, true);

  struct Row {
    ShapeMetrics shape;
    SeminormResult semi;
  };
  auto rows = run_rows(cfg.eps.size(), cfg.jobs, [&](std::size_t i) {
    const double eps = cfg.eps[i].value;
    Row r;
    // Rotational symmetry: the planar section carries rho(Omega_eps).
    ShapeMetricsOptions so;
    so.seed = cfg.seed;
    r.shape = shape_metrics(ellipsoid(2, eps), so);
    r.semi = ellipsoid_seminorm_ratio(p, eps);
    return r;
  });

  ExperimentOutput out;
  out.name = "stability-probe";
  out.config = to_json(cfg);
  out.table.columns = {"eps", "rho_shape", "rho_converged", "seminorm", "seminorm_over_eps",
                       "seminorm_stable", "n_pairs", "flag"};
  std::vector<std::pair<double, double>> points;
  int flagged = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double eps = cfg.eps[i].value;
    const double semi = r.semi.value * eps;
    std::string flag;
    if (!r.shape.converged) flag = "shape_not_converged";
    if (!r.semi.stable) flag += flag.empty() ? "seminorm_unstable" : ";seminorm_unstable";
    if (!flag.empty()) ++flagged;
    out.table.rows.push_back({cfg.eps[i].text, cell(r.shape.rho_shape), cell(r.shape.converged),
                              cell(semi), cell(r.semi.value), cell(r.semi.stable),
                              std::to_string(r.semi.n_pairs), flag});
    points.emplace_back(semi, r.shape.rho_shape);
  }
  out.summary = {{"seminorm_limit_over_eps", seminorm_limit(p)}, {"flagged_rows", flagged}};
  put_fit(out.summary, "fit_rho_vs_seminorm", points);
  return out;
}

// ---- counterexample scan ----

nlohmann::json to_json(const CounterexampleConfig& cfg) {
  return {{"alpha", cfg.alpha.text}, {"eps", decimals(cfg.eps)}, {"gamma", cfg.gamma.text},
          {"tol", cfg.tol.text},     {"samples", cfg.samples}, {"method", std::string(to_string(cfg.method))},
          {"seed", cfg.seed}};
}

CounterexampleConfig counterexample_config_from_json(const nlohmann::json& j) {
  check_keys(j, {"alpha", "eps", "gamma", "tol", "samples", "method", "seed", "jobs"});
  CounterexampleConfig c;
  c.alpha = decimal_field(j, "alpha", c.alpha);
  c.eps = decimal_list_field(j, "eps", c.eps);
  c.gamma = decimal_field(j, "gamma", c.gamma);
  c.tol = decimal_field(j, "tol", c.tol);
  c.samples = integer_field(j, "samples", c.samples);
  if (j.contains("method")) c.method = measure_method_from_string(plain_field<std::string>(j, "method", ""));
  c.seed = integer_field(j, "seed", c.seed);
  c.jobs = integer_field(j, "jobs", c.jobs);
  return c;
}

namespace {

void check_scan(double alpha, const std::vector<Decimal>& eps, double tol, long n,
                MeasureMethod method) {
  require(alpha > 1.0, ErrorCode::kParameterDomain, "alpha must exceed 1");
  check_eps_grid(eps, 0.25, true);
  require(tol > 0.0 && tol < 1e-2, ErrorCode::kInvalidArgument, "tol must lie in (0, 1e-2)");
  require(n >= 1, ErrorCode::kInvalidArgument, "samples must be positive");
  require(method != MeasureMethod::kClosedForm, ErrorCode::kInvalidArgument,
          "slab measures use monte-carlo or grid");
  for (const Decimal& e : eps) bump_domain(e.value, alpha);  // support-fit check before any work
}

struct PlaneRow {
  CriticalPlaneResult plane;
  ShapeMetrics radial;
  ImplicitDomain domain;
};

PlaneRow plane_row(const ImplicitDomain& d, double tol) {
  CriticalPlaneOptions opts;
  opts.tol = tol;
  return {critical_lambda(d, make_point({1.0, 0.0}), opts), radial_extent(d), d};
}

std::string plane_flags(const CriticalPlaneResult& c) {
  std::string flag;
  if (!c.resolved()) flag = "unresolved";
  if (std::abs(c.lambda) < 100.0 * c.tol) flag += flag.empty() ? "lambda_below_100tol" : ";lambda_below_100tol";
  return flag;
}

}  // namespace

ExperimentOutput counterexample_scan(const CounterexampleConfig& cfg) {
  const double alpha = cfg.alpha.value;
  const double gamma = cfg.gamma.value;
  check_scan(alpha, cfg.eps, cfg.tol.value, cfg.samples, cfg.method);
  require(gamma > 0.0 && gamma < 0.25, ErrorCode::kInvalidArgument, "gamma must lie in (0, 1/4)");

  struct Row {
    CriticalPlaneResult plane;
    MeasureEstimate slab;
  };
  auto rows = run_rows(cfg.eps.size(), cfg.jobs, [&](std::size_t i) {
    const PlaneRow pr = plane_row(bump_domain(cfg.eps[i].value, alpha), cfg.tol.value);
    return Row{pr.plane, slab_measure(pr.domain, pr.plane, gamma, cfg.samples, cfg.seed, cfg.method)};
  });

  ExperimentOutput out;
  out.name = "counterexample-scan";
  out.config = to_json(cfg);
  out.table.columns = {"eps", "lambda", "Lambda", "case", "lambda_lower_bound", "lambda_ge_bound",
                       "slab", "slab_error", "method", "n_samples", "flag"};
  std::vector<std::pair<double, double>> lam_pts, slab_pts;
  bool bound_holds = true;
  int flagged = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double eps = cfg.eps[i].value;
    const double bound = std::pow(eps, 1.0 - 1.0 / alpha);
    const bool ge = r.plane.lambda >= bound;
    bound_holds = bound_holds && ge;
    std::string flag = plane_flags(r.plane);
    if (!r.slab.flag.empty()) flag += (flag.empty() ? "" : ";") + r.slab.flag;
    if (flag.empty()) {
      lam_pts.emplace_back(eps, r.plane.lambda);
      slab_pts.emplace_back(eps, r.slab.value);
    } else {
      ++flagged;
    }
    out.table.rows.push_back({cfg.eps[i].text, cell(r.plane.lambda), cell(r.plane.Lambda),
                              std::string(to_string(r.plane.case_tag)), cell(bound), cell(ge),
                              cell(r.slab.value), cell(r.slab.error),
                              std::string(to_string(r.slab.method)), std::to_string(r.slab.n_samples),
                              flag});
  }
  out.summary = {{"expected_exponent", 1.0 - 1.0 / alpha},
                 {"lambda_lower_bound_holds", bound_holds},
                 {"flagged_rows", flagged}};
  put_fit(out.summary, "fit_lambda", lam_pts);
  put_fit(out.summary, "fit_slab", slab_pts);
  return out;
}

// ---- geometric lemma check ----

nlohmann::json to_json(const LemmaCheckConfig& cfg) {
  return {{"alpha", cfg.alpha.text}, {"eps", decimals(cfg.eps)}, {"gamma", decimals(cfg.gamma)},
          {"tol", cfg.tol.text},     {"samples", cfg.samples}, {"method", std::string(to_string(cfg.method))},
          {"seed", cfg.seed},        {"include_disk", cfg.include_disk}};
}

LemmaCheckConfig lemma_check_config_from_json(const nlohmann::json& j) {
  check_keys(j, {"alpha", "eps", "gamma", "tol", "samples", "method", "seed", "include_disk", "jobs"});
  LemmaCheckConfig c;
  c.alpha = decimal_field(j, "alpha", c.alpha);
  c.eps = decimal_list_field(j, "eps", c.eps);
  c.gamma = decimal_list_field(j, "gamma", c.gamma);
  c.tol = decimal_field(j, "tol", c.tol);
  c.samples = integer_field(j, "samples", c.samples);
  if (j.contains("method")) c.method = measure_method_from_string(plain_field<std::string>(j, "method", ""));
  c.seed = integer_field(j, "seed", c.seed);
  c.include_disk = plain_field(j, "include_disk", c.include_disk);
  c.jobs = integer_field(j, "jobs", c.jobs);
  return c;
}

ExperimentOutput geometric_lemma_check(const LemmaCheckConfig& cfg) {
  const double alpha = cfg.alpha.value;
  check_scan(alpha, cfg.eps, cfg.tol.value, cfg.samples, cfg.method);
  require(!cfg.gamma.empty(), ErrorCode::kInvalidArgument, "gamma grid is empty");
  for (const Decimal& g : cfg.gamma) {
    require(g.value > 0.0 && g.value <= 0.25, ErrorCode::kInvalidArgument,
            "gamma " + g.text + " must lie in (0, 1/4]");
  }

  // Domain index 0 is the disk when requested; bump rows follow in grid order.
  const std::size_t offset = cfg.include_disk ? 1 : 0;
  const std::size_t domains = cfg.eps.size() + offset;
  const std::size_t ng = cfg.gamma.size();
  struct Row {
    CriticalPlaneResult plane;
    double r_diff = 0.0;
    MeasureEstimate slab;
  };
  auto rows = run_rows(domains * ng, cfg.jobs, [&](std::size_t k) {
    const std::size_t di = k / ng;
    const ImplicitDomain d = (cfg.include_disk && di == 0)
                                 ? ball(Point::Zero(2), 1.0)
                                 : bump_domain(cfg.eps[di - offset].value, alpha);
    const PlaneRow pr = plane_row(d, cfg.tol.value);
    const double g = cfg.gamma[k % ng].value;
    return Row{pr.plane, pr.radial.rho_e - pr.radial.rho_i,
               slab_measure(d, pr.plane, g, cfg.samples, cfg.seed, cfg.method)};
  });

  ExperimentOutput out;
  out.name = "lemma-check";
  out.config = to_json(cfg);
  out.table.columns = {"domain", "eps",          "gamma",        "lambda",       "R_minus_r", "slab",
                       "slab_error", "ratio_thm52", "ratio_lem53", "ratio_linear", "flag"};
  const double power = 1.0 - 1.0 / alpha;
  nlohmann::json per_gamma = nlohmann::json::array();
  std::vector<std::vector<double>> thm(ng), lem(ng), lin(ng);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    const std::size_t di = k / ng;
    const std::size_t gi = k % ng;
    const bool disk = cfg.include_disk && di == 0;
    const double g = cfg.gamma[gi].value;
    std::string flag;
    double t52 = NAN, l53 = NAN, lin_r = NAN;
    if (r.r_diff <= 1e-12) {
      flag = "skip";  // R = r: every ratio is 0/0
    } else {
      t52 = r.slab.value / (g * std::pow(r.r_diff, power));
      l53 = r.slab.value / (g * (r.r_diff + g * std::abs(r.plane.lambda)));
      lin_r = r.slab.value / (g * r.r_diff);
      flag = plane_flags(r.plane);
      if (!r.slab.flag.empty()) flag += (flag.empty() ? "" : ";") + r.slab.flag;
      if (flag.empty() && !disk) {
        thm[gi].push_back(t52);
        lem[gi].push_back(l53);
        lin[gi].push_back(lin_r);
      }
    }
    out.table.rows.push_back({disk ? "disk" : "bump", disk ? "0" : cfg.eps[di - offset].text,
                              cfg.gamma[gi].text, cell(r.plane.lambda), cell(r.r_diff),
                              cell(r.slab.value), cell(r.slab.error), cell(t52), cell(l53),
                              cell(lin_r), flag});
  }
  for (std::size_t gi = 0; gi < ng; ++gi) {
    nlohmann::json s = {{"gamma", cfg.gamma[gi].text}, {"rows", thm[gi].size()}};
    if (thm[gi].size() >= 2) {
      auto band = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi / *lo;
      };
      s["thm52_band"] = band(thm[gi]);
      s["lem53_band"] = band(lem[gi]);
      // Largest eps first in the usual grids; growth towards the smallest.
      s["linear_growth"] = lin[gi].back() / lin[gi].front();
    }
    per_gamma.push_back(s);
  }
  out.summary = {{"exponent", power}, {"per_gamma", per_gamma}};
  return out;
}

// ---- artifacts ----

std::string config_hash(const nlohmann::json& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

Artifacts write_artifacts(const ExperimentOutput& out, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string stem = out.name + "-" + config_hash(out.config);
  Artifacts a{dir / (stem + ".csv"), dir / (stem + ".json")};
  const nlohmann::json doc = {{"experiment", out.name},
                              {"config", out.config},
                              {"config_hash", config_hash(out.config)},
                              {"table", a.csv.filename().string()},
                              {"summary", out.summary}};
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f) fail(ErrorCode::kIo, "cannot write " + path.string());
  };
  write(a.csv, out.table.csv());
  write(a.json, doc.dump(2) + "\n");
  return a;
}

}  // namespace nlstab
