#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "nlstab/decimal.hpp"
#include "nlstab/domains.hpp"
#include "nlstab/error.hpp"
#include "nlstab/experiments.hpp"
#include "nlstab/frlap.hpp"
#include "nlstab/measures.hpp"
#include "nlstab/movingplanes.hpp"
#include "nlstab/qmc.hpp"
#include "nlstab/seminorm.hpp"
#include "nlstab/specfun.hpp"

namespace nlstab::cli {

namespace {

struct Flag {
  const char* name;
  const char* help;
};

struct Command {
  const char* name;
  const char* help;
  std::vector<Flag> flags;
};

const std::vector<Command>& command_table() {
  static const std::vector<Command> table = {
      {"constants", "gamma_{n,s}, c_{n,s} and optionally gamma_{n,s,eps}",
       {{"n", "dimension (default 2)"}, {"s", "order in (0,1) (default 0.5)"},
        {"eps", "ellipsoid eccentricity in [0, 1/4)"}}},
      {"torsion-check", "fractional Laplacian of a torsion function at interior points",
       {{"domain", "ball | ellipsoid (default ball)"}, {"s", "order (default 0.5)"},
        {"eps", "ellipsoid eps (default 0.1)"}, {"points", "number of points (default 20)"},
        {"min-distance", "minimum boundary distance of the points (default 0.2)"}}},
      {"seminorm-ratio", "[u_eps] / eps on the parallel surface of the ellipsoid",
       {{"n", "dimension (default 2)"}, {"s", "order (default 0.5)"},
        {"eps", "eps list (default 0.02,0.01,0.005)"}, {"grid", "chart nodes (default 448)"}}},
      {"critical-plane", "support value and critical position of the moving plane",
       {{"domain", "ball | ellipsoid | bump (default ball)"}, {"eps", "family parameter"},
        {"alpha", "bump regularity (default 2)"}, {"radius", "ball radius (default 1)"},
        {"e", "unit direction, e.g. 1,0 (default 1,0)"}, {"tol", "resolution (default 1e-6)"}}},
      {"slab-measure", "measure of the symmetric difference near the critical plane",
       {{"domain", "ball | ellipsoid | bump (default bump)"}, {"eps", "family parameter"},
        {"alpha", "bump regularity (default 2)"}, {"radius", "ball radius (default 1)"},
        {"e", "unit direction (default 1,0)"}, {"tol", "plane resolution (default 1e-6)"},
        {"gamma", "half width in (0, 1/4] (default 0.2)"},
        {"method", "grid | monte-carlo (default grid)"},
        {"samples", "grid panels or monte-carlo points (default 64)"}}},
      {"boundary-integral", "boundary-weighted integral over the domain outside B_1",
       {{"domain", "ball | ellipsoid | bump (default ball)"}, {"eps", "family parameter"},
        {"alpha", "bump regularity (default 2)"}, {"radius", "ball radius (default 1.05)"},
        {"s", "order (default 0.5)"}, {"samples", "monte-carlo points (default 200000)"}}},
      {"counterexample-scan", "lambda_eps and slab measures over the bump family",
       {{"alpha", "bump regularity (default 2)"}, {"eps", "eps list"},
        {"gamma", "slab half width (default 0.2)"}, {"tol", "plane resolution (default 1e-6)"},
        {"method", "grid | monte-carlo"}, {"samples", "grid panels or points (default 64)"},
        {"jobs", "rows computed in parallel (default 1)"}}},
      {"stability-probe", "rho(Omega_eps) against [u_eps] on the ellipsoid family",
       {{"n", "dimension (default 2)"}, {"s", "order (default 0.5)"}, {"eps", "eps list"},
        {"jobs", "rows computed in parallel (default 1)"}}},
      {"lemma-check", "slab ratios against the Hoelder and linear bounds",
       {{"alpha", "bump regularity (default 2)"}, {"eps", "eps list"}, {"gamma", "gamma list"},
        {"tol", "plane resolution (default 1e-6)"}, {"method", "grid | monte-carlo"},
        {"samples", "grid panels or points (default 64)"},
        {"include-disk", "true | false: add the disk reference row (default true)"},
        {"jobs", "rows computed in parallel (default 1)"}}},
  };
  return table;
}

// Typed access to the string parameters with range checks, so nothing out
// of range reaches the computation.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

  bool has(const std::string& key) const { return p_.count(key) != 0; }

  Decimal decimal(const std::string& key, const std::string& fallback) const {
    const auto it = p_.find(key);
    const std::string text = it == p_.end() ? fallback : it->second;
    try {
      return Decimal::parse(text);
    } catch (const Error&) {
      fail(ErrorCode::kInvalidArgument, "--" + key + ": not a number: '" + text + "'");
    }
  }

  std::vector<Decimal> list(const std::string& key, const std::string& fallback) const {
    const auto it = p_.find(key);
    const std::string text = it == p_.end() ? fallback : it->second;
    try {
      return parse_decimal_list(text);
    } catch (const Error&) {
      fail(ErrorCode::kInvalidArgument, "--" + key + ": not a number list: '" + text + "'");
    }
  }

  long integer(const std::string& key, long fallback, long lo, long hi) const {
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    long v = 0;
    const std::string& t = it->second;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail(ErrorCode::kInvalidArgument, "--" + key + ": not an integer: '" + t + "'");
    }
    if (v < lo || v > hi) {
      fail(ErrorCode::kInvalidArgument,
           "--" + key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }

  std::string word(const std::string& key, const std::string& fallback,
                   std::initializer_list<const char*> allowed) const {
    const auto it = p_.find(key);
    const std::string v = it == p_.end() ? fallback : it->second;
    for (const char* a : allowed) {
      if (v == a) return v;
    }
    fail(ErrorCode::kInvalidArgument, "--" + key + ": unsupported value '" + v + "'");
  }

 private:
  const std::map<std::string, std::string>& p_;
};

void in_range(const Decimal& d, const std::string& key, double lo, double hi, bool lo_open,
              bool hi_open, ErrorCode code = ErrorCode::kInvalidArgument) {
  const bool ok = (lo_open ? d.value > lo : d.value >= lo) && (hi_open ? d.value < hi : d.value <= hi);
  if (!ok) {
    std::ostringstream msg;
    msg << "--" << key << " = " << d.text << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi
        << (hi_open ? ")" : "]");
    fail(code, msg.str());
  }
}

Decimal order(const Params& p) {
  const Decimal s = p.decimal("s", "0.5");
  in_range(s, "s", 0.0, 1.0, true, true, ErrorCode::kParameterDomain);
  return s;
}

Point direction(const Params& p) {
  const std::vector<Decimal> e = p.list("e", "1,0");
  if (e.size() != 2) fail(ErrorCode::kInvalidArgument, "--e needs two components");
  const Point v = make_point({e[0].value, e[1].value});
  if (!(v.norm() > 0.0)) fail(ErrorCode::kInvalidArgument, "--e must be nonzero");
  return v / v.norm();
}

// ball | ellipsoid | bump from --domain, --radius, --eps, --alpha.
ImplicitDomain planar_domain(const Params& p, const std::string& fallback_kind,
                             const std::string& fallback_radius) {
  const std::string kind = p.word("domain", fallback_kind, {"ball", "ellipsoid", "bump"});
  if (kind == "ball") {
    const Decimal r = p.decimal("radius", fallback_radius);
    in_range(r, "radius", 0.0, 4.0, true, false, ErrorCode::kInvalidRadius);
    return ball(Point::Zero(2), r.value);
  }
  if (kind == "ellipsoid") {
    const Decimal eps = p.decimal("eps", "0.1");
    in_range(eps, "eps", 0.0, 0.25, false, true, ErrorCode::kEpsOutOfRange);
    return ellipsoid(2, eps.value);
  }
  const Decimal eps = p.decimal("eps", "1e-3");
  const Decimal alpha = p.decimal("alpha", "2");
  in_range(alpha, "alpha", 1.0, 4.0, true, false, ErrorCode::kParameterDomain);
  in_range(eps, "eps", 0.0, 0.25, true, true, ErrorCode::kEpsOutOfRange);
  return bump_domain(eps.value, alpha.value);
}

nlohmann::json estimate_json(const MeasureEstimate& m) {
  nlohmann::json j = {{"value", m.value},
                      {"error", m.error},
                      {"method", std::string(to_string(m.method))},
                      {"n_samples", m.n_samples},
                      {"seed", m.seed}};
  if (!m.flag.empty()) j["flag"] = m.flag;
  return j;
}

nlohmann::json echo(const std::map<std::string, std::string>& params) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

nlohmann::json emit_artifacts(const ExperimentOutput& o, const RunConfig& rc) {
  const Artifacts a = write_artifacts(o, rc.output_path);
  return {{"experiment", o.name},
          {"config", o.config},
          {"config_hash", config_hash(o.config)},
          {"csv", a.csv.string()},
          {"json", a.json.string()},
          {"summary", o.summary}};
}

// ---- subcommands ----

nlohmann::json cmd_constants(const RunConfig& rc) {
  const Params p(rc.params);
  const long n = p.integer("n", 2, 1, 64);
  const Decimal s = order(p);
  std::optional<Decimal> eps;
  if (p.has("eps")) {
    eps = p.decimal("eps", "0");
    in_range(*eps, "eps", 0.0, 0.25, false, true, ErrorCode::kEpsOutOfRange);
  }
  const FracParams fp = FracParams::make(static_cast<int>(n), s.value);
  nlohmann::json j = {{"n", std::to_string(n)}, {"s", s.text}, {"gamma_ns", gamma_ns(fp)}, {"c_ns", fp.c_ns}};
  if (eps) {
    j["eps"] = eps->text;
    j["gamma_nse"] = gamma_nse(fp, eps->value);
  }
  return j;
}

nlohmann::json cmd_torsion_check(const RunConfig& rc) {
  const Params p(rc.params);
  const std::string kind = p.word("domain", "ball", {"ball", "ellipsoid"});
  const Decimal s = order(p);
  const Decimal eps = p.decimal("eps", "0.1");
  if (kind == "ellipsoid") in_range(eps, "eps", 0.0, 0.25, false, true, ErrorCode::kEpsOutOfRange);
  const long points = p.integer("points", 20, 1, 10000);
  const Decimal min_d = p.decimal("min-distance", "0.2");
  in_range(min_d, "min-distance", 0.0, 0.9, true, false);

  const FracParams fp = FracParams::make(2, s.value);
  const ScalarField u = kind == "ball" ? torsion_ball(fp) : torsion_ellipsoid(fp, eps.value);
  const ImplicitDomain& d = u.support;
  ScrambledHalton halton(2, rc.seed);
  ExperimentOutput o;
  o.name = "torsion-check";
  o.config = {{"domain", kind}, {"s", s.text}, {"points", points}, {"min_distance", min_d.text},
              {"seed", rc.seed}};
  if (kind == "ellipsoid") o.config["eps"] = eps.text;
  o.table.columns = {"x1", "x2", "boundary_distance", "value", "error", "rel_deviation", "converged"};
  double worst = 0.0;
  long accepted = 0;
  for (std::uint64_t i = 0; accepted < points && i < 1000000; ++i) {
    const Point x = halton.point_in(i, d.bbox);
    if (!d.contains(x) || boundary_distance(d, x) < min_d.value) continue;
    const FrLapResult r = frlap_eval(u, x);
    const double dev = std::abs(r.value - 1.0);
    worst = std::max(worst, dev);
    ++accepted;
    o.table.rows.push_back({to_decimal(x[0]), to_decimal(x[1]), to_decimal(boundary_distance(d, x)),
                            to_decimal(r.value), to_decimal(r.error), to_decimal(dev),
                            r.converged ? "true" : "false"});
  }
  o.summary = {{"points", accepted}, {"max_rel_deviation", worst}};
  return emit_artifacts(o, rc);
}

nlohmann::json cmd_seminorm_ratio(const RunConfig& rc) {
  const Params p(rc.params);
  const long n = p.integer("n", 2, 2, 64);
  const Decimal s = order(p);
  const std::vector<Decimal> eps = p.list("eps", "0.02,0.01,0.005");
  for (const Decimal& e : eps) in_range(e, "eps", 0.0, 0.25, true, true, ErrorCode::kEpsOutOfRange);
  SeminormOptions opts;
  opts.grid = static_cast<int>(p.integer("grid", opts.grid, 16, 4096));

  const FracParams fp = FracParams::make(static_cast<int>(n), s.value);
  const double limit = seminorm_limit(fp);
  ExperimentOutput o;
  o.name = "seminorm-ratio";
  nlohmann::json eps_json = nlohmann::json::array();
  for (const Decimal& e : eps) eps_json.push_back(e.text);
  o.config = {{"n", n}, {"s", s.text}, {"eps", eps_json}, {"grid", opts.grid}};
  o.table.columns = {"eps", "ratio", "r_a", "r_b", "n_pairs", "stable"};
  std::vector<double> ratios;
  std::vector<std::pair<double, double>> gaps;
  for (const Decimal& e : eps) {
    const SeminormResult r = ellipsoid_seminorm_ratio(fp, e.value, opts);
    ratios.push_back(r.value);
    if (r.value != limit) gaps.emplace_back(e.value, std::abs(r.value - limit));
    o.table.rows.push_back({e.text, to_decimal(r.value), to_decimal(r.t_a), to_decimal(r.t_b),
                            std::to_string(r.n_pairs), r.stable ? "true" : "false"});
  }
  o.summary = {{"limit", limit}};
  if (eps.size() == 3 && eps[1].value * 2.0 == eps[0].value && eps[2].value * 2.0 == eps[1].value) {
    o.summary["richardson"] = richardson3(ratios[0], ratios[1], ratios[2]);
  }
  try {
    o.summary["fit_gap"] = to_json(exponent_fit(gaps));
  } catch (const Error&) {
    o.summary["fit_gap"] = nullptr;
  }
  return emit_artifacts(o, rc);
}

CriticalPlaneResult plane_for(const Params& p, const ImplicitDomain& d) {
  CriticalPlaneOptions opts;
  const Decimal tol = p.decimal("tol", "1e-6");
  in_range(tol, "tol", 0.0, 1e-2, true, true);
  opts.tol = tol.value;
  return critical_lambda(d, direction(p), opts);
}

nlohmann::json cmd_critical_plane(const RunConfig& rc) {
  const Params p(rc.params);
  const ImplicitDomain d = planar_domain(p, "ball", "1");
  const CriticalPlaneResult r = plane_for(p, d);
  return {{"params", echo(rc.params)}, {"domain", to_json(d.recipe)}, {"plane", to_json(r)}};
}

nlohmann::json cmd_slab_measure(const RunConfig& rc) {
  const Params p(rc.params);
  const ImplicitDomain d = planar_domain(p, "bump", "1");
  const Decimal gamma = p.decimal("gamma", "0.2");
  in_range(gamma, "gamma", 0.0, 0.25, true, false);
  const MeasureMethod method =
      measure_method_from_string(p.word("method", "grid", {"grid", "monte-carlo"}));
  const long samples = p.integer("samples", 64, 1, 100000000);
  const CriticalPlaneResult r = plane_for(p, d);
  const MeasureEstimate m = slab_measure(d, r, gamma.value, samples, rc.seed, method);
  return {{"params", echo(rc.params)}, {"plane", to_json(r)}, {"slab", estimate_json(m)}};
}

nlohmann::json cmd_boundary_integral(const RunConfig& rc) {
  const Params p(rc.params);
  const ImplicitDomain d = planar_domain(p, "ball", "1.05");
  const Decimal s = order(p);
  const long samples = p.integer("samples", 200000, 14, 100000000);
  const MeasureEstimate m = boundary_weighted_integral(d, s.value, samples, rc.seed);
  nlohmann::json j = {{"params", echo(rc.params)}, {"integral", estimate_json(m)}};
  if (d.recipe.kind == "ball") {
    const double h = d.recipe.number("r") - 1.0;
    if (h > 0.0) j["closed_form"] = boundary_weighted_integral_ball(h, s.value);
  }
  return j;
}

// Experiment configs come from the flags through the same JSON reader as
// config files.
nlohmann::json experiment_json(const RunConfig& rc) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : rc.params) {
    if (k == "include-disk") {
      if (v != "true" && v != "false") fail(ErrorCode::kInvalidArgument, "--include-disk: true or false");
      j["include_disk"] = v == "true";
    } else {
      j[k] = v;
    }
  }
  j["seed"] = rc.seed;
  return j;
}

nlohmann::json cmd_counterexample_scan(const RunConfig& rc) {
  const CounterexampleConfig c = counterexample_config_from_json(experiment_json(rc));
  return emit_artifacts(counterexample_scan(c), rc);
}

nlohmann::json cmd_stability_probe(const RunConfig& rc) {
  const StabilityProbeConfig c = stability_probe_config_from_json(experiment_json(rc));
  return emit_artifacts(stability_probe(c), rc);
}

nlohmann::json cmd_lemma_check(const RunConfig& rc) {
  const LemmaCheckConfig c = lemma_check_config_from_json(experiment_json(rc));
  return emit_artifacts(geometric_lemma_check(c), rc);
}

nlohmann::json dispatch(const RunConfig& rc) {
  const std::string& c = rc.command;
  if (c == "constants") return cmd_constants(rc);
  if (c == "torsion-check") return cmd_torsion_check(rc);
  if (c == "seminorm-ratio") return cmd_seminorm_ratio(rc);
  if (c == "critical-plane") return cmd_critical_plane(rc);
  if (c == "slab-measure") return cmd_slab_measure(rc);
  if (c == "boundary-integral") return cmd_boundary_integral(rc);
  if (c == "counterexample-scan") return cmd_counterexample_scan(rc);
  if (c == "stability-probe") return cmd_stability_probe(rc);
  if (c == "lemma-check") return cmd_lemma_check(rc);
  fail(ErrorCode::kInvalidArgument, "unknown command '" + c + "'");
}

void error_json(std::ostream& err, std::string_view code, std::string_view message) {
  err << nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += ',';
      out += scalar_text(x);
    }
    return out;
  }
  fail(ErrorCode::kInvalidArgument, "config values must be numbers, strings or lists");
}

// --config: a JSON object of flag values (plus "seed" and "output_path")
// applied on top of the command line.
void apply_config_file(RunConfig& rc, const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "config file must hold a JSON object");
  if (j.contains("command") && j["command"] != rc.command) {
    fail(ErrorCode::kInvalidArgument, "config file is for command " + j["command"].dump());
  }
  const auto& cmd = *std::find_if(command_table().begin(), command_table().end(),
                                  [&](const Command& c) { return rc.command == c.name; });
  const nlohmann::json params = j.contains("params") ? j["params"] : j;
  for (const auto& [k, v] : params.items()) {
    if (k == "command" || k == "seed" || k == "output_path" || k == "params") continue;
    const bool known = std::any_of(cmd.flags.begin(), cmd.flags.end(),
                                   [&](const Flag& fl) { return k == fl.name; });
    if (!known) fail(ErrorCode::kInvalidArgument, "config key '" + k + "' is not a flag of " + rc.command);
    rc.params[k] = scalar_text(v);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(ErrorCode::kInvalidArgument, "config seed must be a nonnegative integer");
    rc.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_path")) rc.output_path = scalar_text(j["output_path"]);
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command}, {"params", echo(c.params)}, {"seed", c.seed}, {"output_path", c.output_path}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.params = j.value("params", std::map<std::string, std::string>{});
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_path = j.value("output_path", std::string("."));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad run config: ") + e.what());
  }
  return c;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Command& c : command_table()) v.push_back(c.name);
    return v;
  }();
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for nonlocal overdetermined problems", "nlstab"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  RunConfig rc;
  std::string config_path;
  std::map<std::string, std::map<std::string, std::string>> storage;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
  for (const Command& c : command_table()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    for (const Flag& f : c.flags) {
      options[c.name].emplace_back(f.name, sub->add_option(std::string("--") + f.name,
                                                            storage[c.name][f.name], f.help));
    }
    sub->add_option("--seed", rc.seed, "seed for sampling (default 0)");
    sub->add_option("--out", rc.output_path, "directory for CSV / JSON artifacts (default .)");
    sub->add_option("--config", config_path, "JSON file whose values override the flags");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what());
    return 2;
  }

  try {
    rc.command = app.get_subcommands().front()->get_name();
    for (const auto& [name, opt] : options[rc.command]) {
      if (opt->count() > 0) rc.params[name] = storage[rc.command][name];
    }
    if (!config_path.empty()) apply_config_file(rc, config_path);
    out << dispatch(rc).dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    error_json(err, to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what());
    return 1;
  }
}

}  // namespace nlstab::cli
