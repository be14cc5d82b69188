#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlstab/error.hpp"
#include "nlstab/experiments.hpp"
#include "nlstab/qmc.hpp"

using namespace nlstab;

namespace {

std::vector<std::pair<double, double>> power_law(double c, double p, std::initializer_list<double> xs) {
  std::vector<std::pair<double, double>> pts;
  for (double x : xs) pts.emplace_back(x, c * std::pow(x, p));
  return pts;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CounterexampleConfig small_scan() {
  CounterexampleConfig c;
  c.eps = parse_decimal_list("1e-3,1e-4,1e-5");
  return c;
}

}  // namespace

TEST_CASE("exponent fit recovers exact power laws") {
  const FitResult f = exponent_fit(power_law(3.0, 0.5, {1e-3, 1e-4, 1e-5, 1e-6}));
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  const FitResult flat = exponent_fit(power_law(2.0, 0.0, {1.0, 2.0, 4.0}));
  CHECK(flat.slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(flat.points.size() == 3);
}

TEST_CASE("exponent fit of noisy data") {
  SplitMix64 rng(42);
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 12; ++k) {
    const double x = std::pow(10.0, -1.0 - 0.4 * k);
    pts.emplace_back(x, std::sqrt(x) * (1.0 + 0.05 * (2.0 * rng.uniform() - 1.0)));
  }
  const FitResult f = exponent_fit(pts);
  CHECK(std::abs(f.slope - 0.5) < 0.02);
  CHECK(f.r2 > 0.99);
}

TEST_CASE("exponent fit ignores the units of either axis") {
  auto pts = power_law(1.0, 0.7, {0.1, 0.2, 0.5, 0.9});
  pts[1].second *= 1.1;
  const FitResult a = exponent_fit(pts);
  for (auto& [x, y] : pts) {
    x *= 1e3;
    y *= 1e-4;
  }
  const FitResult b = exponent_fit(pts);
  CHECK(b.slope == doctest::Approx(a.slope).epsilon(1e-12));
  CHECK(b.r2 == doctest::Approx(a.r2).epsilon(1e-12));
}

TEST_CASE("exponent fit refuses bad data") {
  CHECK(code_of([] { exponent_fit(power_law(1.0, 1.0, {1.0, 2.0})); }) == ErrorCode::kInsufficientData);
  CHECK(code_of([] { exponent_fit({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}); }) ==
        ErrorCode::kInsufficientData);
  CHECK(code_of([] { exponent_fit({{1.0, 1.0}, {2.0, 0.0}, {3.0, 3.0}}); }) ==
        ErrorCode::kNonpositiveData);
  CHECK(code_of([] { exponent_fit({{-1.0, 1.0}, {2.0, 1.0}, {3.0, 3.0}}); }) ==
        ErrorCode::kNonpositiveData);
}

TEST_CASE("stability probe") {
  const ExperimentOutput out = stability_probe({});
  REQUIRE(out.table.rows.size() == 3);
  CHECK(out.summary.at("flagged_rows") == 0);
  const nlohmann::json& fit = out.summary.at("fit_rho_vs_seminorm");
  REQUIRE(fit.is_object());
  CHECK(fit.at("slope").get<double>() == doctest::Approx(1.0).epsilon(0.05));
  for (const auto& row : out.table.rows) {
    CHECK(std::stod(row[1]) == doctest::Approx(std::stod(row[0])).epsilon(1e-6));
    CHECK(row[5] == "true");
  }
}

TEST_CASE("single-row probe reports the fit as refused") {
  StabilityProbeConfig c;
  c.eps = parse_decimal_list("0.01");
  const ExperimentOutput out = stability_probe(c);
  CHECK(out.table.rows.size() == 1);
  CHECK(out.summary.at("fit_rho_vs_seminorm").is_null());
  CHECK(out.summary.at("fit_rho_vs_seminorm_error").at("code") == "insufficient_data");
}

TEST_CASE("counterexample scan") {
  const ExperimentOutput out = counterexample_scan(small_scan());
  REQUIRE(out.table.rows.size() == 3);
  CHECK(out.summary.at("lambda_lower_bound_holds") == true);
  CHECK(out.summary.at("fit_lambda").at("slope").get<double>() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(out.summary.at("fit_slab").at("slope").get<double>() == doctest::Approx(0.5).epsilon(0.05));
  for (const auto& row : out.table.rows) CHECK(row[3] == "boundary-orthogonality");
  CounterexampleConfig bad = small_scan();
  bad.alpha = Decimal::parse("1");
  CHECK(code_of([&] { counterexample_scan(bad); }) == ErrorCode::kParameterDomain);
  bad = small_scan();
  bad.tol = Decimal::parse("0.5");
  CHECK_THROWS_AS(counterexample_scan(bad), Error);
}

TEST_CASE("runs are reproducible and independent of the job count") {
  CounterexampleConfig c = small_scan();
  c.method = MeasureMethod::kMonteCarlo;
  c.samples = 20000;
  c.seed = 9;
  const std::string a = counterexample_scan(c).table.csv();
  const std::string b = counterexample_scan(c).table.csv();
  c.jobs = 3;
  const std::string d = counterexample_scan(c).table.csv();
  CHECK(a == b);
  CHECK(a == d);
  c.seed = 10;
  CHECK(counterexample_scan(c).table.csv() != a);
}

TEST_CASE("config round trips keep decimals verbatim") {
  CounterexampleConfig c = small_scan();
  c.gamma = Decimal::parse("0.20");
  const nlohmann::json j = to_json(c);
  CHECK(j.at("gamma") == "0.20");
  CHECK(j.at("eps").at(0) == "1e-3");
  CHECK(to_json(counterexample_config_from_json(j)) == j);
  CHECK(to_json(stability_probe_config_from_json(to_json(StabilityProbeConfig{}))) ==
        to_json(StabilityProbeConfig{}));
  CHECK(to_json(lemma_check_config_from_json(to_json(LemmaCheckConfig{}))) ==
        to_json(LemmaCheckConfig{}));
  // numbers are accepted where decimals are expected
  const CounterexampleConfig n = counterexample_config_from_json({{"gamma", 0.1}});
  CHECK(n.gamma.value == 0.1);
  CHECK(code_of([] { counterexample_config_from_json({{"gama", "0.1"}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(config_hash(j) == config_hash(nlohmann::json::parse(j.dump())));
  CHECK(config_hash(j) != config_hash(to_json(CounterexampleConfig{})));
  CHECK(config_hash(j).size() == 16);
}

TEST_CASE("geometric lemma table") {
  LemmaCheckConfig c;
  c.eps = parse_decimal_list("1e-3,1e-4");
  const ExperimentOutput out = geometric_lemma_check(c);
  REQUIRE(out.table.rows.size() == 3);
  CHECK(out.table.rows[0][0] == "disk");
  CHECK(out.table.rows[0].back() == "skip");
  CHECK(out.table.rows[0][7] == "");
  const nlohmann::json& g = out.summary.at("per_gamma").at(0);
  CHECK(g.at("rows") == 2);
  CHECK(g.at("thm52_band").get<double>() < 1.1);
  CHECK(g.at("lem53_band").get<double>() < 1.5);
  CHECK(g.at("linear_growth").get<double>() == doctest::Approx(std::sqrt(10.0)).epsilon(0.01));
  c.gamma = parse_decimal_list("0.3");
  CHECK_THROWS_AS(geometric_lemma_check(c), Error);
}

TEST_CASE("artifacts") {
  const auto dir = std::filesystem::temp_directory_path() / "nlstab-artifacts-test";
  std::filesystem::remove_all(dir);
  const ExperimentOutput out = counterexample_scan(small_scan());
  const Artifacts a = write_artifacts(out, dir / "nested");
  CHECK(a.csv.filename().string() == "counterexample-scan-" + config_hash(out.config) + ".csv");
  CHECK(slurp(a.csv) == out.table.csv());
  const nlohmann::json j = nlohmann::json::parse(slurp(a.json));
  CHECK(j.at("config") == out.config);
  CHECK(j.at("summary") == out.summary);
  const Artifacts b = write_artifacts(counterexample_scan(small_scan()), dir / "again");
  CHECK(slurp(a.csv) == slurp(b.csv));
  CHECK(slurp(a.json) == slurp(b.json));
  std::ofstream(dir / "file") << "x";
  CHECK(code_of([&] { write_artifacts(out, dir / "file" / "sub"); }) == ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}
