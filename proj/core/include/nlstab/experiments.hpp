#pragma once

// Scripted reproductions: power-law fits, the ellipsoid stability probe,
// the bump counterexample scan and the geometric-lemma sharpness table.
// Each experiment turns a config into a table plus a JSON summary; the
// output file names come from a hash of the canonical config.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nlstab/decimal.hpp"
#include "nlstab/measures.hpp"
#include "nlstab/seminorm.hpp"

namespace nlstab {

/// Least-squares line through (log x, log y).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  std::vector<std::pair<double, double>> points;
};

/// Needs >= 3 points (kInsufficientData), all coordinates > 0
/// (kNonpositiveData).
FitResult exponent_fit(const std::vector<std::pair<double, double>>& points);
nlohmann::json to_json(const FitResult& fit);

/// Column names plus rows of already formatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

struct ExperimentOutput {
  std::string name;
  nlohmann::json config;   // canonical config, decimals as given
  Table table;
  nlohmann::json summary;
};

struct StabilityProbeConfig {
  int n = 2;
  Decimal s = Decimal::parse("0.5");
  std::vector<Decimal> eps = parse_decimal_list("0.02,0.01,0.005");
  std::uint64_t seed = 0;  // shape-metrics multistart
  int jobs = 1;  // rows computed concurrently; not part of the config
};

/// Rows (eps, rho(Omega_eps), [u_eps]); fit of log rho against log [u].
ExperimentOutput stability_probe(const StabilityProbeConfig& cfg);

struct CounterexampleConfig {
  Decimal alpha = Decimal::parse("2");
  std::vector<Decimal> eps = parse_decimal_list("1e-3,3e-4,1e-4,3e-5,1e-5");
  Decimal gamma = Decimal::parse("0.2");
  Decimal tol = Decimal::parse("1e-6");  // critical-plane resolution
  long samples = 64;  // grid panels, or monte-carlo points
  MeasureMethod method = MeasureMethod::kGrid;
  std::uint64_t seed = 0;
  int jobs = 1;  // rows computed concurrently; not part of the config
};

/// Rows (eps, lambda_eps, slab measure) for the bump family; fits of
/// lambda and of the slab against eps.
ExperimentOutput counterexample_scan(const CounterexampleConfig& cfg);

struct LemmaCheckConfig {
  Decimal alpha = Decimal::parse("2");
  std::vector<Decimal> eps = parse_decimal_list("1e-3,3e-4,1e-4,3e-5,1e-5");
  std::vector<Decimal> gamma = parse_decimal_list("0.2");
  Decimal tol = Decimal::parse("1e-6");
  long samples = 64;
  MeasureMethod method = MeasureMethod::kGrid;
  std::uint64_t seed = 0;
  bool include_disk = true;  // degenerate reference rows, flagged skip
  int jobs = 1;  // rows computed concurrently; not part of the config
};

/// Rows (eps, gamma, slab, slab / (gamma (R-r)^{1-1/alpha}),
/// slab / (gamma (R - r + gamma |lambda|)), slab / (gamma (R-r))) with R, r
/// the origin-centered annulus radii.
ExperimentOutput geometric_lemma_check(const LemmaCheckConfig& cfg);

nlohmann::json to_json(const StabilityProbeConfig& cfg);
nlohmann::json to_json(const CounterexampleConfig& cfg);
nlohmann::json to_json(const LemmaCheckConfig& cfg);
StabilityProbeConfig stability_probe_config_from_json(const nlohmann::json& j);
CounterexampleConfig counterexample_config_from_json(const nlohmann::json& j);
LemmaCheckConfig lemma_check_config_from_json(const nlohmann::json& j);

/// 16 hex digits of FNV-1a over the compact dump of `config` (keys sorted).
std::string config_hash(const nlohmann::json& config);

struct Artifacts {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes <dir>/<name>-<hash>.csv and .json; throws kIo on failure.
Artifacts write_artifacts(const ExperimentOutput& out, const std::filesystem::path& dir);

}  // namespace nlstab
