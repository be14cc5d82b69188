#pragma once

// The nlstab command line: subcommands over the core library with every
// numeric parameter kept as the decimal string it was given in.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace nlstab::cli {

/// One invocation: subcommand, flag values as given, seed, output directory.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string output_path = ".";
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Subcommand names in help order.
const std::vector<std::string>& commands();

/// Parses args (without the program name), runs, writes results to `out`.
/// Returns 0 on success, 2 on a validation failure with an error JSON
/// object on `err`, 1 on an unexpected internal failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlstab::cli
