#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nlstab {

/// Shortest decimal string that parses back to exactly `x`.
std::string to_decimal(double x);

/// Strict parse of a full decimal string; throws ErrorCode::kInvalidArgument.
double parse_decimal(std::string_view text);

/// A number together with the text it was given as, echoed verbatim into
/// outputs.
struct Decimal {
  std::string text;
  double value = 0.0;

  static Decimal parse(std::string_view text);
  static Decimal of(double x) { return {to_decimal(x), x}; }
};

/// Comma-separated list of decimals, e.g. "1e-3,1e-4".
std::vector<Decimal> parse_decimal_list(std::string_view text);
std::string join_decimals(const std::vector<Decimal>& list);

}  // namespace nlstab
