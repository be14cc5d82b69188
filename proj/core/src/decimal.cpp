#include "nlstab/decimal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "nlstab/error.hpp"

namespace nlstab {

std::string to_decimal(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) fail(ErrorCode::kInvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) {
    fail(ErrorCode::kInvalidArgument, "not a finite decimal number: '" + std::string(text) + "'");
  }
  return value;
}

Decimal Decimal::parse(std::string_view text) { return {std::string(text), parse_decimal(text)}; }

std::vector<Decimal> parse_decimal_list(std::string_view text) {
  std::vector<Decimal> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    out.push_back(Decimal::parse(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::string join_decimals(const std::vector<Decimal>& list) {
  std::string out;
  for (const Decimal& d : list) {
    if (!out.empty()) out += ',';
    out += d.text;
  }
  return out;
}

}  // namespace nlstab
