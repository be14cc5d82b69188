#include "nlstab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nlstab/error.hpp"

namespace nlstab {

FracParams FracParams::make(int n, double s) {
  if (n < 1) fail(ErrorCode::kParameterDomain, "dimension n must be >= 1");
  if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::kParameterDomain, "order s must lie in (0,1)");
  return FracParams{n, s, frac_laplacian_constant(n, s)};
}

double frac_laplacian_constant(int n, double s) {
  const double half_n = 0.5 * n;
  return s * std::pow(4.0, s) * gamma(half_n + s) /
         (std::pow(std::numbers::pi, half_n) * gamma(1.0 - s));
}

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream msg;
    msg << "gamma has a pole at " << x;
    fail(ErrorCode::kPole, msg.str());
  }
  return std::tgamma(x);
}

SeriesValue gauss_2f1_series(double a, double b, double c, double z) {
  if (c <= 0.0 && c == std::floor(c)) {
    fail(ErrorCode::kParameterDomain, "2F1: c must not be a nonpositive integer");
  }
  if (!(z <= 0.0 && z > -1.0)) {
    fail(ErrorCode::kParameterDomain, "2F1: only -1 < z <= 0 is supported");
  }
  SeriesValue out;
  double term = 1.0;
  double sum = 1.0;
  int k = 0;
  constexpr int kMaxTerms = 100000;
  while (k < kMaxTerms) {
    const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= ratio;
    sum += term;
    ++k;
    if (term == 0.0) break;
    // Once the ratio has settled below one in magnitude the remaining terms
    // are dominated by a geometric series.
    const double next_ratio = std::abs((a + k) * (b + k) / ((c + k) * (k + 1.0)) * z);
    if (std::abs(term) < 1e-16 * std::abs(sum) && next_ratio < 1.0) {
      out.tail_bound = std::abs(term) * next_ratio / (1.0 - next_ratio);
      break;
    }
  }
  if (k >= kMaxTerms) fail(ErrorCode::kParameterDomain, "2F1: series did not converge");
  out.value = sum;
  out.terms = k;
  return out;
}

double gauss_2f1(double a, double b, double c, double z) {
  return gauss_2f1_series(a, b, c, z).value;
}

double gamma_ns(const FracParams& p) {
  const double n = p.n;
  return std::pow(2.0, -2.0 * p.s) * gamma(0.5 * n) /
         (gamma(0.5 * (n + 2.0 * p.s)) * gamma(1.0 + p.s));
}

double gamma_nse(const FracParams& p, double eps) {
  if (!(eps >= 0.0 && eps < 0.25)) fail(ErrorCode::kEpsOutOfRange, "eps must lie in [0, 1/4)");
  const double n = p.n;
  const double z = 1.0 - (1.0 + eps) * (1.0 + eps);
  const double f = gauss_2f1(0.5 * (n + 2.0 * p.s), 0.5, 0.5 * n, z);
  return gamma_ns(p) / ((1.0 + eps) * f);
}

}  // namespace nlstab
