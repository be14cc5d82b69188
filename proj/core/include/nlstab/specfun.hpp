#pragma once

// Special functions and the normalizing constants of the fractional torsion
// problem.

namespace nlstab {

/// Dimension n, order s in (0,1), and the fractional Laplacian constant
///   c_{n,s} = s 4^s Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s)).
struct FracParams {
  int n = 2;
  double s = 0.5;
  double c_ns = 0.0;

  /// Validates 0 < s < 1, n >= 1 and fills c_ns.
  static FracParams make(int n, double s);
};

double frac_laplacian_constant(int n, double s);

/// Gamma function; throws ErrorCode::kPole at nonpositive integers.
double gamma(double x);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;  // ratio-test bound on the discarded tail
  int terms = 0;
};

/// Gauss hypergeometric series 2F1(a,b;c;z) for -1 < z <= 0.
SeriesValue gauss_2f1_series(double a, double b, double c, double z);
double gauss_2f1(double a, double b, double c, double z);

/// gamma_{n,s} = 2^{-2s} Gamma(n/2) / (Gamma((n+2s)/2) Gamma(1+s)), the
/// constant making gamma_{n,s} (1-|x|^2)_+^s the torsion function of B_1.
double gamma_ns(const FracParams& p);

/// Torsion constant of the ellipsoid x1^2/(1+eps)^2 + |x'|^2 < 1,
/// 0 <= eps < 1/4.
double gamma_nse(const FracParams& p, double eps);

}  // namespace nlstab
