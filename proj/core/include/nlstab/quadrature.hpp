#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace nlstab::quad {

/// Nodes and weights of an interpolatory rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on
/// [-1, 1], alpha, beta > -1 (Golub-Welsch).
Rule gauss_jacobi(int n, double alpha, double beta);

/// Integral of f over [a, b] with `panels` equal Gauss-Legendre panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int nodes, int panels = 1);

/// Integral of f over [a, b] on a geometric mesh graded towards `a`
/// (if grade_left) or `b`: breakpoints at ratio `ratio`, `levels` panels.
/// Suited to integrable algebraic endpoint singularities.
double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        int nodes, int levels, bool grade_left, double ratio = 0.15);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Local maximum of f on [a, b] by Brent's method.
Extremum maximize(const std::function<double(double)>& f, double a, double b,
                  int bits = 40, int max_iter = 200);

/// Root of f on [a, b] by bisection; f(a), f(b) must differ in sign.
double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol = 1e-14, int max_iter = 200);

}  // namespace nlstab::quad
