#include "nlstab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>

#include "nlstab/error.hpp"
#include "nlstab/specfun.hpp"

namespace nlstab::quad {

namespace {

Rule build_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "Gauss-Legendre rule needs n >= 1");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

Rule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1 || alpha <= -1.0 || beta <= -1.0) {
    fail(ErrorCode::kInvalidArgument, "Gauss-Jacobi rule needs n >= 1 and alpha, beta > -1");
  }
  // Three-term recurrence of the monic Jacobi polynomials.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(n > 1 ? n - 1 : 1);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    diag[k] = (denom == 0.0) ? (beta - alpha) / (ab + 2.0)
                             : (beta * beta - alpha * alpha) / denom;
  }
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    const double den = t * t * (t + 1.0) * (t - 1.0);
    off[k - 1] = std::sqrt(num / den);
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) jac(k, k) = diag[k];
  for (int k = 0; k + 1 < n; ++k) jac(k, k + 1) = jac(k + 1, k) = off[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = std::pow(2.0, ab + 1.0) * nlstab::gamma(alpha + 1.0) *
                     nlstab::gamma(beta + 1.0) / nlstab::gamma(ab + 2.0);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    r.weights[k] = mu0 * v0 * v0;
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, int nodes,
                 int panels) {
  const Rule& rule = gauss_legendre(nodes);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    total += 0.5 * h * acc;
  }
  return total;
}

double integrate_graded(const std::function<double(double)>& f, double a, double b, int nodes,
                        int levels, bool grade_left, double ratio) {
  const Rule& rule = gauss_legendre(nodes);
  const double len = b - a;
  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * acc;
  };
  // Distances from the singular endpoint: len, len*ratio, ..., len*ratio^levels, 0.
  double total = 0.0;
  double outer = 1.0;
  for (int k = 0; k <= levels; ++k) {
    const double inner = (k == levels) ? 0.0 : outer * ratio;
    if (grade_left) {
      total += panel(a + inner * len, a + outer * len);
    } else {
      total += panel(b - outer * len, b - inner * len);
    }
    outer = inner;
  }
  return total;
}

Extremum maximize(const std::function<double(double)>& f, double a, double b, int bits,
                  int max_iter) {
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto neg = [&](double x) { return -f(x); };
  auto [x, v] = boost::math::tools::brent_find_minima(neg, a, b, bits, iters);
  return {x, -v};
}

double bisect(const std::function<double(double)>& f, double a, double b, double xtol,
              int max_iter) {
  double fa = f(a);
  if (fa == 0.0) return a;
  for (int i = 0; i < max_iter && std::abs(b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace nlstab::quad
