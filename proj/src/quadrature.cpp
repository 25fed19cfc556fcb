#include "tflab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "tflab/errors.hpp"

namespace tflab::quad {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

double gl_on_interval(const std::function<double(double)>& f, double a,
                      double b, const Rule1D& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

double adaptive_impl(const std::function<double(double)>& f, double a,
                     double b, double tol, double rel_tol, int depth,
                     const Rule1D& lo, const Rule1D& hi) {
  const double coarse = gl_on_interval(f, a, b, lo);
  const double fine = gl_on_interval(f, a, b, hi);
  const double accept = std::max(tol, rel_tol * std::abs(fine));
  if (std::abs(fine - coarse) <= accept || (b - a) < 1e-14) return fine;
  if (depth <= 0) {
    throw NumericalError("integrate_adaptive: tolerance not reached");
  }
  const double mid = 0.5 * (a + b);
  return adaptive_impl(f, a, mid, 0.5 * tol, rel_tol, depth - 1, lo, hi) +
         adaptive_impl(f, mid, b, 0.5 * tol, rel_tol, depth - 1, lo, hi);
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
  static std::map<int, Rule1D> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule1D gauss_legendre_on(int n, double a, double b) {
  const Rule1D& base = gauss_legendre(n);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * base.nodes[i];
    rule.weights[i] = half * base.weights[i];
  }
  return rule;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int n) {
  return gl_on_interval(f, a, b, gauss_legendre(n));
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_depth) {
  return adaptive_impl(f, a, b, abs_tol, rel_tol, max_depth,
                       gauss_legendre(15), gauss_legendre(31));
}

std::vector<Point2D> triangle_rule(double ax, double ay, double bx, double by,
                                   double cx, double cy, int n) {
  // Duffy map of the unit square onto the reference triangle,
  // then affine onto (a, b, c). Jacobian of the affine map = 2*area.
  const Rule1D& g = gauss_legendre(n);
  const double jac =
      std::abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay));  // 2*area
  std::vector<Point2D> pts;
  pts.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    const double wu = 0.5 * g.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      const double wv = 0.5 * g.weights[j];
      const double s = u;            // first barycentric-like coordinate
      const double t = v * (1.0 - u);  // second; jacobian factor (1-u)
      pts.push_back({ax + s * (bx - ax) + t * (cx - ax),
                     ay + s * (by - ay) + t * (cy - ay),
                     wu * wv * (1.0 - u) * jac});
    }
  }
  return pts;
}

}  // namespace tflab::quad
