#pragma once

#include <functional>
#include <vector>

namespace tflab::quad {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed once per order by Newton iteration and cached (thread-safe).
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const Rule1D& gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
Rule1D gauss_legendre_on(int n, double a, double b);

/// integral of f over [a, b] with the n-point rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int n);

/// Adaptive bisection with a GL15/GL31 error estimate; a panel is accepted
/// at abs_tol (split across subdivisions) or rel_tol of its own value,
/// whichever is larger. Throws NumericalError past the recursion budget.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol = 1e-12,
                          int max_depth = 40);

/// Quadrature points for a triangle (Duffy-collapsed tensor Gauss,
/// n x n points; n = 11 is exact for total degree 10 polynomials).
struct Point2D {
  double x, y, w;
};

std::vector<Point2D> triangle_rule(double ax, double ay, double bx, double by,
                                   double cx, double cy, int n);

}  // namespace tflab::quad
