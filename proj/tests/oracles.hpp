// Test-only oracles, independent of the library's quadrature path:
// adaptive Simpson in 1-D/2-D and small brute-force helpers.
#pragma once

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson_panel(const std::function<double(double)>& f, double a,
                            double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_impl(const std::function<double(double)>& f,
                                    double a, double b, double whole,
                                    double tol, int depth, int min_depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson_panel(f, a, m);
  const double right = simpson_panel(f, m, b);
  // min_depth forces early subdivisions so narrow features are not missed.
  if (depth <= 0 ||
      (min_depth <= 0 && std::abs(left + right - whole) < 15.0 * tol)) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_impl(f, a, m, left, 0.5 * tol, depth - 1,
                               min_depth - 1) +
         adaptive_simpson_impl(f, m, b, right, 0.5 * tol, depth - 1,
                               min_depth - 1);
}

inline double integrate_1d(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-12, int min_depth = 8) {
  return adaptive_simpson_impl(f, a, b, simpson_panel(f, a, b), tol, 48,
                               min_depth);
}

inline double integrate_2d(const std::function<double(double, double)>& f,
                           double ax, double bx, double ay, double by,
                           double tol = 1e-10) {
  return integrate_1d(
      [&](double x) {
        return integrate_1d([&, x](double y) { return f(x, y); }, ay, by,
                            0.05 * tol);
      },
      ax, bx, tol);
}

}  // namespace oracles
