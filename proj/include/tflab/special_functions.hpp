#pragma once

#include <cstdint>

namespace tflab::specfun {

/// A value together with an estimated absolute error, used by the
/// quadrature-backed quantities throughout the library.
struct ScalarResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

/// Regularized lower incomplete gamma function P(a,x) = gamma(a,x) / Gamma(a).
///
/// Series for x < a+1, Lentz continued fraction for the complementary
/// function otherwise, so both tails carry full double accuracy
/// (absolute error <= 1e-12 for a <= 500, x <= 5000).
/// Throws DomainError for a <= 0 or x < 0.
double reg_lower_gamma(double a, double x);

/// Complementary error function. Total on finite reals.
double erfc(double x);

/// ln(n!). Throws DomainError for n < 0.
double log_factorial(std::int64_t n);

}  // namespace tflab::specfun
