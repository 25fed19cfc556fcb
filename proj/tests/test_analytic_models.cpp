#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tflab/analytic_models.hpp"
#include "tflab/errors.hpp"
#include "tflab/special_functions.hpp"
#include "tflab/spectrum_stats.hpp"

using namespace tflab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Poisson-sum closed form (long double accumulation) for integer a.
long double poisson_lambda(long long k, double x) {
  long double term = 1.0L, sum = 1.0L;
  for (long long j = 1; j <= k; ++j) {
    term *= x / static_cast<long double>(j);
    sum += term;
  }
  return 1.0L - std::exp(static_cast<long double>(-x)) * sum;
}
}  // namespace

TEST_CASE("disk eigenvalues") {
  const auto s = analytic::disk_eigenvalues(2.0, 100);
  CHECK(s.values[0] ==
        doctest::Approx(1.0 - std::exp(-4.0 * kPi)).epsilon(1e-13));
  for (size_t k = 0; k + 1 < s.values.size(); ++k) {
    CHECK(s.values[k] > s.values[k + 1]);  // strict decrease
  }
  CHECK(std::abs(s.values[12] -
                 static_cast<double>(poisson_lambda(12, 4.0 * kPi))) < 1e-12);
}

TEST_CASE("eigenvalues increase with the radius") {
  for (long long k : {0LL, 5LL, 20LL}) {
    double prev = 0.0;
    for (double radius : {1.0, 1.5, 2.0, 3.0}) {
      const double lam = specfun::reg_lower_gamma(
          static_cast<double>(k) + 1.0, kPi * radius * radius);
      CHECK(lam > prev);
      prev = lam;
    }
  }
}

TEST_CASE("log-space eigenvalues agree with the direct values") {
  for (double radius : {1.0, 2.0}) {
    for (long long k = 0; k <= 60; ++k) {
      const double direct = specfun::reg_lower_gamma(
          static_cast<double>(k) + 1.0, kPi * radius * radius);
      if (direct < 1e-290) continue;
      CHECK(analytic::log_disk_eigenvalue(radius, k) ==
            doctest::Approx(std::log(direct)).epsilon(1e-10));
    }
  }
}

TEST_CASE("log one-minus eigenvalue") {
  for (long long k : {0LL, 3LL, 12LL, 30LL}) {
    const double direct =
        1.0 - specfun::reg_lower_gamma(static_cast<double>(k) + 1.0, 4.0 * kPi);
    if (direct > 1e-14) {
      CHECK(analytic::log_one_minus_disk_eigenvalue(2.0, k) ==
            doctest::Approx(std::log(direct)).epsilon(1e-9));
    }
  }
  // Deep on the lambda ~ 1 side: k = 0, R = 4: 1 - lambda = e^{-16 pi}.
  CHECK(analytic::log_one_minus_disk_eigenvalue(4.0, 0) ==
        doctest::Approx(-16.0 * kPi).epsilon(1e-12));
}

TEST_CASE("polydisk eigenvalues") {
  const auto d1 = analytic::polydisk_eigenvalues(1.5, 1, 60);
  const auto disk = analytic::disk_eigenvalues(1.5, 60);
  for (size_t i = 0; i < disk.values.size(); ++i) {
    CHECK(d1.values[i] == disk.values[i]);
  }
  const auto d2 = analytic::polydisk_eigenvalues(1.0, 2, 40);
  const double top = 1.0 - std::exp(-kPi);
  CHECK(d2.values[0] == doctest::Approx(top * top).epsilon(1e-13));
  CHECK(d2.values.size() == 41 * 41);
  CHECK_THROWS_AS(analytic::polydisk_eigenvalues(1.0, 4, 300), NumericalError);
}

TEST_CASE("polydisk counting dominates the tensor-count bound") {
  // #{mu > delta} >= #{lambda > delta^{1/d}}^d for d = 2, R = 1.
  const auto d2 = analytic::polydisk_eigenvalues(1.0, 2, 60).as_spectrum();
  const auto d1 = analytic::disk_eigenvalues(1.0, 60).as_spectrum();
  for (double delta : {0.3, 0.1, 0.01, 1e-4}) {
    const long long mu_count = spectrum_stats::counting(d2, delta);
    const long long lam_count =
        spectrum_stats::counting(d1, std::sqrt(delta));
    CHECK(mu_count >= lam_count * lam_count);
  }
}

TEST_CASE("counting_analytic matches enumeration and reaches deep tails") {
  const auto spec = analytic::disk_eigenvalues(2.0, 400).as_spectrum();
  for (double delta : {0.5, 0.1, 1e-3, 1e-8}) {
    CHECK(analytic::counting_analytic(2.0, std::log(delta)) ==
          spectrum_stats::counting(spec, delta));
  }
  // Monotone in delta and finite far beyond double underflow of lambda.
  const long long c30 = analytic::counting_analytic(1.0, std::log(1e-30));
  const long long c60 = analytic::counting_analytic(1.0, -60.0 * std::log(10.0));
  CHECK(c60 > c30);
  CHECK(c60 < 200);
}

TEST_CASE("gamma tail upper envelope") {
  // k+1 right at pi R^2: exponent ~ 0, envelope ~ 1.
  const long long k0 = static_cast<long long>(std::ceil(4.0 * kPi)) - 1;
  const auto head = analytic::gamma_tail_sandwich(2.0, k0);
  CHECK(head.upper > 0.9);
  CHECK(head.holds_upper);
  const auto mid = analytic::gamma_tail_sandwich(2.0, 30);
  CHECK(mid.holds_upper);
  CHECK_THROWS_AS(analytic::gamma_tail_sandwich(2.0, 5), DomainError);
  // Full windows for R in {2, 3, 4}, pi R^2 <= k+1 <= 4 pi R^2.
  for (double radius : {2.0, 3.0, 4.0}) {
    const double x = kPi * radius * radius;
    for (long long k = static_cast<long long>(std::ceil(x)) - 1;
         k + 1 <= 4.0 * x; ++k) {
      if (k + 1 < x) continue;
      CHECK(analytic::gamma_tail_sandwich(radius, k).holds_upper);
    }
  }
}

TEST_CASE("gamma tail lower fit holds by construction") {
  const auto fit = analytic::fit_gamma_tail_lower(2.0, 4.0);
  CHECK(fit.a > 0.0);
  CHECK(fit.b > 0.0);
  const double x = 4.0 * kPi;
  for (long long k = 12; k + 1 <= 4.0 * x; ++k) {
    if (k + 1 < x) continue;
    const double u = (k + 1 - x) * (k + 1 - x) / (k + 1);
    CHECK(std::log(fit.a) - fit.b * u <=
          analytic::log_disk_eigenvalue(2.0, k) + 1e-9);
  }
}

TEST_CASE("sharpness regime A") {
  const auto fit = analytic::fit_sharpness_a({4.0, 6.0, 8.0},
                                             {std::exp(-4.0), std::exp(-9.0),
                                              std::exp(-16.0), std::exp(-25.0),
                                              std::exp(-36.0), std::exp(-49.0),
                                              std::exp(-64.0)});
  CHECK(fit.fitted_c > 0.0);
  // R = 6, delta = e^{-9}: the window holds and the ratio is positive.
  bool found = false;
  for (const auto& p : fit.points) {
    if (p.radius == 6.0 && std::abs(p.delta - std::exp(-9.0)) < 1e-12) {
      CHECK(p.ratio > 0.0);
      found = true;
    }
  }
  CHECK(found);
  // sqrt(log 1/delta) > R excluded.
  for (const auto& p : fit.points) {
    CHECK(std::sqrt(std::log(1.0 / p.delta)) <= p.radius + 1e-12);
  }
  CHECK_THROWS_AS(analytic::fit_sharpness_a({1.0}, {0.5}), HypothesisError);
}

TEST_CASE("sharpness regime A is stable under radius refinement") {
  std::vector<double> deltas;
  for (double sl = 2.0; sl <= 8.0; sl += 0.5) {
    deltas.push_back(std::exp(-sl * sl));
  }
  const auto coarse = analytic::fit_sharpness_a({4.0, 6.0, 8.0}, deltas);
  const auto fine =
      analytic::fit_sharpness_a({4.0, 5.0, 6.0, 7.0, 8.0}, deltas);
  CHECK(std::abs(coarse.fitted_c - fine.fitted_c) <=
        0.25 * std::max(coarse.fitted_c, fine.fitted_c));
}

TEST_CASE("sharpness regime B") {
  const auto fit = analytic::fit_sharpness_b({1.0}, {1e-30, 1e-45, 1e-60});
  CHECK(fit.fitted_c > 0.0);
  // Ratios across the deep-tail window stay within a factor 3.
  double lo = 1e300, hi = 0.0;
  for (const auto& p : fit.points) {
    lo = std::min(lo, p.ratio);
    hi = std::max(hi, p.ratio);
  }
  CHECK(hi / lo < 3.0);
  // Window empty at moderate delta and R = 2.
  CHECK_THROWS_AS(analytic::fit_sharpness_b({2.0}, {1e-3}), HypothesisError);
}
