#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tflab/analytic_models.hpp"
#include "tflab/bounds.hpp"
#include "tflab/errors.hpp"
#include "tflab/special_functions.hpp"
#include "tflab/spectrum_stats.hpp"

using namespace tflab;

namespace {
constexpr double kPi = 3.14159265358979323846;

windows::WindowConstants gaussian_constants() {
  static const windows::WindowConstants wc =
      windows::make_window_constants(windows::Window::gaussian(), 0.5, 3.0);
  return wc;
}
}  // namespace

TEST_CASE("bound_simple") {
  CHECK(bounds::bound_simple(0.5, 4.0, 0.5) == doctest::Approx(4.0));
  CHECK(bounds::bound_simple(0.5, 4.0 * kPi, 0.1) ==
        doctest::Approx(20.0 * kPi).epsilon(1e-12));
  // tau is minimized at delta = 1/2.
  const double at_half = bounds::bound_simple(0.5, 1.0, 0.5);
  for (double d : {0.1, 0.3, 0.7, 0.95}) {
    CHECK(bounds::bound_simple(0.5, 1.0, d) > at_half);
  }
  // Derived C_g = K_g / 2 = 1/2 for the Gaussian.
  CHECK(0.5 * windows::k_g_constant(windows::Window::gaussian()) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("bound_gs recomposition and symmetries") {
  const auto wc = gaussian_constants();
  const bounds::GeometryInputs geom{4.0 * kPi, 1.0, 1.0};
  const double delta = 1e-4;
  const double value = bounds::bound_gs(wc, geom, delta, 1.0);
  // Independent re-composition of the factors.
  const double tau = 1.0 / delta;
  const double lt = std::log(tau);
  const double c_prime = std::sqrt(wc.gs_C) * std::pow(wc.gs_A, 5.0);
  const double recomposed = c_prime * geom.perimeter * std::sqrt(lt) *
                            (1.0 + std::sqrt(lt) / geom.eta) *
                            std::log(lt + 1.0) / geom.kappa;
  CHECK(value == doctest::Approx(recomposed).epsilon(1e-12));
  CHECK(std::isfinite(value));
  // delta and 1 - delta give identical values.
  CHECK(bounds::bound_gs(wc, geom, 0.002, 1.0) ==
        bounds::bound_gs(wc, geom, 0.998, 1.0));
  // Linear in the perimeter.
  bounds::GeometryInputs doubled = geom;
  doubled.perimeter *= 2.0;
  CHECK(bounds::bound_gs(wc, doubled, delta, 1.0) ==
        doctest::Approx(2.0 * value).epsilon(1e-13));
  // Hypothesis check.
  auto bad = wc;
  bad.gs_beta = 0.4;
  CHECK_THROWS_AS(bounds::bound_gs(bad, geom, delta, 1.0), HypothesisError);
}

TEST_CASE("bound_gs is nondecreasing as delta decreases below 1/2") {
  const auto wc = gaussian_constants();
  const bounds::GeometryInputs geom{4.0, 1.0, 0.5};
  double prev = 0.0;
  for (double d = 0.4; d > 1e-9; d *= 0.2) {
    const double cur = bounds::bound_gs(wc, geom, d, 1.0);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("bound_gs dilation scaling identity") {
  // Evaluating on (R Omega, R eta) equals the perimeter-scaled composition
  // with the same kappa.
  const auto wc = gaussian_constants();
  const double delta = 1e-3;
  for (double factor : {2.0, 5.0}) {
    const bounds::GeometryInputs base{2.0 * kPi, 1.0, 0.8};
    const bounds::GeometryInputs dil{factor * base.perimeter, base.kappa,
                                     factor * base.eta};
    const double lt = std::log(1.0 / delta);
    const double c_prime = std::sqrt(wc.gs_C) * std::pow(wc.gs_A, 5.0);
    const double predicted = c_prime * factor * base.perimeter *
                             std::sqrt(lt) *
                             (1.0 + std::sqrt(lt) / (factor * base.eta)) *
                             std::log(lt + 1.0) / base.kappa;
    CHECK(bounds::bound_gs(wc, dil, delta, 1.0) ==
          doctest::Approx(predicted).epsilon(1e-13));
  }
}

TEST_CASE("bound_gs constant variants are selectable") {
  const auto wc = gaussian_constants();
  const bounds::GeometryInputs geom{4.0, 1.0, 1.0};
  const double plain =
      bounds::bound_gs(wc, geom, 1e-3, 1.0, bounds::GsConstantVariant::Plain);
  const double full = bounds::bound_gs(wc, geom, 1e-3, 1.0,
                                       bounds::GsConstantVariant::RemarkFull);
  const double large_tau = bounds::bound_gs(
      wc, geom, 1e-3, 1.0, bounds::GsConstantVariant::RemarkLargeTau);
  CHECK(plain > 0.0);
  CHECK(full > plain);  // the explicit remark constant is larger
  CHECK(large_tau > 0.0);
}

TEST_CASE("bound_poly") {
  const double c_g3 = windows::moment_constant(windows::Window::gaussian(), 3.0);
  const bounds::GeometryInputs geom{4.0 * kPi, 1.0, 1.0};
  // s = 1 collapses to the first-moment shape C_d C_g per tau.
  const double c_g1 = windows::moment_constant(windows::Window::gaussian(), 1.0);
  CHECK(bounds::bound_poly(c_g1, 1.0, geom, 0.01, 1.0) ==
        doctest::Approx(c_g1 * geom.perimeter * 100.0).epsilon(1e-12));
  // tau exponent is 2/(s+1): s = 3 gives tau^{1/2} once logs are stripped.
  const double v = bounds::bound_poly(c_g3, 3.0, geom, 1e-3, 1.0);
  const double tau = 1e3;
  const double recomposed = std::pow(c_g3, 0.5) * geom.perimeter *
                            std::sqrt(tau) *
                            std::pow(std::log(c_g3 * tau), 0.5);
  CHECK(v == doctest::Approx(recomposed).epsilon(1e-12));
  CHECK_THROWS_AS(bounds::bound_poly(c_g3, 0.5, geom, 0.1, 1.0),
                  HypothesisError);
  const bounds::GeometryInputs big_eta{4.0, 1.0, 1.5};
  CHECK_THROWS_AS(bounds::bound_poly(c_g3, 3.0, big_eta, 0.1, 1.0),
                  HypothesisError);
}

TEST_CASE("bound_hankel") {
  const auto g = windows::Window::gaussian();
  const bounds::GeometryInputs geom{4.0 * kPi, 1.0, 1.0};
  // p = 2 collapse: weight (1+|z|)^{1/2}, prefactor (kappa alpha)^0 = 1.
  const double collapse = bounds::bound_hankel(g, geom, 2.0, 0.7, 1.0);
  const double moment1 = windows::moment_constant(g, 1.0);
  CHECK(collapse == doctest::Approx(geom.perimeter * moment1).epsilon(1e-8));
  // p = 1, alpha = 1: weighted integral against a dense radial oracle.
  const double v = bounds::bound_hankel(g, geom, 1.0, 1.0, 1.0);
  const double weighted = oracles::integrate_1d(
      [](double r) {
        return (1.0 + r) * std::pow(1.0 + r, 3.0) * std::exp(-kPi * r * r) *
               2.0 * kPi * r;
      },
      0.0, 10.0, 1e-12);
  CHECK(v == doctest::Approx(geom.perimeter * std::sqrt(weighted))
                 .epsilon(1e-6));
  // Monotone increasing as eta decreases.
  double prev = 0.0;
  for (double eta : {1.0, 0.5, 0.25, 0.125}) {
    const bounds::GeometryInputs ge{4.0, 1.0, eta};
    const double cur = bounds::bound_hankel(g, ge, 1.0, 1.0, 1.0);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(bounds::bound_hankel(g, geom, 2.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bounds::bound_hankel(g, geom, 1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("verify_schatten_bound") {
  // Projection spectrum with integer measure: both sides vanish.
  const auto proj = concentration::spectrum_from_values({1.0, 1.0, 1.0});
  const auto sq3 = geometry::Domain::rect(0, 0, 3, 1);
  for (double d : {0.2, 0.5, 0.9}) {
    const auto check = bounds::verify_schatten_bound(proj, sq3, d, 1.0);
    CHECK(check.lhs == 0.0);
    CHECK(check.rhs == 0.0);
    CHECK(check.holds);
  }
  // Analytic disk spectrum sweep.
  const auto spec = analytic::disk_eigenvalues(2.0, 400).as_spectrum();
  const auto disk = geometry::Domain::disk(0, 0, 2);
  const auto single = bounds::verify_schatten_bound(spec, disk, 0.3, 1.0);
  CHECK(single.holds);
  for (double delta = 0.01; delta < 0.995; delta += 0.01) {
    for (double p : {0.25, 0.5, 1.0, 2.0}) {
      CHECK(bounds::verify_schatten_bound(spec, disk, delta, p).holds);
    }
  }
}

TEST_CASE("plunge_indices") {
  const auto idx = bounds::plunge_indices(1.0, 4.0 * kPi, 13);
  CHECK(idx.upper_start == 26);
  CHECK(idx.lower_end == 0);  // vacuous lower range
  // Verified on the analytic spectrum (1-based indexing).
  const auto spec = analytic::disk_eigenvalues(2.0, 100);
  CHECK(spec.values[25] <= 0.5);
  const auto degenerate = bounds::plunge_indices(1.0, 0.0, 7);
  CHECK(degenerate.upper_start == 7);
  CHECK(degenerate.lower_end == 7);
}

TEST_CASE("envelope_gs") {
  // h = 1: inner expression h/(e(1+log h)) = 1/e, envelope e^{-1/e}.
  CHECK(bounds::envelope_gs(20, 10, 10.0, 0.5) ==
        doctest::Approx(std::exp(-std::exp(-1.0))).epsilon(1e-13));
  // Decreasing in h.
  double prev = 1.0;
  for (long long k = 20; k <= 400; k += 20) {
    const double e = bounds::envelope_gs(k, 10, 10.0, 0.5);
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(bounds::envelope_gs(15, 10, 10.0, 0.5), DomainError);
}

TEST_CASE("envelope_poly") {
  // s = 1: e / h.
  CHECK(bounds::envelope_poly(30, 10, 10.0, 1.0, 1.5) ==
        doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-13));
  // s = 3, h = 1: e^4 (1 + log C_g).
  CHECK(bounds::envelope_poly(20, 10, 10.0, 3.0, 1.5) ==
        doctest::Approx(std::exp(4.0) * (1.0 + std::log(1.5))).epsilon(1e-13));
  // Decreasing for h >= 3 at s = 3, C_g = 1.5.
  double prev = 1e300;
  for (long long k = 40; k <= 200; k += 10) {  // h = 3, 4, ...
    const double e = bounds::envelope_poly(k, 10, 10.0, 3.0, 1.5);
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(bounds::envelope_poly(12, 10, 10.0, 0.5, 1.5),
                  HypothesisError);
}

TEST_CASE("a1 halfplane level against a plain bisection oracle") {
  for (double delta : {0.25, 0.1, 0.01, 1e-6}) {
    const double lam = bounds::a1_halfplane_level(delta);
    double lo = 0.0, hi = 16.0;
    for (int it = 0; it < 120; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (0.5 * specfun::erfc(std::sqrt(2.0 * kPi) * mid) > delta) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    CHECK(lam == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
    CHECK(0.5 * specfun::erfc(std::sqrt(2.0 * kPi) * lam) ==
          doctest::Approx(delta).epsilon(1e-8));
  }
  // delta = 1/4 solves erfc(sqrt(2 pi) lambda) = 1/2 with lambda > 0.
  CHECK(bounds::a1_halfplane_level(0.25) > 0.0);
}

TEST_CASE("a1 level grows like sqrt(log(1/delta)) and vanishes at 1/2") {
  double ratio_lo = 1e300, ratio_hi = 0.0;
  for (double delta = 1e-2; delta > 1e-12; delta *= 1e-2) {
    const double r = bounds::a1_halfplane_level(delta) /
                     std::sqrt(std::log(1.0 / delta));
    ratio_lo = std::min(ratio_lo, r);
    ratio_hi = std::max(ratio_hi, r);
  }
  CHECK(ratio_hi < 1.0);   // bounded by C sqrt(log 1/delta)
  CHECK(ratio_lo > 0.1);
  CHECK(bounds::a1_halfplane_level(0.499999) < 1e-3);
  const auto g = windows::Window::gaussian();
  CHECK(bounds::a1_term(g, geometry::Domain::disk(0, 0, 2), 0.499999, 1.0) <
        0.05);
  CHECK_THROWS_AS(
      bounds::a1_term(windows::Window::hermite(2),
                      geometry::Domain::disk(0, 0, 1), 0.25, 1.0),
      DomainError);
}

TEST_CASE("fit_constant") {
  using bounds::FitPoint;
  const FitPoint zero{2.0, 0.1, 0.0, 5.0};
  const auto f0 = bounds::fit_constant({zero}, bounds::BoundId::Simple);
  CHECK(f0.fitted_cd == 0.0);
  const FitPoint a{2.0, 0.1, 3.0, 6.0};
  const FitPoint b{3.0, 0.01, 2.0, 8.0};
  const auto f1 = bounds::fit_constant({a, b}, bounds::BoundId::Simple);
  const auto f2 = bounds::fit_constant({a, b, a, b}, bounds::BoundId::Simple);
  CHECK(f1.fitted_cd == doctest::Approx(0.5));
  CHECK(f1.fitted_cd == f2.fitted_cd);  // max is idempotent
  CHECK(f1.max_radius == 2.0);
  // Gs semantics: C_d enters as C_d^beta, equality at the max point.
  const auto fg = bounds::fit_constant({a, b}, bounds::BoundId::Gs, 0.5);
  CHECK(fg.max_ratio == doctest::Approx(0.5));
  CHECK(fg.fitted_cd == doctest::Approx(0.25));
  CHECK(std::pow(fg.fitted_cd, 0.5) * a.rhs_unit ==
        doctest::Approx(a.lhs).epsilon(1e-12));
  CHECK_THROWS_AS(bounds::fit_constant({}, bounds::BoundId::Gs), DomainError);
}

TEST_CASE("envelope gamma fit certifies both branches") {
  std::vector<bounds::EnvelopeSample> samples;
  for (double radius : {2.0, 4.0}) {
    bounds::EnvelopeSample s;
    s.radius = radius;
    s.a_omega = static_cast<long long>(std::ceil(kPi * radius * radius));
    s.perimeter = 2.0 * kPi * radius;
    for (long long k = 1; k <= 300; ++k) {
      s.log_lambda.push_back(analytic::log_disk_eigenvalue(radius, k - 1));
      s.log_one_minus_lambda.push_back(
          analytic::log_one_minus_disk_eigenvalue(radius, k - 1));
    }
    samples.push_back(std::move(s));
  }
  const double scale = bounds::fit_envelope_gamma_gs(samples, 1.0, 1.0, 0.5);
  CHECK(scale > 0.0);
  for (const auto& s : samples) {
    const double gamma = 2.0 * scale * s.perimeter;
    for (long long k = 1; k <= 300; ++k) {
      const double dist = std::abs(static_cast<double>(k - s.a_omega));
      if (dist < gamma) continue;  // h < 1: exempt
      const double env = bounds::envelope_gs(k, s.a_omega, gamma, 0.5);
      if (k > s.a_omega) {
        CHECK(s.log_lambda[k - 1] <= std::log(env) + 1e-9);
      } else if (k < s.a_omega) {
        CHECK(s.log_one_minus_lambda[k - 1] <= std::log(env) + 1e-9);
      }
    }
  }
}

TEST_CASE("bound report bundles the per-point evaluations") {
  const auto spec = analytic::disk_eigenvalues(2.0, 300).as_spectrum();
  const auto disk = geometry::Domain::disk(0, 0, 2);
  const auto g = windows::Window::gaussian();
  const auto wc = gaussian_constants();
  const bounds::GeometryInputs geom{4.0 * kPi, 1.0, 1.0};
  const auto r =
      bounds::make_bound_report(spec, disk, g, wc, geom, 0.1, 1.0, 3.0, 1.0,
                                1.0);
  CHECK(r.deviation_lhs ==
        doctest::Approx(spectrum_stats::deviation(spec, disk, 0.1)));
  CHECK(r.rhs_simple ==
        doctest::Approx(bounds::bound_simple(0.5 * wc.K_g, geom.perimeter, 0.1)));
  CHECK(r.rhs_gs == doctest::Approx(bounds::bound_gs(wc, geom, 0.1, 1.0)));
  CHECK(r.rhs_poly ==
        doctest::Approx(bounds::bound_poly(wc.moment_Cg, 3.0, geom, 0.1, 1.0)));
  CHECK(r.rhs_hankel ==
        doctest::Approx(bounds::bound_hankel(g, geom, 1.0, 1.0, 1.0)));
  CHECK(r.admissible_simple);
  CHECK(r.admissible_gs);
  CHECK(r.admissible_schatten);
  CHECK(r.deviation_lhs <= r.rhs_schatten + r.schatten_tolerance);
  // eta > 1 clears only the poly flag.
  const bounds::GeometryInputs wide{4.0 * kPi, 1.0, 1.4};
  const auto r2 = bounds::make_bound_report(spec, disk, g, wc, wide, 0.1, 1.0,
                                            3.0, 1.0, 1.0);
  CHECK_FALSE(r2.admissible_poly);
  CHECK(r2.admissible_gs);
}

TEST_CASE("hankel bound dominates the measured Schatten norm at a fitted constant") {
  const auto g = windows::Window::gaussian();
  std::vector<bounds::FitPoint> pts;
  for (double radius : {2.0, 3.0}) {
    const auto spec = analytic::disk_eigenvalues(
                          radius, static_cast<long long>(
                                      kPi * radius * radius + 40.0 * radius +
                                      120.0))
                          .as_spectrum();
    const bounds::GeometryInputs geom{2.0 * kPi * radius, 1.0, 1.0};
    for (double p : {0.5, 1.0, 2.0}) {
      pts.push_back({radius, p, concentration::hankel_schatten(spec, p),
                     bounds::bound_hankel(g, geom, p, 1.0, 1.0)});
    }
  }
  const auto fit = bounds::fit_constant(pts, bounds::BoundId::Hankel);
  CHECK(std::isfinite(fit.fitted_cd));
  CHECK(fit.fitted_cd > 0.0);
  for (const auto& p : pts) {
    CHECK(p.lhs <= fit.fitted_cd * p.rhs_unit + 1e-9);
  }
}
