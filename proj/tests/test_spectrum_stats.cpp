#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tflab/analytic_models.hpp"
#include "tflab/errors.hpp"
#include "tflab/special_functions.hpp"
#include "tflab/spectrum_stats.hpp"

using namespace tflab;
namespace stats = spectrum_stats;

namespace {
constexpr double kPi = 3.14159265358979323846;

concentration::Spectrum spec_of(std::vector<double> v) {
  return concentration::spectrum_from_values(std::move(v));
}
}  // namespace

TEST_CASE("counting basics") {
  CHECK(stats::counting(spec_of({1.0, 1.0, 0.0}), 0.5) == 2);
  CHECK(stats::counting(spec_of({0.4, 0.2}), 0.4) == 0);  // strict
  CHECK(stats::counting(spec_of({0.4, 0.2}), 0.9) == 0);
  // Values within 1e-12 of delta count as <= delta.
  CHECK(stats::counting(spec_of({0.5 + 5e-13}), 0.5) == 0);
  CHECK(stats::counting(spec_of({0.5 + 5e-12}), 0.5) == 1);
  CHECK_THROWS_AS(stats::counting(spec_of({0.5}), 0.0), DomainError);
  CHECK_THROWS_AS(stats::counting(spec_of({0.5}), 1.0), DomainError);
}

TEST_CASE("counting on the analytic disk spectrum equals enumeration") {
  const auto spec = analytic::disk_eigenvalues(2.0, 200).as_spectrum();
  long long brute = 0;
  for (int k = 0; k <= 200; ++k) {
    if (specfun::reg_lower_gamma(k + 1.0, 4.0 * kPi) > 0.5) ++brute;
  }
  CHECK(stats::counting(spec, 0.5) == brute);
}

TEST_CASE("counting is nonincreasing in delta") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> values(64);
  for (auto& v : values) v = uni(rng);
  const auto spec = spec_of(values);
  long long prev = 64;
  for (double d = 0.01; d < 1.0; d += 0.01) {
    const long long c = stats::counting(spec, d);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("plunge basics") {
  CHECK(stats::plunge(spec_of({1.0, 1.0, 0.0, 0.0}), 0.2) == 0);
  CHECK(stats::plunge(spec_of({0.9, 0.5, 0.1}), 0.2) == 1);
  CHECK_THROWS_AS(stats::plunge(spec_of({0.5}), 0.6), DomainError);
  // Difference identity on random spectra.
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(40);
    for (auto& v : values) v = uni(rng);
    const auto spec = spec_of(values);
    const double d = 0.05 + 0.4 * uni(rng);
    long long brute = 0;
    for (double v : values) {
      if (v > d + 1e-12 && !(v > 1.0 - d + 1e-12)) ++brute;
    }
    CHECK(stats::plunge(spec, d) == brute);
  }
}

TEST_CASE("plunge grows linearly in the dilation radius") {
  // Expected slope ~ perimeter scaling; check stability of count/R.
  std::vector<double> slopes;
  for (double radius : {2.0, 4.0, 6.0, 8.0}) {
    const auto spec =
        analytic::disk_eigenvalues(radius,
                                   static_cast<long long>(
                                       kPi * radius * radius + 40.0 * radius +
                                       200.0))
            .as_spectrum();
    slopes.push_back(
        static_cast<double>(stats::plunge(spec, 0.01)) / radius);
  }
  for (double s : slopes) {
    CHECK(std::abs(s - slopes.back()) / slopes.back() < 0.10);
  }
}

TEST_CASE("deviation") {
  const auto dom = geometry::Domain::disk(0, 0, 2);
  const auto spec = analytic::disk_eigenvalues(2.0, 300).as_spectrum();
  const long long count = stats::counting(spec, 0.5);
  CHECK(stats::deviation(spec, dom, 0.5) ==
        doctest::Approx(std::abs(count - 4.0 * kPi)));
  // Piecewise constant in delta, jumps exactly at eigenvalues.
  const auto small = spec_of({0.8, 0.5, 0.2});
  const auto sq = geometry::Domain::rect(0, 0, 1, 1);
  CHECK(stats::deviation(small, sq, 0.3) == stats::deviation(small, sq, 0.45));
  CHECK(stats::deviation(small, sq, 0.55) != stats::deviation(small, sq, 0.45));
  const auto empty_dom = geometry::Domain::rect(0, 0, 0, 0);
  CHECK(stats::deviation(spec_of({}), empty_dom, 0.5) == 0.0);
}

TEST_CASE("a_omega") {
  CHECK(stats::a_omega(geometry::Domain::disk(0, 0, 2)) == 13);
  CHECK(stats::a_omega(geometry::Domain::rect(0, 0, 1, 1)) == 1);
  CHECK(stats::a_omega(geometry::Domain::rect(0, 0, 0, 3)) == 0);
}

TEST_CASE("counting report") {
  const auto spec = analytic::disk_eigenvalues(2.0, 300).as_spectrum();
  const auto dom = geometry::Domain::disk(0, 0, 2);
  const auto rep = stats::counting_report(spec, dom, 0.25);
  CHECK(rep.count == stats::counting(spec, 0.25));
  CHECK(rep.plunge == stats::plunge(spec, 0.25));
  CHECK(rep.a_omega == 13);
  CHECK(rep.tau == doctest::Approx(4.0));
  CHECK(rep.tau >= 2.0);
}
