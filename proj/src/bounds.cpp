#include "tflab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tflab/errors.hpp"
#include "tflab/special_functions.hpp"
#include "tflab/spectrum_stats.hpp"

namespace tflab::bounds {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("bound: requires 0 < delta < 1");
  }
}

}  // namespace

GeometryInputs geometry_inputs(const geometry::GeometrySummary& s) {
  return {s.perimeter, s.kappa, s.eta};
}

double tau_of(double delta) {
  check_delta(delta);
  return std::max(1.0 / delta, 1.0 / (1.0 - delta));
}

double bound_simple(double c_g_first_moment, double perimeter, double delta) {
  return c_g_first_moment * perimeter * tau_of(delta);
}

double bound_gs(const windows::WindowConstants& wc, const GeometryInputs& geom,
                double delta, double c_d, GsConstantVariant variant) {
  if (!(wc.gs_beta >= 0.5)) {
    throw HypothesisError("bound_gs: requires beta >= 1/2");
  }
  const double beta = wc.gs_beta;
  const double log_tau = std::log(tau_of(delta));
  double c_prime = 0.0;
  switch (variant) {
    case GsConstantVariant::Plain:
      c_prime = std::sqrt(wc.gs_C) * std::pow(wc.gs_A, 5.0) *
                std::pow(c_d, beta);
      break;
    case GsConstantVariant::RemarkFull:
      c_prime = c_d * std::sqrt(wc.gs_C) * std::pow(wc.gs_A, 5.0) *
                std::exp(3.0 * beta) * std::pow(5.0, 5.0 * beta) *
                std::pow(2.0, 3.0 * beta) *
                std::pow(std::log(2.0), -2.0 * beta);
      break;
    case GsConstantVariant::RemarkLargeTau:
      c_prime = c_d * wc.gs_A * wc.gs_A * std::exp(beta) *
                std::pow(2.0, 2.0 * beta);
      break;
  }
  return c_prime * geom.perimeter * std::pow(log_tau, beta) *
         (1.0 + std::pow(log_tau, beta) / geom.eta) *
         std::log(log_tau + 1.0) / geom.kappa;
}

double bound_poly(double moment_cg, double s, const GeometryInputs& geom,
                  double delta, double c_d) {
  if (!(s >= 1.0)) throw HypothesisError("bound_poly: requires s >= 1");
  if (!(geom.eta > 0.0 && geom.eta <= 1.0)) {
    throw HypothesisError("bound_poly: requires eta in (0, 1]");
  }
  const double tau = tau_of(delta);
  const double expo = 2.0 / (s + 1.0);  // 2d/(2d+s-1), d = 1
  return c_d * std::pow(moment_cg, expo) * geom.perimeter *
         std::pow(tau, expo) *
         std::pow(std::log(moment_cg * tau) / (geom.kappa * geom.eta),
                  (s - 1.0) / (s + 1.0));
}

double bound_hankel(const windows::Window& w, const GeometryInputs& geom,
                    double p, double alpha, double c_d) {
  if (!(p > 0.0 && p <= 2.0)) {
    throw DomainError("bound_hankel: requires 0 < p <= 2");
  }
  if (!(alpha > 0.0)) throw DomainError("bound_hankel: requires alpha > 0");
  const double a_exp = (2.0 - p) / p;                      // 2*(2d-1)(2-p)/2p
  const double b_exp = (1.0 + alpha) * (2.0 - p) / p + 1.0;  // on |V|^2
  const double eta = geom.eta;
  const double norm_sq = windows::weighted_ambiguity_sq_integral(
      w,
      [a_exp, b_exp, eta](double r) {
        return std::pow(1.0 + r / eta, a_exp) * std::pow(1.0 + r, b_exp);
      },
      10.0 + 0.5 * (a_exp + b_exp));
  return c_d * geom.perimeter * std::pow(norm_sq, 0.5 * p) /
         std::pow(geom.kappa * alpha, 1.0 - 0.5 * p);
}

SchattenBoundCheck verify_schatten_bound(const concentration::Spectrum& spec,
                            const geometry::Domain& dom, double delta,
                            double p) {
  check_delta(delta);
  if (!(p > 0.0 && p <= 2.0)) {
    throw DomainError("verify_schatten_bound: requires 0 < p <= 2");
  }
  SchattenBoundCheck out;
  out.lhs = spectrum_stats::deviation(spec, dom, delta);
  out.rhs = std::pow(delta * (1.0 - delta), -0.5 * p) *
            concentration::hankel_schatten(spec, p);
  // The finite section only misses eigenvalue mass bounded by the trace
  // defect; a defect D can shift the count by at most D * tau.
  double trace = 0.0;
  for (double v : spec.values) trace += v;
  const double defect = std::max(0.0, geometry::measure(dom) - trace);
  out.tolerance = 1e-9 + defect * tau_of(delta);
  out.holds = out.lhs <= out.rhs + out.tolerance;
  return out;
}

BoundReport make_bound_report(const concentration::Spectrum& spec,
                              const geometry::Domain& dom,
                              const windows::Window& w,
                              const windows::WindowConstants& wc,
                              const GeometryInputs& geom, double delta,
                              double p, double s, double alpha, double c_d,
                              const BoundSelection& which) {
  BoundReport r;
  r.delta = delta;
  r.p = p;
  r.s = s;
  r.alpha = alpha;
  r.c_d = c_d;
  r.geometry = geom;
  r.deviation_lhs = spectrum_stats::deviation(spec, dom, delta);
  if (which.simple) {
    r.rhs_simple = c_d * bound_simple(0.5 * wc.K_g, geom.perimeter, delta);
    r.admissible_simple = true;
  }
  if (which.gs) {
    try {
      r.rhs_gs = bound_gs(wc, geom, delta, c_d);
      r.admissible_gs = true;
    } catch (const HypothesisError&) {
      r.rhs_gs = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (which.poly) {
    try {
      r.rhs_poly = bound_poly(wc.moment_Cg, s, geom, delta, c_d);
      r.admissible_poly = true;
    } catch (const HypothesisError&) {
      r.rhs_poly = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (which.hankel) {
    r.schatten_lhs = concentration::hankel_schatten(spec, p);
    r.rhs_hankel = bound_hankel(w, geom, p, alpha, c_d);
    r.admissible_hankel = true;
  }
  if (which.schatten) {
    const auto check = verify_schatten_bound(spec, dom, delta, p);
    r.rhs_schatten = check.rhs;
    r.schatten_tolerance = check.tolerance;
    r.admissible_schatten = true;
  }
  return r;
}

PlungeIndices plunge_indices(double k_g, double perimeter, long long a_omega) {
  if (k_g < 0.0 || perimeter < 0.0 || a_omega < 0) {
    throw DomainError("plunge_indices: inputs must be nonnegative");
  }
  PlungeIndices out;
  out.upper_start = static_cast<long long>(
      std::ceil(static_cast<double>(a_omega) + k_g * perimeter));
  out.lower_end = static_cast<long long>(
      std::floor(static_cast<double>(a_omega) - k_g * perimeter));
  return out;
}

namespace {

double envelope_h(long long k, long long a_omega, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("envelope: gamma must be > 0");
  const double h =
      std::abs(static_cast<double>(k - a_omega)) / gamma;
  if (h < 1.0) {
    throw DomainError("envelope: index inside the gamma window (h < 1)");
  }
  return h;
}

}  // namespace

double envelope_gs(long long k, long long a_omega, double gamma, double beta) {
  const double h = envelope_h(k, a_omega, gamma);
  return std::exp(
      -std::pow(h / (std::exp(1.0) * (1.0 + std::log(h))), 1.0 / (2.0 * beta)));
}

double envelope_poly(long long k, long long a_omega, double gamma, double s,
                     double c_g) {
  if (!(s >= 1.0)) throw HypothesisError("envelope_poly: requires s >= 1");
  const double h = envelope_h(k, a_omega, gamma);
  const double q = 0.5 * (s + 1.0);  // (2d+s-1)/2d at d = 1
  return std::exp(q * q) * std::pow(h, -q) *
         std::pow(1.0 + std::log(c_g * h), 0.5 * (s - 1.0));
}

double a1_halfplane_level(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw DomainError("a1_term: requires delta in (0, 1/2)");
  }
  // Monotone bisection on f(l) = erfc(sqrt(2 pi) l)/2 - delta, f decreasing.
  double lo = 0.0, hi = 1.0;
  const double root = std::sqrt(2.0 * kPi);
  while (0.5 * specfun::erfc(root * hi) > delta) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * specfun::erfc(root * mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

double a1_term(const windows::Window& w, const geometry::Domain& dom,
               double delta, double c_d) {
  if (w.kind() != windows::WindowKind::Gaussian) {
    throw DomainError("a1_term: only the Gaussian window has the closed-form "
                      "Wigner half-plane integral");
  }
  const auto kind = dom.resolved().kind();
  if (kind != geometry::Domain::Kind::Disk &&
      kind != geometry::Domain::Kind::Rect &&
      kind != geometry::Domain::Kind::Polygon) {
    throw DomainError("a1_term: domain without a.e.-defined normals");
  }
  return c_d * geometry::perimeter(dom) * a1_halfplane_level(delta);
}

ConstantFit fit_constant(const std::vector<FitPoint>& points, BoundId id,
                         double beta) {
  if (points.empty()) throw DomainError("fit_constant: empty input");
  ConstantFit fit;
  fit.bound_id = id;
  fit.n_points = points.size();
  for (const auto& p : points) {
    if (!(p.rhs_unit > 0.0)) {
      throw NumericalError("fit_constant: nonpositive unit bound");
    }
    const double ratio = p.lhs / p.rhs_unit;
    if (ratio > fit.max_ratio) {
      fit.max_ratio = ratio;
      fit.max_radius = p.radius;
      fit.max_delta = p.delta;
    }
  }
  fit.fitted_cd = id == BoundId::Gs ? std::pow(fit.max_ratio, 1.0 / beta)
                                    : fit.max_ratio;
  return fit;
}

namespace {

// Inverse of g(h) = h / (1 + log h) on [1, inf); g is increasing there.
double invert_h_over_log(double c) {
  if (c < 1.0) return std::numeric_limits<double>::quiet_NaN();
  double lo = 1.0, hi = 2.0;
  auto g = [](double h) { return h / (1.0 + std::log(h)); };
  while (g(hi) < c) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < c ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// gamma needed so that value <= envelope at this index, given the envelope's
// admissible h solved from log-envelope(h) >= log_value.
double gamma_needed_gs(double distance, double log_value, double beta) {
  if (!std::isfinite(log_value)) return 0.0;  // value 0: any gamma works
  const double c = std::exp(1.0) * std::pow(-log_value, 2.0 * beta);
  const double h_max = invert_h_over_log(c);
  if (std::isnan(h_max)) return distance * (1.0 + 1e-12);  // must exempt
  return distance / h_max;
}

double gamma_needed_poly(double distance, double log_value, double s,
                         double c_g) {
  if (!std::isfinite(log_value)) return 0.0;
  const double q = 0.5 * (s + 1.0);
  auto log_env = [&](double h) {
    return q * q - q * std::log(h) +
           0.5 * (s - 1.0) * std::log(1.0 + std::log(c_g * h));
  };
  if (log_env(1.0) < log_value) return distance * (1.0 + 1e-12);
  double lo = 1.0, hi = 2.0;
  while (log_env(hi) >= log_value && hi < 1e12) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_env(mid) >= log_value ? lo : hi) = mid;
  }
  return distance / lo;
}

template <typename GammaNeeded>
double fit_envelope_scale(const std::vector<EnvelopeSample>& samples,
                          double scale_denominator_kappa_eta,
                          const GammaNeeded& gamma_needed,
                          double per_factor) {
  if (samples.empty()) throw DomainError("fit_envelope: empty input");
  double scale = 0.0;
  for (const auto& s : samples) {
    double gamma_r = 0.0;
    const auto n = static_cast<long long>(s.log_lambda.size());
    for (long long idx = 0; idx < n; ++idx) {
      const long long k = idx + 1;  // 1-based eigenvalue index
      if (k > s.a_omega) {
        gamma_r = std::max(gamma_r, gamma_needed(
            static_cast<double>(k - s.a_omega), s.log_lambda[idx]));
      } else if (k < s.a_omega) {
        gamma_r = std::max(gamma_r, gamma_needed(
            static_cast<double>(s.a_omega - k), s.log_one_minus_lambda[idx]));
      }
    }
    // gamma_R = scale * per_factor * per_R / (kappa eta); invert for scale.
    scale = std::max(scale, gamma_r * scale_denominator_kappa_eta /
                                (per_factor * s.perimeter));
  }
  return scale;
}

}  // namespace

double fit_envelope_gamma_gs(const std::vector<EnvelopeSample>& samples,
                             double kappa, double eta, double beta) {
  return fit_envelope_scale(
      samples, kappa * eta,
      [beta](double dist, double log_v) {
        return gamma_needed_gs(dist, log_v, beta);
      },
      2.0);
}

double fit_envelope_gamma_poly(const std::vector<EnvelopeSample>& samples,
                               double kappa, double eta, double s, double c_g) {
  const double denom = std::pow(kappa * eta, (s - 1.0) / (s + 1.0));
  return fit_envelope_scale(
      samples, denom,
      [s, c_g](double dist, double log_v) {
        return gamma_needed_poly(dist, log_v, s, c_g);
      },
      1.0);
}

}  // namespace tflab::bounds
