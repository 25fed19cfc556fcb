#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tflab/concentration.hpp"
#include "tflab/geometry.hpp"
#include "tflab/window.hpp"

namespace tflab::bounds {

/// The geometric quantities every right-hand side consumes.
struct GeometryInputs {
  double perimeter = 0.0;
  double kappa = 1.0;
  double eta = 1.0;
};

GeometryInputs geometry_inputs(const geometry::GeometrySummary& s);

/// tau = max(1/delta, 1/(1-delta)).
double tau_of(double delta);

/// First-moment bound: C_g * H(dOmega) * tau, with C_g = int |z| |V_g g|^2
/// (= K_g / 2).
double bound_simple(double c_g_first_moment, double perimeter, double delta);

/// Which constant to use in the sub-exponential deviation bound.
enum class GsConstantVariant { Plain, RemarkFull, RemarkLargeTau };

/// Sub-exponential-window deviation bound (d = 1):
/// C'_g * H * (log tau)^beta (1 + (log tau)^beta / eta) log(log tau + 1)/kappa.
/// Requires beta >= 1/2.
double bound_gs(const windows::WindowConstants& wc, const GeometryInputs& geom,
                double delta, double c_d,
                GsConstantVariant variant = GsConstantVariant::Plain);

/// Polynomial-decay deviation bound (d = 1):
/// C_d C_g^{2/(s+1)} * H * tau^{2/(s+1)} (log(C_g tau)/(kappa eta))^{(s-1)/(s+1)}.
/// Requires s >= 1 and eta in (0, 1].
double bound_poly(double moment_cg, double s, const GeometryInputs& geom,
                  double delta, double c_d);

/// Hankel Schatten-p bound (d = 1): C_d * H *
/// ||(1+|z|/eta)^{(2-p)/2p} (1+|z|)^{(1+alpha)(2-p)/2p + 1/2} V_g g||_2^p
/// / (kappa alpha)^{1-p/2}. Requires 0 < p <= 2, alpha > 0.
double bound_hankel(const windows::Window& w, const GeometryInputs& geom,
                    double p, double alpha, double c_d);

/// One evaluation of every requested right-hand side at a sweep point,
/// with admissibility flags cleared when a hypothesis fails.
struct BoundSelection {
  bool simple = true;
  bool gs = true;
  bool poly = true;
  bool hankel = true;
  bool schatten = true;
};

struct BoundReport {
  double delta = 0.0, p = 1.0, s = 1.0, alpha = 1.0, c_d = 1.0;
  GeometryInputs geometry;
  double deviation_lhs = 0.0;
  double schatten_lhs = 0.0;  // tr (T - T^2)^{p/2}, for the hankel check
  double rhs_simple = 0.0, rhs_gs = 0.0, rhs_poly = 0.0, rhs_hankel = 0.0,
         rhs_schatten = 0.0;
  bool admissible_simple = false, admissible_gs = false,
       admissible_poly = false, admissible_hankel = false,
       admissible_schatten = false;
  double schatten_tolerance = 0.0;
};

BoundReport make_bound_report(const concentration::Spectrum& spec,
                              const geometry::Domain& dom,
                              const windows::Window& w,
                              const windows::WindowConstants& wc,
                              const GeometryInputs& geom, double delta,
                              double p, double s, double alpha, double c_d,
                              const BoundSelection& which = {});

struct SchattenBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double tolerance = 0.0;
};

/// deviation <= (delta(1-delta))^{-p/2} ||H||_p^p, with the tolerance
/// inflated by the Galerkin trace defect (|Omega| - sum lambda) * tau.
SchattenBoundCheck verify_schatten_bound(const concentration::Spectrum& spec,
                            const geometry::Domain& dom, double delta,
                            double p);

struct PlungeIndices {
  long long upper_start = 0;  // lambda_k <= 1/2 for k >= upper_start
  long long lower_end = 0;    // lambda_k >= 1/2 for 1 <= k <= lower_end
};

PlungeIndices plunge_indices(double k_g, double perimeter, long long a_omega);

/// exp(-(h/(e(1+log h)))^{1/(2 beta)}) at h = |k - a_omega| / gamma (d = 1).
/// Requires h >= 1.
double envelope_gs(long long k, long long a_omega, double gamma, double beta);

/// e^{((s+1)/2)^2} h^{-(s+1)/2} (1 + log(C_g h))^{(s-1)/2}, h as above.
double envelope_poly(long long k, long long a_omega, double gamma, double s,
                     double c_g);

/// Two-term coefficient for the Gaussian window (d = 1):
/// A_1 = C_d * H(dOmega) * lambda(delta) with lambda solving
/// (1/2) erfc(sqrt(2 pi) lambda) = delta by monotone root-finding.
/// Throws DomainError for non-Gaussian windows.
double a1_term(const windows::Window& w, const geometry::Domain& dom,
               double delta, double c_d);

/// lambda(delta) alone (exposed for tests).
double a1_halfplane_level(double delta);

enum class BoundId { Simple, Gs, Poly, Hankel, A1 };

struct FitPoint {
  double radius = 0.0;
  double delta = 0.0;
  double lhs = 0.0;       // measured deviation
  double rhs_unit = 0.0;  // bound evaluated with C_d = 1
};

struct ConstantFit {
  BoundId bound_id = BoundId::Gs;
  double fitted_cd = 0.0;
  double max_ratio = 0.0;
  double max_radius = 0.0;
  double max_delta = 0.0;
  std::size_t n_points = 0;
};

/// fitted_cd makes the bound hold with equality at the max-ratio point:
/// for the gs bound C_d enters as C_d^beta, so fitted_cd = max_ratio^{1/beta};
/// for the linear-in-C_d bounds fitted_cd = max_ratio.
ConstantFit fit_constant(const std::vector<FitPoint>& points, BoundId id,
                         double beta = 0.5);

/// Per-radius spectra for the envelope fits, in log space so the deep tail
/// stays representable.
struct EnvelopeSample {
  double radius = 0.0;
  long long a_omega = 0;
  double perimeter = 0.0;
  // log lambda_k and log(1 - lambda_k); entry i holds the (i+1)-th eigenvalue.
  std::vector<double> log_lambda;
  std::vector<double> log_one_minus_lambda;
};

/// Minimal scale C* such that gamma_R = 2 C* per_R / (kappa eta) makes both
/// corollary branches hold for every sampled index; per-R gammas follow.
double fit_envelope_gamma_gs(const std::vector<EnvelopeSample>& samples,
                             double kappa, double eta, double beta);

double fit_envelope_gamma_poly(const std::vector<EnvelopeSample>& samples,
                               double kappa, double eta, double s, double c_g);

}  // namespace tflab::bounds
