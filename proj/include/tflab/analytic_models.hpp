#pragma once

#include <vector>

#include "tflab/concentration.hpp"

namespace tflab::analytic {

/// Closed-form spectra of the Gaussian-window concentration operator on a
/// disk B_R(0) (lambda_k = P(k+1, pi R^2), k = 0, 1, ...) and on the
/// polydisk B_R(0)^d (sorted d-fold products).
struct AnalyticSpectrum {
  enum class Model { Disk, Polydisk };
  Model model = Model::Disk;
  double radius = 1.0;
  int dimension = 1;
  std::vector<double> values;  // decreasing
  long long k_max = 0;

  concentration::Spectrum as_spectrum() const;
};

AnalyticSpectrum disk_eigenvalues(double radius, long long k_max);

AnalyticSpectrum polydisk_eigenvalues(double radius, int dimension,
                                      long long k_max_per_axis,
                                      long long index_cap = 1LL << 22);

/// log lambda_k, finite far into the tail (Poisson sum, compensated):
/// usable down to lambda ~ 1e-300.
double log_disk_eigenvalue(double radius, long long k);

/// log(1 - lambda_k), accurate when lambda_k is close to 1.
double log_one_minus_disk_eigenvalue(double radius, long long k);

/// #{k : lambda_k > delta} evaluated in log space (delta may be 1e-60).
long long counting_analytic(double radius, double log_delta);

struct GammaTailCheck {
  double upper = 0.0;     // e^{-(k+1-pi R^2)^2 / (2(k+1))}
  bool holds_upper = false;
};

/// Upper tail envelope check; requires k+1 >= pi R^2.
GammaTailCheck gamma_tail_sandwich(double radius, long long k,
                                   bool check_upper_only = true);

/// Fitted lower-tail constants a(M), b(M): least-squares slope b of
/// -log lambda against u = (k+1-pi R^2)^2/(k+1), then a = min lambda e^{b u}
/// over the window pi R^2 <= k+1 <= M pi R^2 (holds there by construction).
struct GammaTailLowerFit {
  double a = 0.0;
  double b = 0.0;
  long long n_points = 0;
};

GammaTailLowerFit fit_gamma_tail_lower(double radius, double m_factor);

struct SharpnessPoint {
  double radius = 0.0;
  double delta = 0.0;
  double ratio = 0.0;  // slack at this grid point
};

struct SharpnessFit {
  char regime = 'A';
  double fitted_c = 0.0;
  std::vector<SharpnessPoint> points;
};

/// Regime A: #{lambda_k > delta} >= pi R^2 + c sqrt(log 1/delta) R on the
/// window sqrt_log_min <= sqrt(log 1/delta) <= R. fitted_c = min ratio.
SharpnessFit fit_sharpness_a(const std::vector<double>& radius_grid,
                             const std::vector<double>& delta_grid,
                             double sqrt_log_min = 2.0);

/// Regime B: (#{lambda_k > delta} - pi R^2) * loglog(1/delta)/log(1/delta)
/// on the window R >= 1, R^2 <= rho * log(1/delta)/loglog(1/delta).
SharpnessFit fit_sharpness_b(const std::vector<double>& radius_grid,
                             const std::vector<double>& delta_grid,
                             double rho = 0.5);

}  // namespace tflab::analytic
