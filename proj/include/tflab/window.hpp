#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tflab/grid.hpp"
#include "tflab/special_functions.hpp"

namespace tflab::windows {

enum class WindowKind { Gaussian, Hermite, Sampled };

/// A normalized L2 window g. Gaussian is g(t) = 2^{1/4} e^{-pi t^2};
/// Hermite(m) is the m-th Hermite function of the same scaling (Hermite(0)
/// is the Gaussian); Sampled carries samples on a uniform t-grid and is
/// normalized on construction.
class Window {
 public:
  static Window gaussian();
  static Window hermite(int m);
  static Window sampled(std::vector<std::complex<double>> samples, double t0,
                        double step);
  /// CSV with a mandatory header row and two columns: t, value.
  static Window sampled_from_csv(const std::string& path);

  WindowKind kind() const { return kind_; }
  int hermite_order() const { return hermite_m_; }
  double l2_norm() const { return l2_norm_; }
  bool closed_form() const { return kind_ != WindowKind::Sampled; }

  const std::vector<std::complex<double>>& samples() const { return samples_; }
  double sample_t0() const { return t0_; }
  double sample_step() const { return step_; }

  /// g(t); linear interpolation between samples for Sampled windows.
  std::complex<double> value(double t) const;

 private:
  Window() = default;
  WindowKind kind_ = WindowKind::Gaussian;
  int hermite_m_ = 0;
  double l2_norm_ = 1.0;
  std::vector<std::complex<double>> samples_;
  double t0_ = 0.0;
  double step_ = 1.0;
};

/// Orthonormal Hermite functions h_n matching the Gaussian h_0 above,
/// by the stable three-term recurrence.
double hermite_function(int n, double t);

/// Ambiguity function V_g g(z), z = (x, xi).
/// Closed forms for Gaussian/Hermite; trapezoidal quadrature in t for
/// Sampled windows (throws GridError past the declared Nyquist limit).
std::complex<double> ambiguity(const Window& w, double x, double xi);

/// log |V_g g| at radius r, for closed-form windows only. Stays finite
/// where the magnitude itself underflows; used by the far-field fit.
double ambiguity_log_abs_radial(const Window& w, double r);

/// Sampled |V_g g| values on a grid, either radial or Cartesian.
struct AmbiguityTable {
  enum class Kind { Radial, Cartesian };
  Kind kind = Kind::Radial;
  bool closed_form = false;
  // Radial tables: radii (sorted, starting at 0) and log|V| per radius.
  std::vector<double> radii;
  std::vector<double> log_abs;
  // Cartesian tables: complex samples of V_g g.
  ComplexField field;

  double max_radius() const;
};

/// Radial table for closed-form windows: dense on [0, dense_extent],
/// geometric out to far_extent (log-magnitudes stay representable).
AmbiguityTable build_radial_table(const Window& w, double dense_extent = 8.0,
                                  double dense_step = 0.05,
                                  double far_extent = 4096.0,
                                  int far_points = 256);

/// Cartesian table on [-extent, extent]^2 with n points per axis
/// (works for every window kind; the only option for Sampled windows).
AmbiguityTable build_cartesian_table(const Window& w, double extent, int n);

/// Result of certifying |V_g g(z)| <= C A^n n!^beta (1+|z|)^{-n} on a grid
/// for all n <= n_max. log_C is authoritative; C may overflow to +inf.
struct GelfandShilovFit {
  double C = 0.0;
  double log_C = 0.0;
  double A = 1.0;
  double beta = 0.5;
  long long n_max = 0;
  double objective = 0.0;  // C * A^5, the minimized product
};

struct GsFitOptions {
  double beta = 0.5;
  double a_min = 1.0;
  double a_max = 16.0;
  int a_points = 32;       // logarithmic scan
  double log_c_cap = 18.420680743952367;  // log(1e8)
};

/// Scans A, computes the minimal certified C per A (in log space), and
/// returns the pair minimizing C*A^5. Throws HypothesisError when no pair
/// below the caps certifies the grid (beta too small for this window).
GelfandShilovFit gs_fit(const Window& w, long long n_max,
                        const AmbiguityTable& grid, const GsFitOptions& opt);

/// int weight(|z|) |V_g g(z)|^2 dz over the plane: adaptive radial
/// quadrature for closed-form windows, Cartesian table summation with a
/// tail-convergence check for sampled ones.
double weighted_ambiguity_sq_integral(
    const Window& w, const std::function<double(double)>& weight,
    double r_cut_hint);

/// C_g(s) = int (1+|z|)^s |V_g g(z)|^2 dz, absolute tolerance 1e-8.
double moment_constant(const Window& w, double s);

/// Same integral with its declared absolute error estimate attached.
specfun::ScalarResult moment_constant_result(const Window& w, double s);

/// K_g = 2 int |z| |V_g g(z)|^2 dz.
double k_g_constant(const Window& w);

/// The window constants every bound consumes.
struct WindowConstants {
  double gs_C = 0.0;
  double gs_A = 1.0;
  double gs_beta = 0.5;
  double moment_s = 1.0;
  double moment_Cg = 0.0;
  double K_g = 0.0;
};

WindowConstants make_window_constants(const Window& w, double beta = 0.5,
                                      double s = 1.0,
                                      long long n_max = 2000000000LL);

}  // namespace tflab::windows
