#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "tflab/geometry.hpp"
#include "tflab/grid.hpp"
#include "tflab/window.hpp"

namespace tflab::concentration {

struct QuadratureSpec {
  int radial = 64;      // Gauss-Legendre order for disk radii
  int angular = 128;    // uniform angular points for disks
  int tensor = 64;      // per-axis Gauss-Legendre order for rectangles
  int triangle_n = 11;  // per-triangle collapsed Gauss order (degree 10)
  double quad_tol = 1e-8;
  bool check_error = true;  // double the orders once and compare
};

/// N x N Hermitian Galerkin matrix of the concentration operator in the
/// Hermite basis: M_{mn} = int_Omega V_g h_n conj(V_g h_m) dz.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  int basis_size = 0;
  windows::Window window = windows::Window::gaussian();
  geometry::Domain domain = geometry::Domain::disk(0.0, 0.0, 1.0);
  double quad_tol = 0.0;
  double est_entry_error = 0.0;
};

struct Spectrum {
  std::vector<double> values;  // decreasing, clipped to [0, 1]
  int clip_count = 0;
  double max_clip = 0.0;
  int basis_size = 0;
};

OperatorMatrix assemble_galerkin(const windows::Window& w,
                                 const geometry::Domain& dom, int basis_size,
                                 const QuadratureSpec& quad = {});

Spectrum eigen_spectrum(const OperatorMatrix& m);

/// Spectrum from raw eigenvalues (CSV re-ingest, analytic models).
Spectrum spectrum_from_values(std::vector<double> values);

/// (trace, sum of squared entry moduli) = (tr M, ||M||_F^2).
std::pair<double, double> trace_identities(const OperatorMatrix& m);

/// sum_k (lambda_k - lambda_k^2)^{p/2}; negative roundoff clamps to zero.
double hankel_schatten(const Spectrum& spec, double p);
double hankel_schatten(const OperatorMatrix& m, double p);

/// Twisted convolution of two sampled fields on a common origin-aligned
/// grid, with the phase e^{i pi (x xi' - x' xi)}.
ComplexField twisted_convolution(const ComplexField& f, const ComplexField& g);

/// sqrt(sum |v|^2 * cell_area).
double field_l2_norm(const ComplexField& f);

}  // namespace tflab::concentration
