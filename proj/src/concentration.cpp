#include "tflab/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "tflab/errors.hpp"
#include "tflab/quadrature.hpp"
#include "tflab/special_functions.hpp"

namespace tflab::concentration {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kI{0.0, 1.0};

struct QuadPoint {
  double x, y, w;
};

void triangulate_ear_clip(const std::vector<geometry::Vec2>& poly,
                          std::vector<std::array<geometry::Vec2, 3>>& out) {
  std::vector<geometry::Vec2> v = poly;
  auto cross = [](const geometry::Vec2& o, const geometry::Vec2& a,
                  const geometry::Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  auto inside_tri = [&](const geometry::Vec2& a, const geometry::Vec2& b,
                        const geometry::Vec2& c, const geometry::Vec2& p) {
    const double d1 = cross(a, b, p);
    const double d2 = cross(b, c, p);
    const double d3 = cross(c, a, p);
    return d1 >= -1e-14 && d2 >= -1e-14 && d3 >= -1e-14;
  };
  int guard = 0;
  while (v.size() > 3) {
    bool clipped = false;
    for (size_t i = 0; i < v.size(); ++i) {
      const auto& prev = v[(i + v.size() - 1) % v.size()];
      const auto& cur = v[i];
      const auto& next = v[(i + 1) % v.size()];
      if (cross(prev, cur, next) <= 1e-14) continue;  // reflex or collinear
      bool ear = true;
      for (size_t j = 0; j < v.size(); ++j) {
        if (j == i || j == (i + v.size() - 1) % v.size() ||
            j == (i + 1) % v.size()) {
          continue;
        }
        if (inside_tri(prev, cur, next, v[j])) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      out.push_back({prev, cur, next});
      v.erase(v.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped && ++guard > 2) {
      throw NumericalError("triangulation failed (degenerate polygon?)");
    }
  }
  if (v.size() == 3) out.push_back({v[0], v[1], v[2]});
}

std::vector<QuadPoint> domain_quadrature(const geometry::Domain& dom,
                                         const QuadratureSpec& spec,
                                         int refine) {
  const geometry::Domain shape = dom.resolved();
  std::vector<QuadPoint> pts;
  if (shape.degenerate()) return pts;
  switch (shape.kind()) {
    case geometry::Domain::Kind::Disk: {
      const int nr = spec.radial * refine;
      const int na = spec.angular * refine;
      const auto rad =
          quad::gauss_legendre_on(nr, 0.0, shape.disk_radius());
      pts.reserve(static_cast<size_t>(nr) * na);
      for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < na; ++j) {
          const double th = 2.0 * kPi * (j + 0.5) / na;
          pts.push_back({shape.disk_cx() + rad.nodes[i] * std::cos(th),
                         shape.disk_cy() + rad.nodes[i] * std::sin(th),
                         rad.weights[i] * rad.nodes[i] * 2.0 * kPi / na});
        }
      }
      return pts;
    }
    case geometry::Domain::Kind::Rect: {
      const int n = spec.tensor * refine;
      const auto gx = quad::gauss_legendre_on(
          n, shape.rect_x0(), shape.rect_x0() + shape.rect_width());
      const auto gy = quad::gauss_legendre_on(
          n, shape.rect_y0(), shape.rect_y0() + shape.rect_height());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          pts.push_back({gx.nodes[i], gy.nodes[j],
                         gx.weights[i] * gy.weights[j]});
        }
      }
      return pts;
    }
    case geometry::Domain::Kind::Polygon: {
      std::vector<std::array<geometry::Vec2, 3>> tris;
      triangulate_ear_clip(shape.vertices(), tris);
      for (const auto& t : tris) {
        // Refinement subdivides each triangle 4-fold per level.
        std::vector<std::array<geometry::Vec2, 3>> work = {t};
        for (int lev = 1; lev < refine; lev *= 2) {
          std::vector<std::array<geometry::Vec2, 3>> next;
          for (const auto& tt : work) {
            const geometry::Vec2 m01{0.5 * (tt[0].x + tt[1].x),
                                     0.5 * (tt[0].y + tt[1].y)};
            const geometry::Vec2 m12{0.5 * (tt[1].x + tt[2].x),
                                     0.5 * (tt[1].y + tt[2].y)};
            const geometry::Vec2 m20{0.5 * (tt[2].x + tt[0].x),
                                     0.5 * (tt[2].y + tt[0].y)};
            next.push_back({tt[0], m01, m20});
            next.push_back({m01, tt[1], m12});
            next.push_back({m20, m12, tt[2]});
            next.push_back({m01, m12, m20});
          }
          work = std::move(next);
        }
        for (const auto& tt : work) {
          for (const auto& p : quad::triangle_rule(
                   tt[0].x, tt[0].y, tt[1].x, tt[1].y, tt[2].x, tt[2].y,
                   spec.triangle_n)) {
            pts.push_back({p.x, p.y, p.w});
          }
        }
      }
      return pts;
    }
    default:
      throw DomainError("domain_quadrature: unexpected kind");
  }
}

// Bargmann monomial values B_n(w) = sqrt(pi^n / n!) w^n e^{-pi |w|^2 / 2},
// the closed form of V_g h_n for the Gaussian window up to diagonal phases.
void gaussian_basis_values(int basis_size, double x, double y,
                           Eigen::VectorXcd& out) {
  const double r2 = x * x + y * y;
  if (r2 == 0.0) {
    out.setZero();
    out(0) = 1.0;
    return;
  }
  const double log_r2pi = std::log(kPi * r2);
  const double theta = std::atan2(y, x);
  for (int n = 0; n < basis_size; ++n) {
    const double log_mag = 0.5 * n * log_r2pi -
                           0.5 * specfun::log_factorial(n) - 0.5 * kPi * r2;
    out(n) = std::exp(log_mag) * std::exp(kI * (n * theta));
  }
}

// V_g h_n at one phase-space point for all n at once. Substituting
// u = t - x reads the sampled window exactly on its own lattice:
// V_g h_n(x, xi) = e^{-2 pi i xi x} sum_s h_n(u_s + x) conj(g_s)
//                  e^{-2 pi i xi u_s} trap_s step.
void tabulated_basis_values(const std::vector<std::complex<double>>& g_samples,
                            double t0, double step, double x, double y,
                            Eigen::VectorXcd& out) {
  const auto S = static_cast<long>(g_samples.size());
  const int n_basis = static_cast<int>(out.size());
  out.setZero();
  const double root = std::sqrt(2.0 * kPi);
  for (long s = 0; s < S; ++s) {
    const double u = t0 + static_cast<double>(s) * step;
    const double trap = (s == 0 || s + 1 == S) ? 0.5 : 1.0;
    const std::complex<double> c = std::conj(g_samples[static_cast<size_t>(s)]) *
                                   std::exp(-2.0 * kPi * kI * (y * u)) *
                                   (trap * step);
    if (c == std::complex<double>(0.0, 0.0)) continue;
    const double t = u + x;
    const double yv = root * t;
    double h0 = std::pow(2.0, 0.25) * std::exp(-kPi * t * t);
    out(0) += h0 * c;
    if (n_basis == 1) continue;
    double h1 = yv * std::sqrt(2.0) * h0;
    out(1) += h1 * c;
    for (int n = 1; n + 1 < n_basis; ++n) {
      const double h2 = yv * std::sqrt(2.0 / (n + 1.0)) * h1 -
                        std::sqrt(n / (n + 1.0)) * h0;
      h0 = h1;
      h1 = h2;
      out(n + 1) += h1 * c;
    }
  }
  out *= std::exp(-2.0 * kPi * kI * (y * x));
}

}  // namespace

OperatorMatrix assemble_galerkin(const windows::Window& w,
                                 const geometry::Domain& dom, int basis_size,
                                 const QuadratureSpec& quad) {
  if (basis_size < 1) throw DomainError("assemble_galerkin: basis_size >= 1");
  if (basis_size > 512) {
    throw DomainError("assemble_galerkin: basis_size capped at 512");
  }

  const bool gaussian = w.kind() == windows::WindowKind::Gaussian;

  // Sampled representation for the tabulated route (Hermite and Sampled
  // windows); the step must resolve the largest |xi| the domain reaches.
  windows::Window g_eval = w;
  if (!gaussian) {
    double bx0, by0, bx1, by1;
    dom.bounding_box(bx0, by0, bx1, by1);
    const double xi_max =
        std::max({std::abs(by0), std::abs(by1), 1.0});
    if (w.kind() == windows::WindowKind::Hermite) {
      const double m = w.hermite_order();
      const double turning = std::sqrt((2.0 * m + 1.0) / (2.0 * kPi));
      const double extent = turning + 4.5;
      const double step = std::min(0.02, 0.4 / xi_max);
      const auto count = static_cast<size_t>(std::ceil(2.0 * extent / step));
      std::vector<std::complex<double>> samples(count + 1);
      for (size_t s = 0; s <= count; ++s) {
        samples[s] = windows::hermite_function(
            w.hermite_order(), -extent + static_cast<double>(s) * step);
      }
      g_eval = windows::Window::sampled(std::move(samples), -extent, step);
    } else if (std::abs(by0) > 0.5 / w.sample_step() ||
               std::abs(by1) > 0.5 / w.sample_step()) {
      throw GridError(
          "assemble_galerkin: domain frequencies exceed the window's "
          "Nyquist limit");
    }
  }

  auto assemble_at = [&](int refine) {
    const auto pts = domain_quadrature(dom, quad, refine);
    Eigen::MatrixXcd b(static_cast<long>(pts.size()), basis_size);
    Eigen::VectorXd weights(static_cast<long>(pts.size()));
    Eigen::VectorXcd row(basis_size);
    for (size_t q = 0; q < pts.size(); ++q) {
      if (gaussian) {
        gaussian_basis_values(basis_size, pts[q].x, pts[q].y, row);
      } else {
        tabulated_basis_values(g_eval.samples(), g_eval.sample_t0(),
                               g_eval.sample_step(), pts[q].x, pts[q].y, row);
      }
      b.row(static_cast<long>(q)) = row.transpose();
      weights(static_cast<long>(q)) = pts[q].w;
    }
    Eigen::MatrixXcd m = b.adjoint() * weights.asDiagonal() * b;
    return Eigen::MatrixXcd(0.5 * (m + m.adjoint()));  // clean roundoff
  };

  OperatorMatrix result;
  result.basis_size = basis_size;
  result.window = w;
  result.domain = dom;
  result.quad_tol = quad.quad_tol;
  if (dom.resolved().degenerate()) {
    result.entries = Eigen::MatrixXcd::Zero(basis_size, basis_size);
    return result;
  }
  if (quad.check_error) {
    const Eigen::MatrixXcd coarse = assemble_at(1);
    Eigen::MatrixXcd fine = assemble_at(2);
    result.est_entry_error = (fine - coarse).cwiseAbs().maxCoeff();
    if (result.est_entry_error > quad.quad_tol) {
      throw NumericalError(
          "assemble_galerkin: estimated entry error exceeds quad_tol");
    }
    result.entries = std::move(fine);
  } else {
    result.entries = assemble_at(1);
  }
  if (!result.entries.allFinite()) {
    throw NumericalError("assemble_galerkin: non-finite entries");
  }
  return result;
}

Spectrum eigen_spectrum(const OperatorMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.entries);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigen_spectrum: eigensolver did not converge");
  }
  const double scale = std::max(1e-300, m.entries.norm());
  const double residual =
      (m.entries * solver.eigenvectors() -
       solver.eigenvectors() * solver.eigenvalues().asDiagonal())
          .colwise()
          .norm()
          .maxCoeff();
  if (residual > 1e-9 * scale) {
    throw NumericalError("eigen_spectrum: residual above 1e-9 * ||M||");
  }
  std::vector<double> vals(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + m.entries.rows());
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  Spectrum out = spectrum_from_values(std::move(vals));
  out.basis_size = m.basis_size;
  return out;
}

Spectrum spectrum_from_values(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<double>());
  Spectrum s;
  s.basis_size = static_cast<int>(values.size());
  for (double& v : values) {
    const double clip = std::max(0.0, std::max(-v, v - 1.0));
    if (clip > 0.0) {
      ++s.clip_count;
      s.max_clip = std::max(s.max_clip, clip);
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  if (s.max_clip > 1e-8) {
    throw NumericalError("spectrum: eigenvalue outside [0,1] by more than 1e-8");
  }
  s.values = std::move(values);
  return s;
}

std::pair<double, double> trace_identities(const OperatorMatrix& m) {
  return {m.entries.real().trace(), m.entries.squaredNorm()};
}

double hankel_schatten(const Spectrum& spec, double p) {
  if (!(p > 0.0 && p <= 2.0)) {
    throw DomainError("hankel_schatten: requires 0 < p <= 2");
  }
  double sum = 0.0;
  for (double v : spec.values) {
    const double t = std::max(0.0, v - v * v);
    sum += std::pow(t, 0.5 * p);
  }
  return sum;
}

double hankel_schatten(const OperatorMatrix& m, double p) {
  return hankel_schatten(eigen_spectrum(m), p);
}

ComplexField twisted_convolution(const ComplexField& f,
                                 const ComplexField& g) {
  if (!f.same_grid(g)) throw GridError("twisted_convolution: grid mismatch");
  auto lattice_index = [](double origin, double step) {
    const double k = -origin / step;
    if (std::abs(k - std::round(k)) > 1e-9) {
      throw GridError("twisted_convolution: grid lattice must contain 0");
    }
    return static_cast<long>(std::llround(k));
  };
  const long i0 = lattice_index(f.x0, f.dx);
  const long j0 = lattice_index(f.y0, f.dy);
  const double cell = f.cell_area();
  const auto nx = static_cast<long>(f.nx);
  const auto ny = static_cast<long>(f.ny);
  ComplexField out(f.x0, f.y0, f.dx, f.dy, f.nx, f.ny);
  for (long i = 0; i < nx; ++i) {
    const double x = f.x(static_cast<size_t>(i));
    for (long j = 0; j < ny; ++j) {
      const double xi = f.y(static_cast<size_t>(j));
      std::complex<double> sum = 0.0;
      for (long ip = 0; ip < nx; ++ip) {
        const long gi = i - ip + i0;
        if (gi < 0 || gi >= nx) continue;
        const double xp = f.x(static_cast<size_t>(ip));
        for (long jp = 0; jp < ny; ++jp) {
          const long gj = j - jp + j0;
          if (gj < 0 || gj >= ny) continue;
          const auto fv = f.at(static_cast<size_t>(ip), static_cast<size_t>(jp));
          if (fv == std::complex<double>(0.0, 0.0)) continue;
          const double xip = f.y(static_cast<size_t>(jp));
          sum += fv * g.at(static_cast<size_t>(gi), static_cast<size_t>(gj)) *
                 std::exp(kI * kPi * (x * xip - xp * xi));
        }
      }
      out.at(static_cast<size_t>(i), static_cast<size_t>(j)) = sum * cell;
    }
  }
  return out;
}

double field_l2_norm(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& v : f.values) sum += std::norm(v);
  return std::sqrt(sum * f.cell_area());
}

}  // namespace tflab::concentration
