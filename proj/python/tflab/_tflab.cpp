#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tflab/analytic_models.hpp"
#include "tflab/bounds.hpp"
#include "tflab/concentration.hpp"
#include "tflab/errors.hpp"
#include "tflab/experiment.hpp"
#include "tflab/geometry.hpp"
#include "tflab/special_functions.hpp"
#include "tflab/spectrum_stats.hpp"
#include "tflab/window.hpp"

namespace py = pybind11;
using namespace tflab;

namespace {

concentration::Spectrum spectrum_of(const py::array_t<double>& values) {
  const auto buf = values.request();
  const auto* data = static_cast<const double*>(buf.ptr);
  return concentration::spectrum_from_values(
      std::vector<double>(data, data + buf.size));
}

concentration::OperatorMatrix matrix_of(
    const py::array_t<std::complex<double>>& entries) {
  const auto buf = entries.request();
  if (buf.ndim != 2 || buf.shape[0] != buf.shape[1]) {
    throw DomainError("matrix must be square");
  }
  concentration::OperatorMatrix m;
  m.basis_size = static_cast<int>(buf.shape[0]);
  m.entries.resize(buf.shape[0], buf.shape[1]);
  const auto* data = static_cast<const std::complex<double>*>(buf.ptr);
  for (long i = 0; i < buf.shape[0]; ++i) {
    for (long j = 0; j < buf.shape[1]; ++j) {
      m.entries(i, j) = data[i * buf.shape[1] + j];
    }
  }
  return m;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  // Explicit shape vector: the braced single-element and (count, ptr)
  // constructors produce stride-0 arrays under pybind11 2.9.
  py::array_t<double> out(
      std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  auto r = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < r.shape(0); ++i) {
    r(i) = v[static_cast<size_t>(i)];
  }
  return out;
}

ComplexField field_of(const py::array_t<std::complex<double>>& values,
                      std::pair<double, double> origin,
                      std::pair<double, double> steps) {
  const auto buf = values.request();
  if (buf.ndim != 2) throw DomainError("field must be 2-D");
  ComplexField f(origin.first, origin.second, steps.first, steps.second,
                 static_cast<size_t>(buf.shape[0]),
                 static_cast<size_t>(buf.shape[1]));
  const auto* data = static_cast<const std::complex<double>*>(buf.ptr);
  std::copy(data, data + buf.size, f.values.begin());
  return f;
}

}  // namespace

PYBIND11_MODULE(_tflab, m) {
  m.doc() = "Spectra and deviation bounds of time-frequency concentration "
            "operators";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<HypothesisError>(m, "HypothesisError");
  py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<GridError>(m, "GridError");
  py::register_exception<DomainError>(m, "DomainValidationError");

  // Special functions.
  m.def("reg_lower_gamma", &specfun::reg_lower_gamma, py::arg("a"),
        py::arg("x"), "Regularized lower incomplete gamma P(a, x)");
  m.def("erfc", &specfun::erfc, py::arg("x"));
  m.def("log_factorial", &specfun::log_factorial, py::arg("n"));

  // Windows.
  py::class_<windows::Window>(m, "Window")
      .def_static("gaussian", &windows::Window::gaussian)
      .def_static("hermite", &windows::Window::hermite, py::arg("order"))
      .def_static("sampled_from_csv", &windows::Window::sampled_from_csv,
                  py::arg("path"))
      .def_property_readonly("closed_form", &windows::Window::closed_form)
      .def_property_readonly("l2_norm", &windows::Window::l2_norm);
  m.def("hermite_function", &windows::hermite_function, py::arg("n"),
        py::arg("t"));
  m.def(
      "ambiguity",
      [](const windows::Window& w, double x, double xi) {
        return windows::ambiguity(w, x, xi);
      },
      py::arg("window"), py::arg("x"), py::arg("xi"));
  m.def("moment_constant", &windows::moment_constant, py::arg("window"),
        py::arg("s"));
  m.def("k_g_constant", &windows::k_g_constant, py::arg("window"));

  py::class_<windows::WindowConstants>(m, "WindowConstants")
      .def_readonly("gs_C", &windows::WindowConstants::gs_C)
      .def_readonly("gs_A", &windows::WindowConstants::gs_A)
      .def_readonly("gs_beta", &windows::WindowConstants::gs_beta)
      .def_readonly("moment_s", &windows::WindowConstants::moment_s)
      .def_readonly("moment_Cg", &windows::WindowConstants::moment_Cg)
      .def_readonly("K_g", &windows::WindowConstants::K_g);
  m.def("make_window_constants", &windows::make_window_constants,
        py::arg("window"), py::arg("beta") = 0.5, py::arg("s") = 1.0,
        py::arg("n_max") = 2000000000LL);

  // Geometry.
  py::class_<geometry::Domain>(m, "Domain")
      .def_static("disk", &geometry::Domain::disk, py::arg("cx"),
                  py::arg("cy"), py::arg("radius"))
      .def_static("rect", &geometry::Domain::rect, py::arg("x0"),
                  py::arg("y0"), py::arg("width"), py::arg("height"))
      .def_static(
          "polygon",
          [](const std::vector<std::pair<double, double>>& pts) {
            std::vector<geometry::Vec2> v;
            v.reserve(pts.size());
            for (const auto& [x, y] : pts) v.push_back({x, y});
            return geometry::Domain::polygon(std::move(v));
          },
          py::arg("vertices"))
      .def_static("polygon_from_csv", &geometry::Domain::polygon_from_csv,
                  py::arg("path"))
      .def_property_readonly("degenerate", &geometry::Domain::degenerate)
      .def("contains", &geometry::Domain::contains, py::arg("x"), py::arg("y"));
  m.def("measure", &geometry::measure, py::arg("domain"));
  m.def("perimeter", &geometry::perimeter, py::arg("domain"));
  m.def("dilate", &geometry::dilate, py::arg("domain"), py::arg("factor"));
  m.def("kappa", &geometry::kappa, py::arg("domain"), py::arg("eta"),
        py::arg("n_boundary") = 256, py::arg("n_radii") = 64);
  m.def("level_set_measure", &geometry::level_set_measure, py::arg("domain"),
        py::arg("r"));

  // Concentration operator.
  m.def(
      "assemble_galerkin",
      [](const windows::Window& w, const geometry::Domain& dom, int n,
         double quad_tol, bool check_error) {
        concentration::QuadratureSpec spec;
        spec.quad_tol = quad_tol;
        spec.check_error = check_error;
        const auto m_ = concentration::assemble_galerkin(w, dom, n, spec);
        py::array_t<std::complex<double>> out({n, n});
        auto* data = static_cast<std::complex<double>*>(out.request().ptr);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) data[i * n + j] = m_.entries(i, j);
        }
        return out;
      },
      py::arg("window"), py::arg("domain"), py::arg("basis_size"),
      py::arg("quad_tol") = 1e-8, py::arg("check_error") = true);
  m.def(
      "eigen_spectrum",
      [](const py::array_t<std::complex<double>>& entries) {
        return to_array(concentration::eigen_spectrum(matrix_of(entries)).values);
      },
      py::arg("matrix"));
  m.def(
      "trace_identities",
      [](const py::array_t<std::complex<double>>& entries) {
        return concentration::trace_identities(matrix_of(entries));
      },
      py::arg("matrix"));
  m.def(
      "hankel_schatten",
      [](const py::array_t<double>& values, double p) {
        return concentration::hankel_schatten(spectrum_of(values), p);
      },
      py::arg("values"), py::arg("p"));
  m.def(
      "twisted_convolution",
      [](const py::array_t<std::complex<double>>& f,
         const py::array_t<std::complex<double>>& g,
         std::pair<double, double> origin, std::pair<double, double> steps) {
        const auto out = concentration::twisted_convolution(
            field_of(f, origin, steps), field_of(g, origin, steps));
        py::array_t<std::complex<double>> arr(
            {static_cast<py::ssize_t>(out.nx), static_cast<py::ssize_t>(out.ny)});
        std::copy(out.values.begin(), out.values.end(),
                  static_cast<std::complex<double>*>(arr.request().ptr));
        return arr;
      },
      py::arg("f"), py::arg("g"), py::arg("origin"), py::arg("steps"));

  // Spectrum statistics.
  m.def(
      "counting",
      [](const py::array_t<double>& values, double delta) {
        return spectrum_stats::counting(spectrum_of(values), delta);
      },
      py::arg("values"), py::arg("delta"));
  m.def(
      "plunge",
      [](const py::array_t<double>& values, double delta) {
        return spectrum_stats::plunge(spectrum_of(values), delta);
      },
      py::arg("values"), py::arg("delta"));
  m.def(
      "deviation",
      [](const py::array_t<double>& values, const geometry::Domain& dom,
         double delta) {
        return spectrum_stats::deviation(spectrum_of(values), dom, delta);
      },
      py::arg("values"), py::arg("domain"), py::arg("delta"));
  m.def("a_omega", &spectrum_stats::a_omega, py::arg("domain"));

  // Analytic models.
  m.def(
      "disk_eigenvalues",
      [](double radius, long long k_max) {
        return to_array(analytic::disk_eigenvalues(radius, k_max).values);
      },
      py::arg("radius"), py::arg("k_max"));
  m.def(
      "polydisk_eigenvalues",
      [](double radius, int dimension, long long k_max) {
        return to_array(
            analytic::polydisk_eigenvalues(radius, dimension, k_max).values);
      },
      py::arg("radius"), py::arg("dimension"), py::arg("k_max"));
  m.def("log_disk_eigenvalue", &analytic::log_disk_eigenvalue,
        py::arg("radius"), py::arg("k"));
  m.def("counting_analytic", &analytic::counting_analytic, py::arg("radius"),
        py::arg("log_delta"));
  m.def(
      "gamma_tail_upper",
      [](double radius, long long k) {
        const auto check = analytic::gamma_tail_sandwich(radius, k);
        return std::make_pair(check.upper, check.holds_upper);
      },
      py::arg("radius"), py::arg("k"));
  m.def(
      "fit_sharpness_a",
      [](const std::vector<double>& radii, const std::vector<double>& deltas,
         double sqrt_log_min) {
        return analytic::fit_sharpness_a(radii, deltas, sqrt_log_min).fitted_c;
      },
      py::arg("radius_grid"), py::arg("delta_grid"),
      py::arg("sqrt_log_min") = 2.0);
  m.def(
      "fit_sharpness_b",
      [](const std::vector<double>& radii, const std::vector<double>& deltas,
         double rho) {
        return analytic::fit_sharpness_b(radii, deltas, rho).fitted_c;
      },
      py::arg("radius_grid"), py::arg("delta_grid"), py::arg("rho") = 0.5);

  // Bounds.
  m.def("bound_simple", &bounds::bound_simple, py::arg("c_g_first_moment"),
        py::arg("perimeter"), py::arg("delta"));
  m.def(
      "bound_gs",
      [](const windows::WindowConstants& wc, double perimeter, double kappa,
         double eta, double delta, double c_d) {
        return bounds::bound_gs(wc, {perimeter, kappa, eta}, delta, c_d);
      },
      py::arg("constants"), py::arg("perimeter"), py::arg("kappa"),
      py::arg("eta"), py::arg("delta"), py::arg("c_d") = 1.0);
  m.def(
      "bound_poly",
      [](double moment_cg, double s, double perimeter, double kappa,
         double eta, double delta, double c_d) {
        return bounds::bound_poly(moment_cg, s, {perimeter, kappa, eta}, delta,
                                  c_d);
      },
      py::arg("moment_cg"), py::arg("s"), py::arg("perimeter"),
      py::arg("kappa"), py::arg("eta"), py::arg("delta"), py::arg("c_d") = 1.0);
  m.def(
      "bound_hankel",
      [](const windows::Window& w, double perimeter, double kappa, double eta,
         double p, double alpha, double c_d) {
        return bounds::bound_hankel(w, {perimeter, kappa, eta}, p, alpha, c_d);
      },
      py::arg("window"), py::arg("perimeter"), py::arg("kappa"),
      py::arg("eta"), py::arg("p"), py::arg("alpha"), py::arg("c_d") = 1.0);
  m.def(
      "verify_schatten_bound",
      [](const py::array_t<double>& values, const geometry::Domain& dom,
         double delta, double p) {
        const auto check =
            bounds::verify_schatten_bound(spectrum_of(values), dom, delta, p);
        return std::make_tuple(check.lhs, check.rhs, check.holds);
      },
      py::arg("values"), py::arg("domain"), py::arg("delta"), py::arg("p"));
  m.def(
      "plunge_indices",
      [](double k_g, double perimeter, long long a_omega) {
        const auto idx = bounds::plunge_indices(k_g, perimeter, a_omega);
        return std::make_pair(idx.upper_start, idx.lower_end);
      },
      py::arg("k_g"), py::arg("perimeter"), py::arg("a_omega"));
  m.def("envelope_gs", &bounds::envelope_gs, py::arg("k"), py::arg("a_omega"),
        py::arg("gamma"), py::arg("beta"));
  m.def("envelope_poly", &bounds::envelope_poly, py::arg("k"),
        py::arg("a_omega"), py::arg("gamma"), py::arg("s"), py::arg("c_g"));
  m.def("a1_term", &bounds::a1_term, py::arg("window"), py::arg("domain"),
        py::arg("delta"), py::arg("c_d") = 1.0);
  m.def("a1_halfplane_level", &bounds::a1_halfplane_level, py::arg("delta"));

  // Experiment runner (the CLI's engine).
  m.def("run_config", &cli::run_config_text, py::arg("json_text"),
        py::arg("out_dir"), py::arg("jobs") = 1,
        py::arg("expected_command") = "");
  m.def("run_config_file", &cli::run_config_file, py::arg("path"),
        py::arg("out_dir"), py::arg("jobs") = 1,
        py::arg("expected_command") = "");
}
