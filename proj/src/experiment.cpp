#include "tflab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tflab/analytic_models.hpp"
#include "tflab/bounds.hpp"
#include "tflab/concentration.hpp"
#include "tflab/errors.hpp"
#include "tflab/geometry.hpp"
#include "tflab/io.hpp"
#include "tflab/spectrum_stats.hpp"
#include "tflab/window.hpp"

namespace tflab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

const json& require_key(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("config: missing key '" + key + "'");
  return j.at(key);
}

double require_number(const json& j, const std::string& key) {
  const json& v = require_key(j, key);
  if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> require_grid(const json& j, const std::string& key) {
  const json& v = require_key(j, key);
  if (!v.is_array() || v.empty()) {
    throw ConfigError("config: '" + key + "' must be a nonempty array");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("config: '" + key + "' has a non-number");
    out.push_back(e.get<double>());
  }
  return out;
}

template <typename Fn>
void at_sweep_point(const std::string& label, Fn&& fn) {
  auto tag = [&label](const std::exception& e) {
    return std::string(e.what()) + " [at " + label + "]";
  };
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e));
  } catch (const HypothesisError& e) {
    throw HypothesisError(tag(e));
  } catch (const GridError& e) {
    throw GridError(tag(e));
  } catch (const DomainError& e) {
    throw DomainError(tag(e));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e));
  }
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min<int>(jobs, static_cast<int>(n));
  pool.reserve(static_cast<size_t>(k));
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

windows::Window window_from_json(const json& j) {
  const std::string kind = require_key(j, "kind").get<std::string>();
  if (kind == "gaussian") return windows::Window::gaussian();
  if (kind == "hermite") {
    return windows::Window::hermite(
        static_cast<int>(require_number(j, "order")));
  }
  if (kind == "sampled") {
    return windows::Window::sampled_from_csv(
        require_key(j, "csv").get<std::string>());
  }
  throw ConfigError("config: unknown window kind '" + kind + "'");
}

geometry::Domain domain_from_json(const json& j) {
  const std::string kind = require_key(j, "kind").get<std::string>();
  geometry::Domain dom = geometry::Domain::disk(0, 0, 1);
  if (kind == "disk") {
    const auto& c = require_key(j, "center");
    dom = geometry::Domain::disk(c.at(0).get<double>(), c.at(1).get<double>(),
                                 require_number(j, "radius"));
  } else if (kind == "rect") {
    const auto& c = require_key(j, "corner");
    const auto& w = require_key(j, "widths");
    dom = geometry::Domain::rect(c.at(0).get<double>(), c.at(1).get<double>(),
                                 w.at(0).get<double>(), w.at(1).get<double>());
  } else if (kind == "polygon") {
    if (j.contains("csv")) {
      dom = geometry::Domain::polygon_from_csv(j.at("csv").get<std::string>());
    } else {
      std::vector<geometry::Vec2> verts;
      for (const auto& v : require_key(j, "vertices")) {
        verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      }
      dom = geometry::Domain::polygon(std::move(verts));
    }
  } else {
    throw ConfigError("config: unknown domain kind '" + kind + "'");
  }
  if (j.contains("dilate")) {
    dom = geometry::dilate(dom, j.at("dilate").get<double>());
  }
  return dom;
}

json window_meta(const json& cfg) { return require_key(cfg, "window"); }

concentration::QuadratureSpec quad_from_json(const json& cfg) {
  concentration::QuadratureSpec q;
  if (!cfg.contains("quadrature")) return q;
  const json& j = cfg.at("quadrature");
  if (j.contains("radial")) q.radial = j.at("radial").get<int>();
  if (j.contains("angular")) q.angular = j.at("angular").get<int>();
  if (j.contains("tensor")) q.tensor = j.at("tensor").get<int>();
  if (j.contains("triangle_n")) q.triangle_n = j.at("triangle_n").get<int>();
  if (j.contains("tol")) q.quad_tol = j.at("tol").get<double>();
  if (j.contains("check_error")) q.check_error = j.at("check_error").get<bool>();
  return q;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  return (fs::path(out_dir) / name).string();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

long long default_analytic_kmax(double radius) {
  const double x = kPi * radius * radius;
  return static_cast<long long>(std::ceil(x + 24.0 * std::sqrt(x + 1.0) + 64.0));
}

// Spectrum per the config's spectrum_source (galerkin | analytic | csv).
concentration::Spectrum spectrum_from_source(const json& cfg,
                                             const windows::Window& w,
                                             const geometry::Domain& dom) {
  const json& src = require_key(cfg, "spectrum_source");
  const std::string method = require_key(src, "method").get<std::string>();
  if (method == "galerkin") {
    const int n = static_cast<int>(require_number(cfg, "basis_size"));
    if (n < 1 || n > 512) {
      throw ConfigError("config: basis_size must be in [1, 512]");
    }
    const auto m = concentration::assemble_galerkin(w, dom, n,
                                                    quad_from_json(cfg));
    return concentration::eigen_spectrum(m);
  }
  if (method == "analytic") {
    const geometry::Domain shape = dom.resolved();
    if (shape.kind() != geometry::Domain::Kind::Disk ||
        std::abs(shape.disk_cx()) > 1e-12 || std::abs(shape.disk_cy()) > 1e-12) {
      throw ConfigError(
          "config: analytic spectra exist only for origin-centered disks");
    }
    if (w.kind() != windows::WindowKind::Gaussian) {
      throw ConfigError("config: analytic spectra require the gaussian window");
    }
    const long long k_max = src.contains("k_max")
                                ? src.at("k_max").get<long long>()
                                : default_analytic_kmax(shape.disk_radius());
    return analytic::disk_eigenvalues(shape.disk_radius(), k_max).as_spectrum();
  }
  if (method == "csv") {
    return concentration::spectrum_from_values(
        io::read_eigenvalue_csv(require_key(src, "csv").get<std::string>()));
  }
  throw ConfigError("config: unknown spectrum_source method '" + method + "'");
}

// ---------------------------------------------------------------- spectrum
void run_spectrum(const json& cfg, const std::string& out_dir) {
  const std::string prefix =
      cfg.value("output_prefix", std::string("spectrum"));
  const auto w = window_from_json(require_key(cfg, "window"));
  const auto dom = domain_from_json(require_key(cfg, "domain"));
  json meta;
  meta["command"] = "spectrum";
  meta["window"] = window_meta(cfg);
  meta["domain"] = require_key(cfg, "domain");

  const json& src = require_key(cfg, "spectrum_source");
  const std::string method = require_key(src, "method").get<std::string>();
  if (method == "galerkin") {
    const int n = static_cast<int>(require_number(cfg, "basis_size"));
    if (n < 1 || n > 512) {
      throw ConfigError("config: basis_size must be in [1, 512]");
    }
    const auto quad = quad_from_json(cfg);
    const auto m = concentration::assemble_galerkin(w, dom, n, quad);
    const auto spec = concentration::eigen_spectrum(m);
    io::write_eigenvalue_csv(out_path(out_dir, prefix + "_eigenvalues.csv"),
                             spec.values);
    if (cfg.value("emit_matrix", false)) {
      io::write_matrix_csv(out_path(out_dir, prefix + "_matrix.csv"),
                           m.entries);
    }
    meta["method"] = "galerkin";
    meta["basis_size"] = n;
    meta["quad_tol"] = m.quad_tol;
    meta["est_entry_error"] = m.est_entry_error;
    meta["clip_count"] = spec.clip_count;
    meta["max_clip"] = spec.max_clip;
  } else {
    const auto spec = spectrum_from_source(cfg, w, dom);
    io::write_eigenvalue_csv(out_path(out_dir, prefix + "_eigenvalues.csv"),
                             spec.values);
    meta["method"] = method;
    meta["n_values"] = spec.values.size();
  }
  write_json(out_path(out_dir, prefix + "_meta.json"), meta);
}

// ---------------------------------------------------------------- geometry
void run_geometry(const json& cfg, const std::string& out_dir) {
  const std::string prefix =
      cfg.value("output_prefix", std::string("geometry"));
  const auto dom = domain_from_json(require_key(cfg, "domain"));
  const double eta = require_number(cfg, "eta");
  const auto radii = require_grid(cfg, "level_radii");
  const int nb = cfg.value("n_boundary", 256);
  const int nr = cfg.value("n_radii", 64);
  const auto summary = geometry::geometry_summary(dom, eta, radii, nb, nr);
  const auto kest = geometry::kappa_estimate(dom, eta, nb, nr);

  json j;
  j["command"] = "geometry";
  j["domain"] = require_key(cfg, "domain");
  j["measure"] = summary.measure;
  j["perimeter"] = summary.perimeter;
  j["eta"] = summary.eta;
  j["kappa"] = summary.kappa;
  j["kappa_coarse"] = kest.coarse_value;
  j["n_boundary"] = nb;
  j["n_radii"] = nr;
  write_json(out_path(out_dir, prefix + "_geometry.json"), j);

  io::CsvWriter csv(out_path(out_dir, prefix + "_levelsets.csv"),
                    {"r", "h1_measure"});
  for (const auto& [r, h1] : summary.level_set_table) {
    csv.row({io::format_double(r), io::format_double(h1)});
  }
}

// ------------------------------------------------------------------ verify
void run_verify(const json& cfg, const std::string& out_dir, int jobs) {
  const std::string prefix = cfg.value("output_prefix", std::string("verify"));
  const auto w = window_from_json(require_key(cfg, "window"));
  const auto dom = domain_from_json(require_key(cfg, "domain"));
  const auto deltas = require_grid(cfg, "delta_grid");
  const auto ps = require_grid(cfg, "p_grid");
  const double eta = cfg.value("eta", 1.0);
  const double c_d = cfg.value("c_d", 1.0);
  const double beta = cfg.value("beta", 0.5);
  const double s = cfg.value("s", 1.0);
  const double alpha = cfg.value("alpha", 1.0);
  std::vector<std::string> which;
  for (const auto& b : require_key(cfg, "bounds")) {
    which.push_back(b.get<std::string>());
  }

  const auto spec = spectrum_from_source(cfg, w, dom);
  bounds::GeometryInputs geom{geometry::perimeter(dom),
                              geometry::kappa(dom, eta), eta};

  // Window constants, computed once and only where needed.
  const bool need_simple = std::count(which.begin(), which.end(), "simple");
  const bool need_gs = std::count(which.begin(), which.end(), "gs");
  const bool need_poly = std::count(which.begin(), which.end(), "poly");
  windows::WindowConstants wc;
  wc.gs_beta = beta;
  if (need_gs) {
    wc = windows::make_window_constants(w, beta, s);
  } else {
    if (need_simple) wc.K_g = windows::k_g_constant(w);
    if (need_poly) {
      wc.moment_s = s;
      wc.moment_Cg = windows::moment_constant(w, s);
    }
  }

  struct RowBundle {
    std::vector<std::string> counting;
    std::vector<std::vector<std::string>> bound_rows;
    int failures = 0;
    int admissible = 0;
  };
  std::vector<RowBundle> results(deltas.size() * ps.size());

  bounds::BoundSelection selection;
  selection.simple = need_simple;
  selection.gs = need_gs;
  selection.poly = need_poly;
  selection.hankel = std::count(which.begin(), which.end(), "hankel") > 0;
  selection.schatten = std::count(which.begin(), which.end(), "schatten") > 0;
  for (const auto& name : which) {
    if (name != "schatten" && name != "simple" && name != "gs" &&
        name != "poly" && name != "hankel") {
      throw ConfigError("config: unknown bound '" + name + "'");
    }
  }

  parallel_for(results.size(), jobs, [&](size_t idx) {
    const double delta = deltas[idx / ps.size()];
    const double p = ps[idx % ps.size()];
    at_sweep_point(
        "delta=" + io::format_double(delta) + ", p=" + io::format_double(p),
        [&] {
    RowBundle& out = results[idx];
    const auto counting = spectrum_stats::counting_report(spec, dom, delta);
    out.counting = {io::format_double(counting.delta),
                    std::to_string(counting.count),
                    io::format_double(counting.deviation),
                    std::to_string(counting.plunge),
                    std::to_string(counting.a_omega),
                    io::format_double(counting.tau)};
    const auto report = bounds::make_bound_report(spec, dom, w, wc, geom,
                                                  delta, p, s, alpha, c_d,
                                                  selection);
    auto emit = [&](const std::string& name, double lhs, double rhs,
                    bool admissible, double tol) {
      const bool holds = !admissible || lhs <= rhs + tol;
      out.bound_rows.push_back(
          {name, io::format_double(delta), io::format_double(p),
           io::format_double(s), io::format_double(alpha),
           io::format_double(eta), io::format_double(c_d),
           io::format_double(lhs), io::format_double(rhs),
           admissible ? "1" : "0", holds ? "1" : "0"});
      if (admissible) {
        ++out.admissible;
        if (!holds) ++out.failures;
      }
    };
    for (const auto& name : which) {
      if (name == "schatten") {
        emit(name, report.deviation_lhs, report.rhs_schatten, true,
             report.schatten_tolerance);
      } else if (name == "simple") {
        emit(name, report.deviation_lhs, report.rhs_simple,
             report.admissible_simple, 1e-9);
      } else if (name == "gs") {
        emit(name, report.deviation_lhs, report.rhs_gs, report.admissible_gs,
             1e-9);
      } else if (name == "poly") {
        emit(name, report.deviation_lhs, report.rhs_poly,
             report.admissible_poly, 1e-9);
      } else if (name == "hankel") {
        emit(name, report.schatten_lhs, report.rhs_hankel,
             report.admissible_hankel, 1e-9);
      }
    }
        });
  });

  io::CsvWriter counting_csv(
      out_path(out_dir, prefix + "_counting.csv"),
      {"delta", "count", "deviation", "plunge", "a_omega", "tau"});
  // One counting row per delta (identical across p).
  for (size_t i = 0; i < deltas.size(); ++i) {
    counting_csv.row(results[i * ps.size()].counting);
  }
  io::CsvWriter bounds_csv(
      out_path(out_dir, prefix + "_bounds.csv"),
      {"bound", "delta", "p", "s", "alpha", "eta", "c_d", "lhs", "rhs",
       "admissible", "holds"});
  int failures = 0, admissible = 0;
  for (const auto& r : results) {
    for (const auto& row : r.bound_rows) bounds_csv.row(row);
    failures += r.failures;
    admissible += r.admissible;
  }
  json summary;
  summary["command"] = "verify";
  summary["rows"] = results.size() * which.size();
  summary["admissible"] = admissible;
  summary["failures"] = failures;
  write_json(out_path(out_dir, prefix + "_summary.json"), summary);
}

// --------------------------------------------------------------- sharpness
void run_sharpness(const json& cfg, const std::string& out_dir) {
  const std::string prefix =
      cfg.value("output_prefix", std::string("sharpness"));
  const json& sh = require_key(cfg, "sharpness");
  const std::string regime = require_key(sh, "regime").get<std::string>();
  const auto radii = require_grid(cfg, "radius_grid");
  const auto deltas = require_grid(cfg, "delta_grid");
  analytic::SharpnessFit fit;
  if (regime == "A") {
    fit = analytic::fit_sharpness_a(radii, deltas, sh.value("sqrt_log_min", 2.0));
  } else if (regime == "B") {
    fit = analytic::fit_sharpness_b(radii, deltas, sh.value("rho", 0.5));
  } else {
    throw ConfigError("config: sharpness regime must be 'A' or 'B'");
  }
  json j;
  j["command"] = "sharpness";
  j["regime"] = regime;
  j["fitted_c"] = fit.fitted_c;
  j["n_points"] = fit.points.size();
  write_json(out_path(out_dir, prefix + "_sharpness.json"), j);
  io::CsvWriter csv(out_path(out_dir, prefix + "_sharpness_points.csv"),
                    {"radius", "delta", "ratio"});
  for (const auto& p : fit.points) {
    csv.row({io::format_double(p.radius), io::format_double(p.delta),
             io::format_double(p.ratio)});
  }
}

// --------------------------------------------------------------------- fit
void run_fit(const json& cfg, const std::string& out_dir, int jobs) {
  const std::string prefix = cfg.value("output_prefix", std::string("fit"));
  const json& fj = require_key(cfg, "fit");
  const std::string target = require_key(fj, "target").get<std::string>();
  const auto radii = require_grid(cfg, "radius_grid");
  const double eta = cfg.value("eta", 1.0);
  const double beta = cfg.value("beta", 0.5);
  const double s = cfg.value("s", 3.0);

  json j;
  j["command"] = "fit";
  j["target"] = target;

  if (target == "envelope_gs" || target == "envelope_poly") {
    const long long k_cap = fj.value("k_cap", 400LL);
    std::vector<bounds::EnvelopeSample> samples(radii.size());
    parallel_for(radii.size(), jobs, [&](size_t i) {
      const double radius = radii[i];
      bounds::EnvelopeSample smp;
      smp.radius = radius;
      smp.a_omega = static_cast<long long>(std::ceil(kPi * radius * radius));
      smp.perimeter = 2.0 * kPi * radius;
      for (long long k = 1; k <= k_cap; ++k) {
        smp.log_lambda.push_back(analytic::log_disk_eigenvalue(radius, k - 1));
        smp.log_one_minus_lambda.push_back(
            analytic::log_one_minus_disk_eigenvalue(radius, k - 1));
      }
      samples[i] = std::move(smp);
    });
    const double kappa = 1.0;  // origin disks, spec convention
    double scale = 0.0;
    double c_g = 0.0;
    if (target == "envelope_gs") {
      scale = bounds::fit_envelope_gamma_gs(samples, kappa, eta, beta);
    } else {
      c_g = windows::moment_constant(windows::Window::gaussian(), s);
      scale =
          bounds::fit_envelope_gamma_poly(samples, kappa, eta, s, c_g);
    }
    j["fitted_scale"] = scale;
    j["kappa"] = kappa;
    j["eta"] = eta;
    if (target == "envelope_poly") {
      j["s"] = s;
      j["moment_cg"] = c_g;
    } else {
      j["beta"] = beta;
    }
    json gammas = json::array();
    for (const auto& smp : samples) {
      const double gamma =
          target == "envelope_gs"
              ? 2.0 * scale * smp.perimeter / (kappa * eta)
              : scale * smp.perimeter /
                    std::pow(kappa * eta, (s - 1.0) / (s + 1.0));
      gammas.push_back({{"radius", smp.radius}, {"gamma", gamma}});
    }
    j["gammas"] = gammas;
    write_json(out_path(out_dir, prefix + "_fit.json"), j);
    return;
  }

  // Deviation-style fits over (R, delta)-like grids on analytic spectra.
  const auto deltas = require_grid(cfg, "delta_grid");
  const double alpha = cfg.value("alpha", 1.0);
  windows::WindowConstants wc;
  const auto gaussian = windows::Window::gaussian();
  bounds::BoundId id;
  if (target == "gs") {
    id = bounds::BoundId::Gs;
    wc = windows::make_window_constants(gaussian, beta, s);
  } else if (target == "poly") {
    id = bounds::BoundId::Poly;
    wc.moment_s = s;
    wc.moment_Cg = windows::moment_constant(gaussian, s);
  } else if (target == "simple") {
    id = bounds::BoundId::Simple;
    wc.K_g = windows::k_g_constant(gaussian);
  } else if (target == "hankel") {
    id = bounds::BoundId::Hankel;
  } else if (target == "a1") {
    id = bounds::BoundId::A1;
  } else {
    throw ConfigError("config: unknown fit target '" + target + "'");
  }

  auto sweep = [&](const std::vector<double>& r_grid,
                   const std::vector<double>& d_grid) {
    std::vector<bounds::FitPoint> pts(r_grid.size() * d_grid.size());
    parallel_for(pts.size(), jobs, [&](size_t idx) {
      const double radius = r_grid[idx / d_grid.size()];
      const double second = d_grid[idx % d_grid.size()];
      at_sweep_point("radius=" + io::format_double(radius) + ", " +
                         io::format_double(second),
                     [&] {
      const auto dom = geometry::Domain::disk(0, 0, radius);
      bounds::GeometryInputs geom{2.0 * kPi * radius,
                                  geometry::kappa(dom, eta), eta};
      bounds::FitPoint pt;
      pt.radius = radius;
      pt.delta = second;
      if (id == bounds::BoundId::Hankel) {
        // second = p; lhs is the directly computed Schatten norm.
        const auto spec =
            analytic::disk_eigenvalues(radius, default_analytic_kmax(radius))
                .as_spectrum();
        pt.lhs = concentration::hankel_schatten(spec, second);
        pt.rhs_unit = bounds::bound_hankel(gaussian, geom, second, alpha, 1.0);
      } else {
        const double count = static_cast<double>(
            analytic::counting_analytic(radius, std::log(second)));
        pt.lhs = std::abs(count - kPi * radius * radius);
        if (id == bounds::BoundId::Gs) {
          pt.rhs_unit = bounds::bound_gs(wc, geom, second, 1.0);
        } else if (id == bounds::BoundId::Poly) {
          pt.rhs_unit = bounds::bound_poly(wc.moment_Cg, s, geom, second, 1.0);
        } else if (id == bounds::BoundId::Simple) {
          pt.rhs_unit =
              bounds::bound_simple(0.5 * wc.K_g, geom.perimeter, second);
        } else {  // A1
          pt.rhs_unit = bounds::a1_term(gaussian, dom, second, 1.0);
        }
      }
      pts[idx] = pt;
      });
    });
    return pts;
  };

  const auto points = sweep(radii, deltas);
  const auto fit = bounds::fit_constant(points, id, beta);
  j["fitted_cd"] = fit.fitted_cd;
  j["max_ratio"] = fit.max_ratio;
  j["max_radius"] = fit.max_radius;
  j["max_delta"] = fit.max_delta;
  j["n_points"] = fit.n_points;

  if (fj.contains("holdout")) {
    const auto h_r = require_grid(fj.at("holdout"), "radius_grid");
    const auto h_d = require_grid(fj.at("holdout"), "delta_grid");
    const auto hold = sweep(h_r, h_d);
    double worst = 0.0;
    for (const auto& p : hold) {
      const double bound_cd =
          id == bounds::BoundId::Gs
              ? std::pow(fit.fitted_cd, beta) * p.rhs_unit
              : fit.fitted_cd * p.rhs_unit;
      worst = std::max(worst, p.lhs / bound_cd);
    }
    j["holdout_max_ratio"] = worst;
    j["holdout_points"] = hold.size();
  }
  write_json(out_path(out_dir, prefix + "_fit.json"), j);

  io::CsvWriter csv(out_path(out_dir, prefix + "_fit_points.csv"),
                    {"radius", id == bounds::BoundId::Hankel ? "p" : "delta",
                     "lhs", "rhs_unit"});
  for (const auto& p : points) {
    csv.row({io::format_double(p.radius), io::format_double(p.delta),
             io::format_double(p.lhs), io::format_double(p.rhs_unit)});
  }
}

void dispatch(const json& cfg, const std::string& out_dir, int jobs) {
  const std::string command = require_key(cfg, "command").get<std::string>();
  fs::create_directories(out_dir);
  if (command == "spectrum") {
    run_spectrum(cfg, out_dir);
  } else if (command == "geometry") {
    run_geometry(cfg, out_dir);
  } else if (command == "verify") {
    run_verify(cfg, out_dir, jobs);
  } else if (command == "sharpness") {
    run_sharpness(cfg, out_dir);
  } else if (command == "fit") {
    run_fit(cfg, out_dir, jobs);
  } else {
    throw ConfigError("config: unknown command '" + command + "'");
  }
}

}  // namespace

void run_config_text(const std::string& json_text, const std::string& out_dir,
                     int jobs, const std::string& expected_command) {
  json cfg;
  try {
    cfg = json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!expected_command.empty()) {
    const std::string cmd = require_key(cfg, "command").get<std::string>();
    if (cmd != expected_command) {
      throw ConfigError("config: command '" + cmd +
                        "' does not match the subcommand '" +
                        expected_command + "'");
    }
  }
  dispatch(cfg, out_dir, jobs);
}

void run_config_file(const std::string& config_path,
                     const std::string& out_dir, int jobs,
                     const std::string& expected_command) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot open config: " + config_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  run_config_text(text, out_dir, jobs, expected_command);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const HypothesisError*>(&e)) return 4;
  return 3;
}

}  // namespace tflab::cli
