#include "tflab/window.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "tflab/errors.hpp"
#include "tflab/quadrature.hpp"

namespace tflab::windows {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kI{0.0, 1.0};

// log|L_m(u)| and sign, with rescaling so large u and m never overflow.
struct LogAbsSign {
  double log_abs;
  double sign;
};

LogAbsSign laguerre_log_abs(int m, double u) {
  if (m == 0) return {0.0, 1.0};
  double prev = 1.0;        // L_0
  double cur = 1.0 - u;     // L_1
  double scale = 0.0;
  for (int k = 1; k < m; ++k) {
    double next = ((2.0 * k + 1.0 - u) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e150) {
      prev /= 1e150;
      cur /= 1e150;
      scale += std::log(1e150);
    }
  }
  if (cur == 0.0) return {-std::numeric_limits<double>::infinity(), 1.0};
  return {std::log(std::abs(cur)) + scale, cur > 0.0 ? 1.0 : -1.0};
}

double laguerre(int m, double u) {
  const auto [log_abs, sign] = laguerre_log_abs(m, u);
  return sign * std::exp(log_abs);
}

}  // namespace

Window Window::gaussian() {
  Window w;
  w.kind_ = WindowKind::Gaussian;
  return w;
}

Window Window::hermite(int m) {
  if (m < 0) throw DomainError("Window::hermite: order must be >= 0");
  Window w;
  w.kind_ = m == 0 ? WindowKind::Gaussian : WindowKind::Hermite;
  w.hermite_m_ = m;
  return w;
}

Window Window::sampled(std::vector<std::complex<double>> samples, double t0,
                       double step) {
  if (samples.size() < 4) throw GridError("Window::sampled: too few samples");
  if (!(step > 0.0)) throw GridError("Window::sampled: step must be > 0");
  Window w;
  w.kind_ = WindowKind::Sampled;
  w.t0_ = t0;
  w.step_ = step;
  w.samples_ = std::move(samples);
  // Trapezoid L2 normalization; V_g g(0) = 1 then holds by construction.
  double nrm2 = 0.0;
  for (size_t i = 0; i < w.samples_.size(); ++i) {
    const double weight = (i == 0 || i + 1 == w.samples_.size()) ? 0.5 : 1.0;
    nrm2 += weight * std::norm(w.samples_[i]);
  }
  nrm2 *= step;
  if (!(nrm2 > 0.0)) throw GridError("Window::sampled: zero L2 norm");
  const double inv = 1.0 / std::sqrt(nrm2);
  for (auto& s : w.samples_) s *= inv;
  w.l2_norm_ = 1.0;
  return w;
}

Window Window::sampled_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open window CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("window CSV is empty: " + path);
  }
  // Header row is mandatory; reject a file that starts with numbers.
  {
    std::istringstream probe(line);
    double v;
    if (probe >> v) {
      throw ConfigError("window CSV must start with a header row: " + path);
    }
  }
  std::vector<double> ts;
  std::vector<std::complex<double>> vals;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t, v;
    if (!(row >> t >> v)) {
      throw ConfigError("window CSV: bad row " + std::to_string(line_no) +
                        " in " + path);
    }
    ts.push_back(t);
    vals.emplace_back(v, 0.0);
  }
  if (ts.size() < 4) throw ConfigError("window CSV: too few rows in " + path);
  const double step = ts[1] - ts[0];
  for (size_t i = 1; i < ts.size(); ++i) {
    if (std::abs(ts[i] - ts[i - 1] - step) > 1e-9 * std::max(1.0, step)) {
      throw ConfigError("window CSV: t column is not uniformly spaced");
    }
  }
  return sampled(std::move(vals), ts.front(), step);
}

std::complex<double> Window::value(double t) const {
  switch (kind_) {
    case WindowKind::Gaussian:
      return std::pow(2.0, 0.25) * std::exp(-kPi * t * t);
    case WindowKind::Hermite:
      return hermite_function(hermite_m_, t);
    case WindowKind::Sampled: {
      const double pos = (t - t0_) / step_;
      if (pos < 0.0 || pos > static_cast<double>(samples_.size() - 1)) {
        return 0.0;
      }
      const auto i = static_cast<size_t>(pos);
      if (i + 1 >= samples_.size()) return samples_.back();
      const double frac = pos - static_cast<double>(i);
      return samples_[i] * (1.0 - frac) + samples_[i + 1] * frac;
    }
  }
  return 0.0;
}

double hermite_function(int n, double t) {
  const double y = std::sqrt(2.0 * kPi) * t;
  double h0 = std::pow(2.0, 0.25) * std::exp(-kPi * t * t);
  if (n == 0) return h0;
  double h1 = y * std::sqrt(2.0) * h0;
  for (int k = 1; k < n; ++k) {
    const double h2 =
        y * std::sqrt(2.0 / (k + 1.0)) * h1 - std::sqrt(k / (k + 1.0)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

std::complex<double> ambiguity(const Window& w, double x, double xi) {
  const double r2 = x * x + xi * xi;
  switch (w.kind()) {
    case WindowKind::Gaussian:
      return std::exp(-kI * kPi * x * xi) * std::exp(-0.5 * kPi * r2);
    case WindowKind::Hermite:
      return std::exp(-kI * kPi * x * xi) *
             (laguerre(w.hermite_order(), kPi * r2) * std::exp(-0.5 * kPi * r2));
    case WindowKind::Sampled: {
      const double step = w.sample_step();
      if (std::abs(xi) > 0.5 / step) {
        throw GridError(
            "ambiguity: requested |xi| exceeds the sample-grid Nyquist limit");
      }
      const auto& s = w.samples();
      std::complex<double> sum = 0.0;
      for (size_t i = 0; i < s.size(); ++i) {
        const double t = w.sample_t0() + static_cast<double>(i) * step;
        const double weight = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
        sum += weight * s[i] * std::conj(w.value(t - x)) *
               std::exp(-2.0 * kPi * kI * xi * t);
      }
      return sum * step;
    }
  }
  return 0.0;
}

double ambiguity_log_abs_radial(const Window& w, double r) {
  switch (w.kind()) {
    case WindowKind::Gaussian:
      return -0.5 * kPi * r * r;
    case WindowKind::Hermite:
      return laguerre_log_abs(w.hermite_order(), kPi * r * r).log_abs -
             0.5 * kPi * r * r;
    case WindowKind::Sampled:
      throw GridError(
          "ambiguity_log_abs_radial: only available for closed-form windows");
  }
  return 0.0;
}

double AmbiguityTable::max_radius() const {
  if (kind == Kind::Radial) return radii.empty() ? 0.0 : radii.back();
  const double x1 = std::max(std::abs(field.x0),
                             std::abs(field.x(field.nx ? field.nx - 1 : 0)));
  const double y1 = std::max(std::abs(field.y0),
                             std::abs(field.y(field.ny ? field.ny - 1 : 0)));
  return std::hypot(x1, y1);
}

AmbiguityTable build_radial_table(const Window& w, double dense_extent,
                                  double dense_step, double far_extent,
                                  int far_points) {
  if (!w.closed_form()) {
    throw GridError("build_radial_table: sampled windows need a Cartesian table");
  }
  AmbiguityTable table;
  table.kind = AmbiguityTable::Kind::Radial;
  table.closed_form = true;
  for (double r = 0.0; r <= dense_extent + 1e-12; r += dense_step) {
    table.radii.push_back(r);
  }
  const double ratio = std::pow(far_extent / dense_extent,
                                1.0 / static_cast<double>(far_points));
  double r = dense_extent;
  for (int i = 0; i < far_points; ++i) {
    r *= ratio;
    table.radii.push_back(r);
  }
  table.log_abs.reserve(table.radii.size());
  for (double rr : table.radii) {
    const double la = ambiguity_log_abs_radial(w, rr);
    if (la > 1e-9) throw GridError("ambiguity table: |V_g g| > 1");
    table.log_abs.push_back(la);
  }
  if (std::abs(table.log_abs.front()) > 1e-10) {
    throw GridError("ambiguity table: V_g g(0) != 1");
  }
  return table;
}

AmbiguityTable build_cartesian_table(const Window& w, double extent, int n) {
  if (n < 3) throw GridError("build_cartesian_table: need n >= 3");
  if (n % 2 == 0) ++n;  // keep the origin on the grid
  AmbiguityTable table;
  table.kind = AmbiguityTable::Kind::Cartesian;
  table.closed_form = w.closed_form();

  if (w.kind() == WindowKind::Sampled) {
    // The x-grid snaps to the sample lattice so that g(t - x) is read
    // exactly; the xi-row of each x-slice comes from one trapezoid pass.
    const double h = w.sample_step();
    if (extent > 0.5 / h) {
      throw GridError(
          "build_cartesian_table: extent exceeds the sample-grid Nyquist "
          "limit");
    }
    const double dx =
        std::max(1.0, std::round(2.0 * extent / (n - 1) / h)) * h;
    const auto half = static_cast<long>(std::floor(extent / dx));
    if (half < 1) throw GridError("build_cartesian_table: extent below step");
    const long nx = 2 * half + 1;
    const long nxi = n;
    const double dxi = 2.0 * extent / static_cast<double>(n - 1);
    table.field = ComplexField(-dx * static_cast<double>(half), -extent, dx,
                               dxi, static_cast<size_t>(nx),
                               static_cast<size_t>(nxi));
    const auto& s = w.samples();
    const auto count = static_cast<long>(s.size());
    std::vector<std::complex<double>> product(s.size());
    for (long i = 0; i < nx; ++i) {
      const long shift = -half + i;  // x = shift * dx, dx a multiple of h
      const long k = shift * static_cast<long>(std::llround(dx / h));
      for (long t = 0; t < count; ++t) {
        const long ts = t - k;
        const std::complex<double> g_shift =
            (ts >= 0 && ts < count) ? s[static_cast<size_t>(ts)] : 0.0;
        const double trap = (t == 0 || t + 1 == count) ? 0.5 : 1.0;
        product[static_cast<size_t>(t)] =
            s[static_cast<size_t>(t)] * std::conj(g_shift) * (trap * h);
      }
      for (long j = 0; j < nxi; ++j) {
        const double xi = table.field.y(static_cast<size_t>(j));
        std::complex<double> sum = 0.0;
        for (long t = 0; t < count; ++t) {
          const double tt =
              w.sample_t0() + static_cast<double>(t) * h;
          sum += product[static_cast<size_t>(t)] *
                 std::exp(-2.0 * kPi * kI * (xi * tt));
        }
        if (std::abs(sum) > 1.0 + 1e-6) {
          throw GridError("ambiguity table: |V_g g| > 1 (grid underresolved?)");
        }
        table.field.at(static_cast<size_t>(i), static_cast<size_t>(j)) = sum;
      }
    }
    return table;
  }

  const double step = 2.0 * extent / static_cast<double>(n - 1);
  table.field = ComplexField(-extent, -extent, step, step,
                             static_cast<size_t>(n), static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = table.field.x(i);
      const double xi = table.field.y(j);
      const auto v = ambiguity(w, x, xi);
      if (std::abs(v) > 1.0 + 1e-9) {
        throw GridError("ambiguity table: |V_g g| > 1");
      }
      table.field.at(i, j) = v;
    }
  }
  return table;
}

namespace {

// Constraint samples (r, log|V|) extracted from either table kind.
std::vector<std::pair<double, double>> constraint_samples(
    const AmbiguityTable& grid) {
  std::vector<std::pair<double, double>> out;
  if (grid.kind == AmbiguityTable::Kind::Radial) {
    out.reserve(grid.radii.size());
    for (size_t i = 0; i < grid.radii.size(); ++i) {
      out.emplace_back(grid.radii[i], grid.log_abs[i]);
    }
  } else {
    out.reserve(grid.field.values.size());
    for (size_t i = 0; i < grid.field.nx; ++i) {
      for (size_t j = 0; j < grid.field.ny; ++j) {
        const double mag = std::abs(grid.field.at(i, j));
        if (mag <= 0.0) continue;  // no constraint
        out.emplace_back(std::hypot(grid.field.x(i), grid.field.y(j)),
                         std::log(mag));
      }
    }
  }
  return out;
}

// max over 0 <= n <= n_max of n*L - beta*lgamma(n+1), L = log((1+r)/A).
// The sequence is concave in n, so the max sits next to the real maximizer.
double envelope_gap(double L, double beta, long long n_max) {
  auto phi = [&](long long n) {
    return static_cast<double>(n) * L -
           beta * std::lgamma(static_cast<double>(n) + 1.0);
  };
  double best = phi(0);
  long long center = 0;
  if (L > 0.0) {
    const double guess = std::exp(L / beta);
    center = guess > static_cast<double>(n_max)
                 ? n_max
                 : static_cast<long long>(guess);
  }
  for (long long n = std::max(0LL, center - 3);
       n <= std::min(n_max, center + 3); ++n) {
    best = std::max(best, phi(n));
  }
  best = std::max(best, phi(n_max));
  return best;
}

}  // namespace

GelfandShilovFit gs_fit(const Window& w, long long n_max,
                        const AmbiguityTable& grid, const GsFitOptions& opt) {
  if (n_max < 0) throw DomainError("gs_fit: n_max must be >= 0");
  if (!(opt.beta > 0.0)) throw DomainError("gs_fit: beta must be > 0");
  if (!grid.closed_form) {
    // The certificate only covers what the table resolves.
    double edge = -std::numeric_limits<double>::infinity();
    const auto& f = grid.field;
    for (size_t i = 0; i < f.nx; ++i) {
      edge = std::max({edge, std::abs(f.at(i, 0)), std::abs(f.at(i, f.ny - 1))});
    }
    for (size_t j = 0; j < f.ny; ++j) {
      edge = std::max({edge, std::abs(f.at(0, j)), std::abs(f.at(f.nx - 1, j))});
    }
    if (edge > 1e-14) {
      throw GridError("gs_fit: table does not resolve |V_g g| below 1e-14");
    }
  }

  const auto samples = constraint_samples(grid);
  GelfandShilovFit best;
  bool found = false;
  for (int ia = 0; ia < opt.a_points; ++ia) {
    const double frac = opt.a_points == 1
                            ? 0.0
                            : static_cast<double>(ia) / (opt.a_points - 1);
    const double A = opt.a_min * std::pow(opt.a_max / opt.a_min, frac);
    const double logA = std::log(A);
    double log_c = -std::numeric_limits<double>::infinity();
    for (const auto& [r, log_v] : samples) {
      if (!std::isfinite(log_v)) continue;
      const double need = log_v + envelope_gap(std::log1p(r) - logA,
                                               opt.beta, n_max);
      log_c = std::max(log_c, need);
      if (log_c > opt.log_c_cap) break;  // this A is already out
    }
    if (log_c > opt.log_c_cap) continue;
    const double log_obj = log_c + 5.0 * logA;  // C * A^{3d+2}, d = 1
    if (!found || log_obj < std::log(best.objective)) {
      best.log_C = log_c;
      best.C = std::exp(log_c);
      best.A = A;
      best.beta = opt.beta;
      best.n_max = n_max;
      best.objective = std::exp(log_obj);
      found = true;
    }
  }
  if (!found) {
    throw HypothesisError(
        "gs_fit: no (C, A) below the caps certifies the grid; "
        "beta is too small for this window");
  }
  return best;
}

namespace {

double radial_weighted_integral(const Window& w,
                                const std::function<double(double)>& weight,
                                double r_cut) {
  auto integrand = [&](double r) {
    return weight(r) * std::exp(2.0 * ambiguity_log_abs_radial(w, r)) * 2.0 *
           kPi * r;
  };
  return quad::integrate_adaptive(integrand, 0.0, r_cut, 1e-10);
}

double cartesian_weighted_integral(const Window& w,
                                   const std::function<double(double)>& weight,
                                   double tol) {
  // Table extent: the window's own time support, capped by Nyquist.
  const auto& s = w.samples();
  const double t_half =
      0.5 * w.sample_step() * static_cast<double>(s.size() - 1);
  const double extent = std::min(t_half, 0.5 / w.sample_step());
  const int n = 241;
  const auto table = build_cartesian_table(w, extent, n);
  const double cell = table.field.cell_area();
  double total = 0.0;
  double edge_ring = 0.0, inner_ring = 0.0;
  const size_t nx = table.field.nx, ny = table.field.ny;
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < ny; ++j) {
      const double r = std::hypot(table.field.x(i), table.field.y(j));
      const double v = weight(r) * std::norm(table.field.at(i, j)) * cell;
      total += v;
      const bool on_edge = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
      const bool next_ring = !on_edge && (i == 1 || j == 1 || i + 2 == nx ||
                                          j + 2 == ny);
      if (on_edge) edge_ring += v;
      if (next_ring) inner_ring += v;
    }
  }
  if (edge_ring > tol && edge_ring > 0.9 * inner_ring) {
    throw NumericalError(
        "weighted ambiguity integral: tail not convergent at the grid edge");
  }
  return total;
}

}  // namespace

double weighted_ambiguity_sq_integral(
    const Window& w, const std::function<double(double)>& weight,
    double r_cut_hint) {
  if (w.closed_form()) {
    const double m = static_cast<double>(w.hermite_order());
    const double r_cut = std::max(r_cut_hint, 4.0 * std::sqrt(m + 1.0) + 8.0);
    return radial_weighted_integral(w, weight, r_cut);
  }
  return cartesian_weighted_integral(w, weight, 1e-8);
}

double moment_constant(const Window& w, double s) {
  return moment_constant_result(w, s).value;
}

specfun::ScalarResult moment_constant_result(const Window& w, double s) {
  if (!(s >= 0.0)) throw DomainError("moment_constant: requires s >= 0");
  const double value = weighted_ambiguity_sq_integral(
      w, [s](double r) { return std::pow(1.0 + r, s); }, 12.0 + s);
  // Closed-form windows integrate to 1e-10 absolute (or 1e-12 relative
  // for large-valued weights); sampled tables carry the tail-check scale.
  return {value, w.closed_form() ? std::max(1e-8, 1e-12 * value) : 1e-4};
}

double k_g_constant(const Window& w) {
  return 2.0 * weighted_ambiguity_sq_integral(
                   w, [](double r) { return r; }, 14.0);
}

WindowConstants make_window_constants(const Window& w, double beta, double s,
                                      long long n_max) {
  WindowConstants c;
  c.gs_beta = beta;
  if (w.closed_form()) {
    const auto fit = gs_fit(w, n_max, build_radial_table(w), {.beta = beta});
    c.gs_C = fit.C;
    c.gs_A = fit.A;
  } else {
    const auto& smp = w.samples();
    const double t_half =
        0.5 * w.sample_step() * static_cast<double>(smp.size() - 1);
    const double extent = std::min(t_half, 0.5 / w.sample_step());
    const auto fit =
        gs_fit(w, n_max, build_cartesian_table(w, extent, 161), {.beta = beta});
    c.gs_C = fit.C;
    c.gs_A = fit.A;
  }
  c.moment_s = s;
  c.moment_Cg = moment_constant(w, s);
  c.K_g = k_g_constant(w);
  return c;
}

}  // namespace tflab::windows
