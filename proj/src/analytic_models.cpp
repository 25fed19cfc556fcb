#include "tflab/analytic_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tflab/errors.hpp"
#include "tflab/special_functions.hpp"

namespace tflab::analytic {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log of sum exp(log_terms) relative to the running maximum.
double log_sum_exp(const std::vector<double>& log_terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : log_terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0, comp = 0.0;  // Kahan
  for (double t : log_terms) {
    const double term = std::exp(t - m) - comp;
    const double next = s + term;
    comp = (next - s) - term;
    s = next;
  }
  return m + std::log(s);
}

}  // namespace

concentration::Spectrum AnalyticSpectrum::as_spectrum() const {
  return concentration::spectrum_from_values(values);
}

AnalyticSpectrum disk_eigenvalues(double radius, long long k_max) {
  if (!(radius > 0.0)) throw DomainError("disk_eigenvalues: radius > 0");
  if (k_max < 0) throw DomainError("disk_eigenvalues: k_max >= 0");
  AnalyticSpectrum s;
  s.model = AnalyticSpectrum::Model::Disk;
  s.radius = radius;
  s.dimension = 1;
  s.k_max = k_max;
  const double x = kPi * radius * radius;
  s.values.reserve(static_cast<size_t>(k_max) + 1);
  for (long long k = 0; k <= k_max; ++k) {
    s.values.push_back(
        specfun::reg_lower_gamma(static_cast<double>(k) + 1.0, x));
  }
  return s;
}

AnalyticSpectrum polydisk_eigenvalues(double radius, int dimension,
                                      long long k_max_per_axis,
                                      long long index_cap) {
  if (dimension < 1) throw DomainError("polydisk_eigenvalues: dimension >= 1");
  double box = 1.0;
  for (int j = 0; j < dimension; ++j) {
    box *= static_cast<double>(k_max_per_axis + 1);
    if (box > static_cast<double>(index_cap)) {
      throw NumericalError("polydisk_eigenvalues: index box exceeds the cap");
    }
  }
  const AnalyticSpectrum axis = disk_eigenvalues(radius, k_max_per_axis);
  std::vector<double> vals = axis.values;
  for (int j = 1; j < dimension; ++j) {
    std::vector<double> next;
    next.reserve(vals.size() * axis.values.size());
    for (double a : vals) {
      for (double b : axis.values) next.push_back(a * b);
    }
    vals = std::move(next);
  }
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  AnalyticSpectrum s;
  s.model = AnalyticSpectrum::Model::Polydisk;
  s.radius = radius;
  s.dimension = dimension;
  s.k_max = k_max_per_axis;
  s.values = std::move(vals);
  return s;
}

double log_disk_eigenvalue(double radius, long long k) {
  if (!(radius > 0.0)) throw DomainError("log_disk_eigenvalue: radius > 0");
  if (k < 0) throw DomainError("log_disk_eigenvalue: k >= 0");
  const double x = kPi * radius * radius;
  const double a = static_cast<double>(k) + 1.0;
  if (a <= x) {
    return std::log(specfun::reg_lower_gamma(a, x));
  }
  // Upper Poisson tail: lambda_k = e^{-x} sum_{j >= k+1} x^j / j!.
  // Factor out the leading term; the remaining series has ratio < 1.
  double term = 1.0, series = 1.0, comp = 0.0;
  for (long long i = 1; i < 100000; ++i) {
    term *= x / (a + static_cast<double>(i));
    const double y = term - comp;
    const double next = series + y;
    comp = (next - series) - y;
    series = next;
    if (term < 1e-18 * series) break;
  }
  return -x + a * std::log(x) - std::lgamma(a + 1.0) + std::log(series);
}

double log_one_minus_disk_eigenvalue(double radius, long long k) {
  if (!(radius > 0.0)) throw DomainError("radius > 0");
  if (k < 0) throw DomainError("k >= 0");
  const double x = kPi * radius * radius;
  // 1 - lambda_k = e^{-x} sum_{j <= k} x^j / j!   (finite lower Poisson sum)
  std::vector<double> log_terms;
  log_terms.reserve(static_cast<size_t>(k) + 1);
  for (long long j = 0; j <= k; ++j) {
    log_terms.push_back(static_cast<double>(j) * std::log(x) -
                        std::lgamma(static_cast<double>(j) + 1.0));
  }
  return -x + log_sum_exp(log_terms);
}

long long counting_analytic(double radius, double log_delta) {
  if (!(log_delta < 0.0)) {
    throw DomainError("counting_analytic: requires delta < 1");
  }
  long long count = 0;
  // lambda_k decreases strictly in k; stop at the first failure.
  for (long long k = 0; k < 100000000LL; ++k) {
    if (log_disk_eigenvalue(radius, k) > log_delta) {
      ++count;
    } else {
      return count;
    }
  }
  throw NumericalError("counting_analytic: runaway count");
}

GammaTailCheck gamma_tail_sandwich(double radius, long long k,
                                   bool check_upper_only) {
  (void)check_upper_only;
  const double x = kPi * radius * radius;
  const double a = static_cast<double>(k) + 1.0;
  if (a < x) {
    throw DomainError("gamma_tail_sandwich: requires k+1 >= pi R^2");
  }
  GammaTailCheck out;
  const double log_upper = -(a - x) * (a - x) / (2.0 * a);
  out.upper = std::exp(log_upper);
  out.holds_upper = log_disk_eigenvalue(radius, k) <= log_upper + 1e-12;
  return out;
}

GammaTailLowerFit fit_gamma_tail_lower(double radius, double m_factor) {
  if (!(m_factor > 1.0)) throw DomainError("fit_gamma_tail_lower: M > 1");
  const double x = kPi * radius * radius;
  std::vector<double> us, ys;
  for (long long k = 0; k < 100000000LL; ++k) {
    const double a = static_cast<double>(k) + 1.0;
    if (a < x) continue;
    if (a > m_factor * x) break;
    us.push_back((a - x) * (a - x) / a);
    ys.push_back(-log_disk_eigenvalue(radius, k));
  }
  if (us.size() < 2) {
    throw HypothesisError("fit_gamma_tail_lower: window has < 2 indices");
  }
  // Least squares y = c + b u.
  double su = 0, sy = 0, suu = 0, suy = 0;
  const auto n = static_cast<double>(us.size());
  for (size_t i = 0; i < us.size(); ++i) {
    su += us[i];
    sy += ys[i];
    suu += us[i] * us[i];
    suy += us[i] * ys[i];
  }
  GammaTailLowerFit fit;
  fit.b = (n * suy - su * sy) / std::max(1e-300, n * suu - su * su);
  double log_a = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < us.size(); ++i) {
    log_a = std::min(log_a, -ys[i] + fit.b * us[i]);
  }
  fit.a = std::exp(log_a);
  fit.n_points = static_cast<long long>(us.size());
  return fit;
}

SharpnessFit fit_sharpness_a(const std::vector<double>& radius_grid,
                             const std::vector<double>& delta_grid,
                             double sqrt_log_min) {
  SharpnessFit fit;
  fit.regime = 'A';
  double best = std::numeric_limits<double>::infinity();
  for (double radius : radius_grid) {
    for (double delta : delta_grid) {
      const double sl = std::sqrt(std::log(1.0 / delta));
      if (!(sl >= sqrt_log_min && sl <= radius)) continue;
      const double count = static_cast<double>(
          counting_analytic(radius, std::log(delta)));
      const double ratio =
          (count - kPi * radius * radius) / (sl * radius);
      fit.points.push_back({radius, delta, ratio});
      best = std::min(best, ratio);
    }
  }
  if (fit.points.empty()) {
    throw HypothesisError("fit_sharpness_a: empty validity window");
  }
  fit.fitted_c = best;
  return fit;
}

SharpnessFit fit_sharpness_b(const std::vector<double>& radius_grid,
                             const std::vector<double>& delta_grid,
                             double rho) {
  SharpnessFit fit;
  fit.regime = 'B';
  double best = std::numeric_limits<double>::infinity();
  for (double radius : radius_grid) {
    for (double delta : delta_grid) {
      const double big_l = std::log(1.0 / delta);
      if (!(big_l > std::exp(1.0))) continue;  // loglog must be positive
      const double ll = std::log(big_l);
      if (!(radius >= 1.0 && radius * radius <= rho * big_l / ll)) continue;
      const double count = static_cast<double>(
          counting_analytic(radius, std::log(delta)));
      const double ratio = (count - kPi * radius * radius) * ll / big_l;
      fit.points.push_back({radius, delta, ratio});
      best = std::min(best, ratio);
    }
  }
  if (fit.points.empty()) {
    throw HypothesisError("fit_sharpness_b: empty regime window");
  }
  fit.fitted_c = best;
  return fit;
}

}  // namespace tflab::analytic
