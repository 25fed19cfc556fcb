#include "tflab/spectrum_stats.hpp"

#include <cmath>

#include "tflab/errors.hpp"

namespace tflab::spectrum_stats {

long long counting(const concentration::Spectrum& spec, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("counting: requires 0 < delta < 1");
  }
  long long n = 0;
  for (double v : spec.values) {
    if (v - delta > 1e-12) ++n;
  }
  return n;
}

long long plunge(const concentration::Spectrum& spec, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw DomainError("plunge: requires 0 < delta < 1/2");
  }
  return counting(spec, delta) - counting(spec, 1.0 - delta);
}

double deviation(const concentration::Spectrum& spec,
                 const geometry::Domain& dom, double delta) {
  return std::abs(static_cast<double>(counting(spec, delta)) -
                  geometry::measure(dom));
}

long long a_omega(const geometry::Domain& dom) {
  return static_cast<long long>(std::ceil(geometry::measure(dom)));
}

CountingReport counting_report(const concentration::Spectrum& spec,
                               const geometry::Domain& dom, double delta) {
  CountingReport r;
  r.delta = delta;
  r.count = counting(spec, delta);
  r.deviation = deviation(spec, dom, delta);
  const double dmin = std::min(delta, 1.0 - delta);
  r.plunge = dmin < 0.5 ? plunge(spec, dmin) : 0;
  r.a_omega = a_omega(dom);
  r.tau = std::max(1.0 / delta, 1.0 / (1.0 - delta));
  return r;
}

}  // namespace tflab::spectrum_stats
