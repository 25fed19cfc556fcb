#pragma once

#include "tflab/concentration.hpp"
#include "tflab/geometry.hpp"

namespace tflab::spectrum_stats {

struct CountingReport {
  double delta = 0.0;
  long long count = 0;
  double deviation = 0.0;
  long long plunge = 0;
  long long a_omega = 0;
  double tau = 2.0;
};

/// #{lambda > delta}, strict; values within 1e-12 of delta count as <= delta.
long long counting(const concentration::Spectrum& spec, double delta);

/// #{delta < lambda <= 1 - delta} for delta in (0, 1/2).
long long plunge(const concentration::Spectrum& spec, double delta);

/// |counting(spec, delta) - |Omega||.
double deviation(const concentration::Spectrum& spec,
                 const geometry::Domain& dom, double delta);

/// ceil(|Omega|); 0 for degenerate domains.
long long a_omega(const geometry::Domain& dom);

CountingReport counting_report(const concentration::Spectrum& spec,
                               const geometry::Domain& dom, double delta);

}  // namespace tflab::spectrum_stats
