#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tflab/errors.hpp"

namespace tflab {

/// Uniformly sampled field on a rectangular phase-space grid.
/// Value (i, j) sits at (x0 + i*dx, y0 + j*dy); storage is row-major in i.
template <typename T>
struct GridField {
  double x0 = 0.0, y0 = 0.0;
  double dx = 1.0, dy = 1.0;
  std::size_t nx = 0, ny = 0;
  std::vector<T> values;

  GridField() = default;
  GridField(double x0_, double y0_, double dx_, double dy_, std::size_t nx_,
            std::size_t ny_)
      : x0(x0_), y0(y0_), dx(dx_), dy(dy_), nx(nx_), ny(ny_),
        values(nx_ * ny_, T{}) {}

  T& at(std::size_t i, std::size_t j) { return values[i * ny + j]; }
  const T& at(std::size_t i, std::size_t j) const { return values[i * ny + j]; }

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }

  double cell_area() const { return dx * dy; }

  bool same_grid(const GridField& o, double tol = 1e-12) const {
    return nx == o.nx && ny == o.ny && std::abs(x0 - o.x0) < tol &&
           std::abs(y0 - o.y0) < tol && std::abs(dx - o.dx) < tol &&
           std::abs(dy - o.dy) < tol;
  }
};

using ComplexField = GridField<std::complex<double>>;
using RealField = GridField<double>;

}  // namespace tflab
