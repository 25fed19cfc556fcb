#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tflab/grid.hpp"

namespace tflab::geometry {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

/// Compact planar domain: disk, axis-aligned rectangle, simple ccw polygon,
/// or a dilation R*base (scaling about the origin). Immutable.
class Domain {
 public:
  enum class Kind { Disk, Rect, Polygon, Dilated };

  static Domain disk(double cx, double cy, double radius);
  static Domain rect(double x0, double y0, double width, double height);
  static Domain polygon(std::vector<Vec2> vertices);
  /// CSV rows "x,y" (counterclockwise); an optional header row is skipped.
  static Domain polygon_from_csv(const std::string& path);

  Kind kind() const { return kind_; }
  bool degenerate() const { return degenerate_; }

  // Disk accessors (valid when kind == Disk).
  double disk_cx() const { return cx_; }
  double disk_cy() const { return cy_; }
  double disk_radius() const { return radius_; }
  // Rect accessors.
  double rect_x0() const { return cx_; }
  double rect_y0() const { return cy_; }
  double rect_width() const { return w_; }
  double rect_height() const { return h_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  double dilation_factor() const { return factor_; }
  const Domain& base() const { return *base_; }

  /// Dilation chains folded into a concrete disk/rect/polygon.
  Domain resolved() const;

  bool contains(double x, double y) const;
  /// Unsigned distance to the topological boundary.
  double boundary_distance(double x, double y) const;
  /// Axis-aligned bounding box.
  void bounding_box(double& x0, double& y0, double& x1, double& y1) const;
  bool convex() const;

  friend Domain dilate(const Domain& dom, double factor);

 private:
  Domain() = default;
  Kind kind_ = Kind::Disk;
  bool degenerate_ = false;
  double cx_ = 0.0, cy_ = 0.0;        // disk center / rect corner
  double radius_ = 0.0;               // disk
  double w_ = 0.0, h_ = 0.0;          // rect
  std::vector<Vec2> vertices_;        // polygon
  std::shared_ptr<const Domain> base_;  // dilated
  double factor_ = 1.0;
};

double measure(const Domain& dom);
double perimeter(const Domain& dom);
Domain dilate(const Domain& dom, double factor);

/// H^1(boundary inside the ball B_r(z)) from the per-shape closed forms.
/// Note the disk follows the one-sided arc convention 2R*asin(r/(2R))
/// (full circle once r >= 2R); polygons and rectangles use exact
/// segment-ball intersection lengths.
double boundary_length_in_ball(const Domain& dom, double zx, double zy,
                               double r);

/// Upper estimate of kappa_{dOmega,eta}: infimum over a deterministic
/// sampling of boundary points and radii of the arc length in B_r(z) / r.
double kappa(const Domain& dom, double eta, int n_boundary = 256,
             int n_radii = 64);

struct KappaEstimate {
  double value = 0.0;         // at (n_boundary, n_radii)
  double coarse_value = 0.0;  // at half the sampling counts
  int n_boundary = 0;
  int n_radii = 0;
};

KappaEstimate kappa_estimate(const Domain& dom, double eta,
                             int n_boundary = 256, int n_radii = 64);

/// H^1({z : dist(z, dOmega) = r}), exact offset closed forms for disk,
/// rectangle, and convex polygons; grid marching for non-convex polygons.
double level_set_measure(const Domain& dom, double r);

/// Grid-marching contour length of {dist = r}; exposed for the fallback path.
double level_set_measure_marching(const Domain& dom, double r,
                                  double grid_step);

/// || 1_E * phi - (int phi) 1_E ||_{L1} for E = Omega (complement = false)
/// or E = Omega^C, by grid quadrature on phi's lattice.
double mollification_defect(const Domain& dom, const RealField& phi,
                            bool complement);

struct GeometrySummary {
  double measure = 0.0;
  double perimeter = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  std::vector<std::pair<double, double>> level_set_table;  // (r, H^1)
};

GeometrySummary geometry_summary(const Domain& dom, double eta,
                                 const std::vector<double>& level_radii,
                                 int n_boundary = 256, int n_radii = 64);

}  // namespace tflab::geometry
