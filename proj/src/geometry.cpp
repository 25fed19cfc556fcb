#include "tflab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tflab/errors.hpp"

namespace tflab::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;

double shoelace_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                        const Vec2& q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool polygon_simple(const std::vector<Vec2>& v) {
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

double point_segment_distance(double px, double py, const Vec2& a,
                              const Vec2& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((px - a.x) * vx + (py - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.x + t * vx), py - (a.y + t * vy));
}

double segment_length_in_ball(const Vec2& p, const Vec2& q, double zx,
                              double zy, double r) {
  const double vx = q.x - p.x, vy = q.y - p.y;
  const double a = vx * vx + vy * vy;
  if (a == 0.0) return 0.0;
  const double ox = p.x - zx, oy = p.y - zy;
  const double b = 2.0 * (ox * vx + oy * vy);
  const double c = ox * ox + oy * oy - r * r;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t_lo = std::max(0.0, (-b - sq) / (2.0 * a));
  const double t_hi = std::min(1.0, (-b + sq) / (2.0 * a));
  return t_hi > t_lo ? (t_hi - t_lo) * std::sqrt(a) : 0.0;
}

bool point_in_polygon(const std::vector<Vec2>& v, double x, double y) {
  bool inside = false;
  const size_t n = v.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > y) != (v[j].y > y)) {
      const double xi =
          v[j].x + (y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
      if (x < xi) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

Domain Domain::disk(double cx, double cy, double radius) {
  if (radius < 0.0) throw DomainError("disk: radius must be >= 0");
  Domain d;
  d.kind_ = Kind::Disk;
  d.cx_ = cx;
  d.cy_ = cy;
  d.radius_ = radius;
  d.degenerate_ = radius == 0.0;
  return d;
}

Domain Domain::rect(double x0, double y0, double width, double height) {
  if (width < 0.0 || height < 0.0) {
    throw DomainError("rect: widths must be >= 0");
  }
  Domain d;
  d.kind_ = Kind::Rect;
  d.cx_ = x0;
  d.cy_ = y0;
  d.w_ = width;
  d.h_ = height;
  d.degenerate_ = width * height == 0.0;
  return d;
}

Domain Domain::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw DomainError("polygon: need >= 3 vertices");
  Domain d;
  d.kind_ = Kind::Polygon;
  if (!polygon_simple(vertices)) {
    throw DomainError("polygon: self-intersecting (degenerate domain)");
  }
  const double area = shoelace_area(vertices);
  d.degenerate_ = std::abs(area) < 1e-14;
  if (!d.degenerate_ && area < 0.0) {
    throw DomainError("polygon: vertices must be counterclockwise");
  }
  d.vertices_ = std::move(vertices);
  return d;
}

Domain Domain::polygon_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open polygon CSV: " + path);
  std::vector<Vec2> verts;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string scratch = line;
    std::replace(scratch.begin(), scratch.end(), ',', ' ');
    std::istringstream row(scratch);
    double x, y;
    if (!(row >> x >> y)) {
      if (line_no == 1) continue;  // header row
      throw ConfigError("polygon CSV: bad row " + std::to_string(line_no) +
                        " in " + path);
    }
    verts.push_back({x, y});
  }
  return polygon(std::move(verts));
}

Domain Domain::resolved() const {
  if (kind_ != Kind::Dilated) return *this;
  const Domain base = base_->resolved();
  const double f = factor_;
  switch (base.kind_) {
    case Kind::Disk:
      return disk(f * base.cx_, f * base.cy_, f * base.radius_);
    case Kind::Rect:
      return rect(f * base.cx_, f * base.cy_, f * base.w_, f * base.h_);
    case Kind::Polygon: {
      std::vector<Vec2> v = base.vertices_;
      for (auto& p : v) {
        p.x *= f;
        p.y *= f;
      }
      return polygon(std::move(v));
    }
    default:
      throw DomainError("resolved: unexpected kind");
  }
}

bool Domain::contains(double x, double y) const {
  switch (kind_) {
    case Kind::Disk:
      return std::hypot(x - cx_, y - cy_) <= radius_;
    case Kind::Rect:
      return x >= cx_ && x <= cx_ + w_ && y >= cy_ && y <= cy_ + h_;
    case Kind::Polygon:
      return degenerate_ ? false : point_in_polygon(vertices_, x, y);
    case Kind::Dilated:
      return resolved().contains(x, y);
  }
  return false;
}

double Domain::boundary_distance(double x, double y) const {
  switch (kind_) {
    case Kind::Disk:
      return std::abs(std::hypot(x - cx_, y - cy_) - radius_);
    case Kind::Rect: {
      // Distance to the rectangle outline.
      const std::vector<Vec2> v = {{cx_, cy_},
                                   {cx_ + w_, cy_},
                                   {cx_ + w_, cy_ + h_},
                                   {cx_, cy_ + h_}};
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < 4; ++i) {
        best = std::min(best, point_segment_distance(x, y, v[i], v[(i + 1) % 4]));
      }
      return best;
    }
    case Kind::Polygon: {
      double best = std::numeric_limits<double>::infinity();
      const size_t n = vertices_.size();
      for (size_t i = 0; i < n; ++i) {
        best = std::min(best, point_segment_distance(x, y, vertices_[i],
                                                     vertices_[(i + 1) % n]));
      }
      return best;
    }
    case Kind::Dilated:
      return resolved().boundary_distance(x, y);
  }
  return 0.0;
}

void Domain::bounding_box(double& x0, double& y0, double& x1,
                          double& y1) const {
  switch (kind_) {
    case Kind::Disk:
      x0 = cx_ - radius_;
      x1 = cx_ + radius_;
      y0 = cy_ - radius_;
      y1 = cy_ + radius_;
      return;
    case Kind::Rect:
      x0 = cx_;
      x1 = cx_ + w_;
      y0 = cy_;
      y1 = cy_ + h_;
      return;
    case Kind::Polygon: {
      x0 = y0 = std::numeric_limits<double>::infinity();
      x1 = y1 = -std::numeric_limits<double>::infinity();
      for (const auto& p : vertices_) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
      }
      return;
    }
    case Kind::Dilated:
      resolved().bounding_box(x0, y0, x1, y1);
      return;
  }
}

bool Domain::convex() const {
  switch (kind_) {
    case Kind::Disk:
    case Kind::Rect:
      return true;
    case Kind::Polygon: {
      const size_t n = vertices_.size();
      for (size_t i = 0; i < n; ++i) {
        if (cross(vertices_[i], vertices_[(i + 1) % n],
                  vertices_[(i + 2) % n]) < -1e-12) {
          return false;
        }
      }
      return true;
    }
    case Kind::Dilated:
      return base_->convex();
  }
  return false;
}

double measure(const Domain& dom) {
  switch (dom.kind()) {
    case Domain::Kind::Disk:
      return kPi * dom.disk_radius() * dom.disk_radius();
    case Domain::Kind::Rect:
      return dom.rect_width() * dom.rect_height();
    case Domain::Kind::Polygon:
      return dom.degenerate() ? 0.0 : shoelace_area(dom.vertices());
    case Domain::Kind::Dilated:
      return dom.dilation_factor() * dom.dilation_factor() *
             measure(dom.base());
  }
  return 0.0;
}

double perimeter(const Domain& dom) {
  switch (dom.kind()) {
    case Domain::Kind::Disk:
      return 2.0 * kPi * dom.disk_radius();
    case Domain::Kind::Rect:
      return 2.0 * (dom.rect_width() + dom.rect_height());
    case Domain::Kind::Polygon: {
      double sum = 0.0;
      const auto& v = dom.vertices();
      for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        sum += std::hypot(b.x - a.x, b.y - a.y);
      }
      return sum;
    }
    case Domain::Kind::Dilated:
      return dom.dilation_factor() * perimeter(dom.base());
  }
  return 0.0;
}

Domain dilate(const Domain& dom, double factor) {
  if (!(factor > 0.0)) throw DomainError("dilate: factor must be > 0");
  Domain d;
  d.kind_ = Domain::Kind::Dilated;
  d.base_ = std::make_shared<Domain>(dom);
  d.factor_ = factor;
  d.degenerate_ = dom.degenerate();
  return d;
}

double boundary_length_in_ball(const Domain& dom, double zx, double zy,
                               double r) {
  const Domain shape = dom.resolved();
  switch (shape.kind()) {
    case Domain::Kind::Disk: {
      const double R = shape.disk_radius();
      if (r >= 2.0 * R) return 2.0 * kPi * R;
      return 2.0 * R * std::asin(r / (2.0 * R));
    }
    case Domain::Kind::Rect: {
      const std::vector<Vec2> v = {
          {shape.rect_x0(), shape.rect_y0()},
          {shape.rect_x0() + shape.rect_width(), shape.rect_y0()},
          {shape.rect_x0() + shape.rect_width(),
           shape.rect_y0() + shape.rect_height()},
          {shape.rect_x0(), shape.rect_y0() + shape.rect_height()}};
      double sum = 0.0;
      for (size_t i = 0; i < 4; ++i) {
        sum += segment_length_in_ball(v[i], v[(i + 1) % 4], zx, zy, r);
      }
      return sum;
    }
    case Domain::Kind::Polygon: {
      const auto& v = shape.vertices();
      double sum = 0.0;
      for (size_t i = 0; i < v.size(); ++i) {
        sum += segment_length_in_ball(v[i], v[(i + 1) % v.size()], zx, zy, r);
      }
      return sum;
    }
    default:
      throw DomainError("boundary_length_in_ball: unexpected kind");
  }
}

namespace {

std::vector<Vec2> boundary_sample_points(const Domain& shape, int n_boundary) {
  std::vector<Vec2> pts;
  switch (shape.kind()) {
    case Domain::Kind::Disk: {
      for (int i = 0; i < n_boundary; ++i) {
        const double th = 2.0 * kPi * i / n_boundary;
        pts.push_back({shape.disk_cx() + shape.disk_radius() * std::cos(th),
                       shape.disk_cy() + shape.disk_radius() * std::sin(th)});
      }
      return pts;
    }
    case Domain::Kind::Rect:
    case Domain::Kind::Polygon: {
      std::vector<Vec2> v;
      if (shape.kind() == Domain::Kind::Rect) {
        v = {{shape.rect_x0(), shape.rect_y0()},
             {shape.rect_x0() + shape.rect_width(), shape.rect_y0()},
             {shape.rect_x0() + shape.rect_width(),
              shape.rect_y0() + shape.rect_height()},
             {shape.rect_x0(), shape.rect_y0() + shape.rect_height()}};
      } else {
        v = shape.vertices();
      }
      const double per = perimeter(shape);
      const size_t n = v.size();
      // Vertices first: the infimum often sits at corners.
      for (const auto& p : v) pts.push_back(p);
      for (size_t i = 0; i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const int k = std::max(
            1, static_cast<int>(std::round(n_boundary * len / per)));
        for (int j = 1; j < k; ++j) {
          const double t = static_cast<double>(j) / k;
          pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
      }
      return pts;
    }
    default:
      throw DomainError("boundary_sample_points: unexpected kind");
  }
}

}  // namespace

double kappa(const Domain& dom, double eta, int n_boundary, int n_radii) {
  if (!(eta > 0.0)) throw DomainError("kappa: eta must be > 0");
  if (n_boundary < 16 || n_radii < 16) {
    throw DomainError("kappa: sampling counts must be >= 16");
  }
  const Domain shape = dom.resolved();
  if (shape.degenerate()) throw DomainError("kappa: degenerate domain");
  const auto pts = boundary_sample_points(shape, n_boundary);
  double best = std::numeric_limits<double>::infinity();
  const double r_min = eta * 1e-4;
  const double ratio = std::pow(eta / r_min, 1.0 / (n_radii - 1));
  double r = r_min;
  for (int j = 0; j < n_radii; ++j) {
    for (const auto& z : pts) {
      best = std::min(best, boundary_length_in_ball(shape, z.x, z.y, r) / r);
    }
    r = (j + 2 == n_radii) ? eta : r * ratio;
  }
  return best;
}

KappaEstimate kappa_estimate(const Domain& dom, double eta, int n_boundary,
                             int n_radii) {
  KappaEstimate est;
  est.n_boundary = n_boundary;
  est.n_radii = n_radii;
  est.coarse_value = kappa(dom, eta, std::max(16, n_boundary / 2),
                           std::max(16, n_radii / 2));
  est.value = kappa(dom, eta, n_boundary, n_radii);
  return est;
}

namespace {

// Inward offset of a convex ccw polygon; empty when any edge collapses.
std::vector<Vec2> inner_offset_convex(const std::vector<Vec2>& v, double r) {
  const size_t n = v.size();
  std::vector<Vec2> out(n);
  for (size_t i = 0; i < n; ++i) {
    // Offset lines of edges (i-1, i) and (i, i+1) intersected.
    const Vec2& p0 = v[(i + n - 1) % n];
    const Vec2& p1 = v[i];
    const Vec2& p2 = v[(i + 1) % n];
    auto offset_line = [r](const Vec2& a, const Vec2& b, double& nx,
                           double& ny, double& c) {
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      // Inward normal of a ccw edge.
      nx = -(b.y - a.y) / len;
      ny = (b.x - a.x) / len;
      c = nx * (a.x + r * nx) + ny * (a.y + r * ny);
    };
    double n1x, n1y, c1, n2x, n2y, c2;
    offset_line(p0, p1, n1x, n1y, c1);
    offset_line(p1, p2, n2x, n2y, c2);
    const double det = n1x * n2y - n2x * n1y;
    if (std::abs(det) < 1e-14) {  // collinear edges
      out[i] = {p1.x + r * n1x, p1.y + r * n1y};
    } else {
      out[i] = {(c1 * n2y - c2 * n1y) / det, (n1x * c2 - n2x * c1) / det};
    }
  }
  // Valid only if orientation is preserved and edges kept their direction.
  if (shoelace_area(out) <= 0.0) return {};
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a0 = v[i];
    const Vec2& b0 = v[(i + 1) % n];
    const Vec2& a1 = out[i];
    const Vec2& b1 = out[(i + 1) % n];
    if ((b0.x - a0.x) * (b1.x - a1.x) + (b0.y - a0.y) * (b1.y - a1.y) <= 0.0) {
      return {};
    }
  }
  return out;
}

}  // namespace

double level_set_measure_marching(const Domain& dom, double r,
                                  double grid_step) {
  const Domain shape = dom.resolved();
  double x0, y0, x1, y1;
  shape.bounding_box(x0, y0, x1, y1);
  x0 -= r + 2.0 * grid_step;
  y0 -= r + 2.0 * grid_step;
  x1 += r + 2.0 * grid_step;
  y1 += r + 2.0 * grid_step;
  const auto nx = static_cast<size_t>(std::ceil((x1 - x0) / grid_step)) + 1;
  const auto ny = static_cast<size_t>(std::ceil((y1 - y0) / grid_step)) + 1;
  std::vector<double> f(nx * ny);
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < ny; ++j) {
      f[i * ny + j] =
          shape.boundary_distance(x0 + i * grid_step, y0 + j * grid_step) - r;
    }
  }
  double total = 0.0;
  auto interp = [](double fa, double fb) { return fa / (fa - fb); };
  for (size_t i = 0; i + 1 < nx; ++i) {
    for (size_t j = 0; j + 1 < ny; ++j) {
      const double f00 = f[i * ny + j], f10 = f[(i + 1) * ny + j];
      const double f01 = f[i * ny + j + 1], f11 = f[(i + 1) * ny + j + 1];
      std::vector<Vec2> cuts;
      if ((f00 < 0) != (f10 < 0)) cuts.push_back({interp(f00, f10), 0.0});
      if ((f10 < 0) != (f11 < 0)) cuts.push_back({1.0, interp(f10, f11)});
      if ((f01 < 0) != (f11 < 0)) cuts.push_back({interp(f01, f11), 1.0});
      if ((f00 < 0) != (f01 < 0)) cuts.push_back({0.0, interp(f00, f01)});
      if (cuts.size() == 2) {
        total += std::hypot(cuts[1].x - cuts[0].x, cuts[1].y - cuts[0].y);
      } else if (cuts.size() == 4) {
        // Ambiguous saddle; pair edges (0,1) and (2,3).
        total += std::hypot(cuts[1].x - cuts[0].x, cuts[1].y - cuts[0].y);
        total += std::hypot(cuts[3].x - cuts[2].x, cuts[3].y - cuts[2].y);
      }
    }
  }
  return total * grid_step;
}

double level_set_measure(const Domain& dom, double r) {
  if (!(r > 0.0)) throw DomainError("level_set_measure: r must be > 0");
  const Domain shape = dom.resolved();
  switch (shape.kind()) {
    case Domain::Kind::Disk: {
      const double R = shape.disk_radius();
      double total = 2.0 * kPi * (R + r);
      if (r < R) total += 2.0 * kPi * (R - r);
      return total;
    }
    case Domain::Kind::Rect: {
      const double w = shape.rect_width(), h = shape.rect_height();
      double total = 2.0 * (w + h) + 2.0 * kPi * r;
      if (2.0 * r < std::min(w, h)) total += 2.0 * (w + h) - 8.0 * r;
      return total;
    }
    case Domain::Kind::Polygon: {
      if (!shape.convex()) {
        return level_set_measure_marching(shape, r, 0.002 * (perimeter(shape)));
      }
      double total = perimeter(shape) + 2.0 * kPi * r;  // outer offset
      const auto inner = inner_offset_convex(shape.vertices(), r);
      if (!inner.empty()) {
        double p = 0.0;
        for (size_t i = 0; i < inner.size(); ++i) {
          const auto& a = inner[i];
          const auto& b = inner[(i + 1) % inner.size()];
          p += std::hypot(b.x - a.x, b.y - a.y);
        }
        total += p;
      }
      return total;
    }
    default:
      throw DomainError("level_set_measure: unsupported shape");
  }
}

namespace {

// Scanline x-intervals of the row {(x, y) : (x, y) in Omega}.
std::vector<std::pair<double, double>> row_intervals(const Domain& shape,
                                                     double y) {
  switch (shape.kind()) {
    case Domain::Kind::Disk: {
      const double dy = y - shape.disk_cy();
      const double R = shape.disk_radius();
      if (std::abs(dy) >= R) return {};
      const double half = std::sqrt(R * R - dy * dy);
      return {{shape.disk_cx() - half, shape.disk_cx() + half}};
    }
    case Domain::Kind::Rect: {
      if (y < shape.rect_y0() || y > shape.rect_y0() + shape.rect_height()) {
        return {};
      }
      return {{shape.rect_x0(), shape.rect_x0() + shape.rect_width()}};
    }
    case Domain::Kind::Polygon: {
      const auto& v = shape.vertices();
      std::vector<double> xs;
      const size_t n = v.size();
      for (size_t i = 0; i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        if ((a.y > y) != (b.y > y)) {
          xs.push_back(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
        }
      }
      std::sort(xs.begin(), xs.end());
      std::vector<std::pair<double, double>> out;
      for (size_t i = 0; i + 1 < xs.size(); i += 2) {
        out.emplace_back(xs[i], xs[i + 1]);
      }
      return out;
    }
    default:
      throw DomainError("row_intervals: unexpected kind");
  }
}

}  // namespace

double mollification_defect(const Domain& dom, const RealField& phi,
                            bool complement) {
  (void)complement;  // 1_E*phi - (int phi) 1_E has the same L1 norm for
                     // E = Omega and E = Omega^C (negation identity).
  if (phi.nx < 2 || phi.ny < 2) throw GridError("mollification: empty phi grid");
  for (double v : phi.values) {
    if (v < 0.0) throw DomainError("mollification: phi must be nonnegative");
  }
  const Domain shape = dom.resolved();
  const double cell = phi.cell_area();
  double phi_mass = 0.0;
  for (double v : phi.values) phi_mass += v;
  phi_mass *= cell;

  // Row prefix sums of phi: prefix[j][i] = sum of phi(0..i-1, j).
  std::vector<std::vector<double>> prefix(phi.ny,
                                          std::vector<double>(phi.nx + 1, 0.0));
  for (size_t j = 0; j < phi.ny; ++j) {
    for (size_t i = 0; i < phi.nx; ++i) {
      prefix[j][i + 1] = prefix[j][i] + phi.at(i, j);
    }
  }

  // Output grid covers Omega and Omega (+) supp(phi), on phi's lattice
  // steps but shifted to cell midpoints: interval endpoints and indicator
  // queries then never sit exactly on lattice-aligned boundaries.
  double bx0, by0, bx1, by1;
  shape.bounding_box(bx0, by0, bx1, by1);
  const double px1 = phi.x(phi.nx - 1), py1 = phi.y(phi.ny - 1);
  const double ox0 = bx0 + std::min(0.0, phi.x0) - 2.0 * phi.dx + 0.5 * phi.dx;
  const double oy0 = by0 + std::min(0.0, phi.y0) - 2.0 * phi.dy + 0.5 * phi.dy;
  const double ox1 = bx1 + std::max(0.0, px1) + 2.0 * phi.dx;
  const double oy1 = by1 + std::max(0.0, py1) + 2.0 * phi.dy;
  const auto onx = static_cast<size_t>(std::ceil((ox1 - ox0) / phi.dx)) + 1;
  const auto ony = static_cast<size_t>(std::ceil((oy1 - oy0) / phi.dy)) + 1;

  // y - phi.y(jv) depends only on jo - jv; cache the row intervals per offset.
  std::vector<std::vector<std::pair<double, double>>> intervals_by_offset(
      ony + phi.ny - 1);
  for (size_t k = 0; k < intervals_by_offset.size(); ++k) {
    const double y_row = (oy0 - phi.y0) +
                         (static_cast<double>(k) -
                          static_cast<double>(phi.ny - 1)) *
                             phi.dy;
    intervals_by_offset[k] = row_intervals(shape, y_row);
  }

  double defect = 0.0;
  double edge_max = 0.0;
  for (size_t jo = 0; jo < ony; ++jo) {
    const double y = oy0 + static_cast<double>(jo) * phi.dy;
    for (size_t io = 0; io < onx; ++io) {
      const double x = ox0 + static_cast<double>(io) * phi.dx;
      // q(x, y) = int phi(u, v) 1_Omega(x - u, y - v) du dv.
      double q = 0.0;
      for (size_t jv = 0; jv < phi.ny; ++jv) {
        const auto& intervals =
            intervals_by_offset[jo - jv + phi.ny - 1];
        for (const auto& [lo, hi] : intervals) {
          // u in [x - hi, x - lo]
          const double u_lo = x - hi, u_hi = x - lo;
          const auto i_lo = static_cast<long long>(
              std::ceil((u_lo - phi.x0) / phi.dx - 1e-9));
          const auto i_hi = static_cast<long long>(
              std::floor((u_hi - phi.x0) / phi.dx + 1e-9));
          const long long a = std::max(0LL, i_lo);
          const long long b =
              std::min(static_cast<long long>(phi.nx) - 1, i_hi);
          if (b >= a) q += prefix[jv][b + 1] - prefix[jv][a];
        }
      }
      q *= cell;
      const double integrand =
          std::abs(q - (shape.contains(x, y) ? phi_mass : 0.0));
      defect += integrand;
      if (io == 0 || jo == 0 || io + 1 == onx || jo + 1 == ony) {
        edge_max = std::max(edge_max, integrand);
      }
    }
  }
  if (edge_max > 1e-9 * std::max(1.0, phi_mass)) {
    throw GridError("mollification: grid does not cover supp(phi) (+) Omega");
  }
  return defect * cell;
}

GeometrySummary geometry_summary(const Domain& dom, double eta,
                                 const std::vector<double>& level_radii,
                                 int n_boundary, int n_radii) {
  GeometrySummary s;
  s.measure = measure(dom);
  s.perimeter = perimeter(dom);
  s.eta = eta;
  s.kappa = kappa(dom, eta, n_boundary, n_radii);
  for (double r : level_radii) {
    s.level_set_table.emplace_back(r, level_set_measure(dom, r));
  }
  return s;
}

}  // namespace tflab::geometry
