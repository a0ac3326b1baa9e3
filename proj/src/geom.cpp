#include "pushplan/geom.hpp"

#include <algorithm>
#include <limits>

namespace pushplan {

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) {
    a += kTwoPi;
  } else if (a > kPi) {
    a -= kTwoPi;
  }
  return a;
}

Vec2 Pose2D::apply(const Vec2& p) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {x + c * p.x - s * p.y, y + s * p.x + c * p.y};
}

Pose2D compose(const Pose2D& a, const Pose2D& b) {
  const Vec2 t = a.apply({b.x, b.y});
  return {t.x, t.y, a.theta + b.theta};
}

Pose2D inverse(const Pose2D& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {-c * p.x - s * p.y, s * p.x - c * p.y, -p.theta};
}

double planar_distance(const Pose2D& a, const Pose2D& b) { return std::hypot(b.x - a.x, b.y - a.y); }

double signed_area(std::span<const Vec2> pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    twice += pts[i].cross(pts[(i + 1) % pts.size()]);
  }
  return 0.5 * twice;
}

Polygon2D::Polygon2D(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw GeometryError("polygon needs at least 3 vertices, got " + std::to_string(n));
  }
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw GeometryError("polygon vertex is not finite");
    }
  }
  if (signed_area(vertices_) <= 0.0) {
    throw GeometryError("polygon must be counterclockwise with positive area");
  }
  // Strict left turns at every vertex plus one full winding => simple and convex.
  double winding = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (e0.norm() == 0.0) {
      throw GeometryError("polygon has repeated vertices");
    }
    const double turn = std::atan2(e0.cross(e1), e0.dot(e1));
    if (turn <= 0.0) {
      throw GeometryError("polygon is not strictly convex");
    }
    winding += turn;
  }
  if (std::abs(winding - kTwoPi) > 1e-6) {
    throw GeometryError("polygon is self-intersecting");
  }
}

Polygon2D Polygon2D::rectangle(double x_min, double y_min, double x_max, double y_max) {
  return Polygon2D({{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}});
}

Polygon2D Polygon2D::square(double side) {
  const double h = 0.5 * side;
  return rectangle(-h, -h, h, h);
}

double Polygon2D::area() const { return signed_area(vertices_); }

Vec2 Polygon2D::centroid() const {
  double cx = 0.0;
  double cy = 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& p = vertices_[i];
    const Vec2& q = vertices_[(i + 1) % vertices_.size()];
    const double w = p.cross(q);
    twice += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double Polygon2D::reach() const {
  double r = 0.0;
  for (const auto& v : vertices_) {
    r = std::max(r, v.norm());
  }
  return r;
}

Workspace Workspace::make(const Box& bounds, double grid_resolution) {
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw GeometryError("workspace bounds must have positive width and height");
  }
  if (!(grid_resolution > 0.0)) {
    throw GeometryError("workspace grid resolution must be positive");
  }
  return Workspace{bounds, grid_resolution};
}

Polygon2D footprint_at(const Polygon2D& shape, const Pose2D& pose) {
  std::vector<Vec2> out;
  out.reserve(shape.size());
  const Frame2D f(pose);
  for (const auto& v : shape.vertices()) {
    out.push_back(f.apply(v));
  }
  return Polygon2D(std::move(out), Polygon2D::Unchecked{});
}

namespace {

// Does some edge normal of `a` separate the two sets by more than `margin`?
bool separated_on_edges_of(std::span<const Vec2> a, std::span<const Vec2> b, double margin) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = a[i];
    const Vec2 e = a[(i + 1) % n] - p;
    // Outward normal of a CCW edge; not normalized, so scale the margin instead.
    const Vec2 normal{e.y, -e.x};
    const double len = e.norm();
    if (len == 0.0) {
      continue;
    }
    double a_max = -std::numeric_limits<double>::infinity();
    for (const auto& q : a) {
      a_max = std::max(a_max, normal.dot(q - p));
    }
    double b_min = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      b_min = std::min(b_min, normal.dot(q - p));
    }
    if (b_min - a_max > margin * len) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool convex_separated(std::span<const Vec2> a, std::span<const Vec2> b, double margin) {
  return separated_on_edges_of(a, b, margin) || separated_on_edges_of(b, a, margin);
}

bool polygons_intersect(const Polygon2D& a, const Polygon2D& b) {
  return !convex_separated(a.vertices(), b.vertices(), 0.0);
}

bool points_inside(std::span<const Vec2> pts, const Box& box, double margin) {
  for (const auto& p : pts) {
    if (p.x < box.x_min + margin || p.x > box.x_max - margin || p.y < box.y_min + margin ||
        p.y > box.y_max - margin) {
      return false;
    }
  }
  return true;
}

bool inside_workspace(const Polygon2D& poly, const Workspace& ws) {
  return points_inside(poly.vertices(), ws.bounds, 0.0);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) { return (a - o).cross(b - o); };
  for (const auto& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace pushplan
