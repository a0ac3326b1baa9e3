#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

/// SE(2) configuration. The heading is kept in (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }

  /// Maps a point from this frame into the parent frame.
  Vec2 apply(const Vec2& p) const;

  bool operator==(const Pose2D&) const = default;
};

/// Pose with cached heading cosine and sine, for mapping many points.
struct Frame2D {
  Vec2 t;
  double c = 1.0;
  double s = 0.0;

  explicit Frame2D(const Pose2D& p) : t{p.x, p.y}, c(std::cos(p.theta)), s(std::sin(p.theta)) {}
  Vec2 apply(const Vec2& p) const { return {t.x + c * p.x - s * p.y, t.y + s * p.x + c * p.y}; }
};

/// Rigid-body composition a ∘ b (b expressed in the frame of a).
Pose2D compose(const Pose2D& a, const Pose2D& b);
Pose2D inverse(const Pose2D& p);
double planar_distance(const Pose2D& a, const Pose2D& b);

/// Simple, convex, counterclockwise polygon with at least three vertices.
class Polygon2D {
 public:
  /// Throws GeometryError if the vertex list is not a valid convex CCW polygon.
  explicit Polygon2D(std::vector<Vec2> vertices);

  static Polygon2D rectangle(double x_min, double y_min, double x_max, double y_max);
  static Polygon2D square(double side);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const;
  Vec2 centroid() const;
  /// Largest vertex distance from the frame origin.
  double reach() const;

  bool operator==(const Polygon2D&) const = default;

 private:
  struct Unchecked {};
  Polygon2D(std::vector<Vec2> vertices, Unchecked) : vertices_(std::move(vertices)) {}
  friend Polygon2D footprint_at(const Polygon2D&, const Pose2D&);

  std::vector<Vec2> vertices_;
};

struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double diagonal() const { return std::hypot(width(), height()); }
  bool operator==(const Box&) const = default;
};

struct Workspace {
  Box bounds;
  double grid_resolution = 0.1;

  /// Throws GeometryError on empty bounds or non-positive resolution.
  static Workspace make(const Box& bounds, double grid_resolution);
  bool operator==(const Workspace&) const = default;
};

Polygon2D footprint_at(const Polygon2D& shape, const Pose2D& pose);

/// Closed-region overlap test: touching boundaries count as intersecting.
bool polygons_intersect(const Polygon2D& a, const Polygon2D& b);

/// True iff every vertex lies in the closed workspace rectangle.
bool inside_workspace(const Polygon2D& poly, const Workspace& ws);

// Raw convex-point-set variants used on hot paths.

/// True iff some edge normal of either set separates their projections by more than `margin`.
bool convex_separated(std::span<const Vec2> a, std::span<const Vec2> b, double margin);
/// True iff all points are at least `margin` inside the box.
bool points_inside(std::span<const Vec2> pts, const Box& box, double margin);
/// Counterclockwise convex hull without collinear points.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);
double signed_area(std::span<const Vec2> pts);

}  // namespace pushplan
