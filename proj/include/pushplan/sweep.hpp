#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "pushplan/geom.hpp"

namespace pushplan {

/// A rigid set of convex parts expressed in the robot frame (robot body, plus the
/// pushed object while it is attached).
class Body {
 public:
  Body() = default;
  explicit Body(std::vector<Polygon2D> parts);

  const std::vector<Polygon2D>& parts() const { return parts_; }
  double reach() const { return reach_; }
  Body with(const Polygon2D& extra) const;

 private:
  std::vector<Polygon2D> parts_;
  double reach_ = 0.0;
};

/// What a run of collision checks looked at: the obstacles that rejected a pose or
/// motion, and a box around every broad-phase query circle. An obstacle outside the box
/// could not have changed any answer.
struct CheckTrace {
  explicit CheckTrace(std::size_t n) : blamed(n, 0) {}

  std::vector<char> blamed;
  Box touched{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void touch(const Vec2& c, double r) {
    touched.x_min = std::min(touched.x_min, c.x - r);
    touched.y_min = std::min(touched.y_min, c.y - r);
    touched.x_max = std::max(touched.x_max, c.x + r);
    touched.y_max = std::max(touched.y_max, c.y + r);
  }
};

/// Obstacle polygons with cached bounding circles for a cheap broad phase.
class ObstacleSet {
 public:
  ObstacleSet() = default;
  explicit ObstacleSet(std::vector<Polygon2D> polys);

  const std::vector<Polygon2D>& polygons() const { return polys_; }
  /// True when polygon i's bounding circle misses the box.
  bool clear_of(std::size_t i, const Box& b) const {
    const double dx = std::max({b.x_min - centers_[i].x, 0.0, centers_[i].x - b.x_max});
    const double dy = std::max({b.y_min - centers_[i].y, 0.0, centers_[i].y - b.y_max});
    return dx * dx + dy * dy > radii_[i] * radii_[i];
  }
  std::size_t size() const { return polys_.size(); }
  bool empty() const { return polys_.empty(); }

  /// Indices of obstacles whose bounding circle meets the given circle.
  template <typename Fn>
  void for_each_near(const Vec2& c, double r, Fn&& fn) const {
    if (trace_) trace_->touch(c, r);
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      const Vec2 d = centers_[i] - c;
      const double rr = radii_[i] + r;
      if (d.dot(d) <= rr * rr) {
        if (!fn(i)) {
          return;
        }
      }
    }
  }

  /// While set, collision checks report into `t`, which must be sized for this set.
  void record(CheckTrace* t) const { trace_ = t; }
  void blame(std::size_t i) const {
    if (trace_) trace_->blamed[i] = 1;
  }

 private:
  std::vector<Polygon2D> polys_;
  std::vector<Vec2> centers_;
  std::vector<double> radii_;
  mutable CheckTrace* trace_ = nullptr;
};

/// Lets a computation done against one obstacle set be reused against another.
struct ReplayCertificate {
  std::vector<Polygon2D> blamed;
  std::vector<Polygon2D> seen;
  Box touched;

  static ReplayCertificate from(const ObstacleSet& obstacles, const CheckTrace& trace);
  /// Every check would answer the same: the blamed obstacles remain and nothing new
  /// reaches into the touched box.
  bool replays_on(const ObstacleSet& obstacles) const;
  /// Every rejection would recur. Enough to reuse a failure of a search that only fails
  /// by running out of candidates.
  bool rejections_hold_on(const ObstacleSet& obstacles) const;
};

inline constexpr double kStraight = std::numeric_limits<double>::infinity();

/// Conservative continuous check of the body moving from `a` to `b` along a single
/// constant-curvature arc of the given radius (kStraight for a line). The swept area
/// is covered by the convex hull of both footprints, padded by the arc sagitta.
bool motion_clear(const Pose2D& a, const Pose2D& b, double turn_radius, const Body& body,
                  const ObstacleSet& obstacles, const Workspace& ws);

/// Footprint check of the body at one pose (closed-region convention).
bool pose_clear(const Pose2D& p, const Body& body, const ObstacleSet& obstacles, const Workspace& ws);

/// Swept hulls for each part between two poses; used to build forbidden regions.
std::vector<Polygon2D> swept_hulls(const Pose2D& a, const Pose2D& b, const Body& body);

}  // namespace pushplan
