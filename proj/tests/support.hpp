#pragma once

#include <random>
#include <vector>

#include "pushplan/geom.hpp"

namespace pushplan::testing {

inline Pose2D random_pose(std::mt19937_64& rng, double extent) {
  std::uniform_real_distribution<double> pos(-extent, extent);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  return {pos(rng), pos(rng), ang(rng)};
}

/// Convex polygon from the hull of random points around `center`.
inline Polygon2D random_convex(std::mt19937_64& rng, Vec2 center, double radius) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> rad(0.2 * radius, radius);
  std::uniform_int_distribution<int> count(3, 9);
  while (true) {
    std::vector<Vec2> pts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double a = ang(rng);
      const double r = rad(rng);
      pts.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    auto hull = convex_hull(pts);
    if (hull.size() >= 3 && signed_area(hull) > 1e-6) {
      return Polygon2D(hull);
    }
  }
}

// Independent intersection oracle: containment of any vertex, or any edge crossing.
inline bool point_in_convex(const Vec2& p, const Polygon2D& poly) {
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e = v[(i + 1) % v.size()] - v[i];
    if (e.cross(p - v[i]) < 0.0) {
      return false;
    }
  }
  return true;
}

inline bool segments_meet(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q - p).cross(r - p); };
  auto on_seg = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return true;
  }
  return (o1 == 0 && on_seg(a, b, c)) || (o2 == 0 && on_seg(a, b, d)) || (o3 == 0 && on_seg(c, d, a)) ||
         (o4 == 0 && on_seg(c, d, b));
}

inline bool oracle_intersect(const Polygon2D& a, const Polygon2D& b) {
  for (const auto& p : a.vertices()) {
    if (point_in_convex(p, b)) return true;
  }
  for (const auto& p : b.vertices()) {
    if (point_in_convex(p, a)) return true;
  }
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < vb.size(); ++j) {
      if (segments_meet(va[i], va[(i + 1) % va.size()], vb[j], vb[(j + 1) % vb.size()])) return true;
    }
  }
  return false;
}

inline bool near(const Pose2D& a, const Pose2D& b, double tol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol &&
         std::abs(normalize_angle(a.theta - b.theta)) <= tol;
}

}  // namespace pushplan::testing

#include "pushplan/dubins.hpp"
#include "pushplan/sweep.hpp"

namespace pushplan::testing {

/// Independent replay: exact footprint tests at every pose of a uniform dense sampling.
inline bool dense_path_clear(const DubinsPath& path, const Body& body, const std::vector<Polygon2D>& obstacles,
                             const Workspace& ws, double step = kCollisionStep / 10) {
  for (const auto& pose : sample_path(path, step)) {
    for (const auto& part : body.parts()) {
      const auto fp = footprint_at(part, pose);
      if (!inside_workspace(fp, ws)) return false;
      for (const auto& o : obstacles) {
        if (polygons_intersect(fp, o)) return false;
      }
    }
  }
  return true;
}

}  // namespace pushplan::testing

#include "pushplan/transit.hpp"

namespace pushplan::testing {

inline bool dense_poses_clear(const std::vector<Pose2D>& poses, const Body& body,
                              const std::vector<Polygon2D>& obstacles, const Workspace& ws) {
  for (const auto& pose : poses) {
    for (const auto& part : body.parts()) {
      const auto fp = footprint_at(part, pose);
      if (!inside_workspace(fp, ws)) return false;
      for (const auto& o : obstacles) {
        if (polygons_intersect(fp, o)) return false;
      }
    }
  }
  return true;
}

}  // namespace pushplan::testing
