#include "pushplan/sweep.hpp"

#include <algorithm>
#include <array>

namespace pushplan {

Body::Body(std::vector<Polygon2D> parts) : parts_(std::move(parts)) {
  for (const auto& p : parts_) {
    reach_ = std::max(reach_, p.reach());
  }
}

Body Body::with(const Polygon2D& extra) const {
  auto parts = parts_;
  parts.push_back(extra);
  return Body(std::move(parts));
}

ObstacleSet::ObstacleSet(std::vector<Polygon2D> polys) : polys_(std::move(polys)) {
  centers_.reserve(polys_.size());
  radii_.reserve(polys_.size());
  for (const auto& p : polys_) {
    const Vec2 c = p.centroid();
    double r = 0.0;
    for (const auto& v : p.vertices()) {
      r = std::max(r, (v - c).norm());
    }
    centers_.push_back(c);
    radii_.push_back(r);
  }
}

namespace {

constexpr double kContactEps = 1e-9;
constexpr std::size_t kMaxPartVertices = 16;

double sagitta(const Pose2D& a, const Pose2D& b, double turn_radius, double reach) {
  if (turn_radius == kStraight) {
    return 0.0;
  }
  const double dtheta = std::abs(normalize_angle(b.theta - a.theta));
  return (std::abs(turn_radius) + reach) * (1.0 - std::cos(0.5 * dtheta));
}

}  // namespace

bool pose_clear(const Pose2D& p, const Body& body, const ObstacleSet& obstacles, const Workspace& ws) {
  std::array<Vec2, kMaxPartVertices> buf{};
  const Frame2D f(p);
  for (const auto& part : body.parts()) {
    const auto& vs = part.vertices();
    const std::size_t n = std::min(vs.size(), kMaxPartVertices);
    for (std::size_t i = 0; i < n; ++i) {
      buf[i] = f.apply(vs[i]);
    }
    const std::span<const Vec2> pts(buf.data(), n);
    if (!points_inside(pts, ws.bounds, 0.0)) {
      return false;
    }
    bool clear = true;
    obstacles.for_each_near(p.position(), part.reach(), [&](std::size_t i) {
      clear = convex_separated(pts, obstacles.polygons()[i].vertices(), 0.0);
      if (!clear) obstacles.blame(i);
      return clear;
    });
    if (!clear) {
      return false;
    }
  }
  return true;
}

ReplayCertificate ReplayCertificate::from(const ObstacleSet& obstacles, const CheckTrace& trace) {
  ReplayCertificate c;
  c.seen = obstacles.polygons();
  for (std::size_t i = 0; i < c.seen.size(); ++i) {
    if (trace.blamed[i]) c.blamed.push_back(c.seen[i]);
  }
  c.touched = trace.touched;
  return c;
}

bool ReplayCertificate::rejections_hold_on(const ObstacleSet& obstacles) const {
  const auto& polys = obstacles.polygons();
  return std::all_of(blamed.begin(), blamed.end(),
                     [&](const Polygon2D& p) { return std::find(polys.begin(), polys.end(), p) != polys.end(); });
}

bool ReplayCertificate::replays_on(const ObstacleSet& obstacles) const {
  if (!rejections_hold_on(obstacles)) return false;
  const auto& polys = obstacles.polygons();
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (!obstacles.clear_of(i, touched) && std::find(seen.begin(), seen.end(), polys[i]) == seen.end()) {
      return false;
    }
  }
  return true;
}

bool motion_clear(const Pose2D& a, const Pose2D& b, double turn_radius, const Body& body,
                  const ObstacleSet& obstacles, const Workspace& ws) {
  const double margin = sagitta(a, b, turn_radius, body.reach()) + kContactEps;
  const Vec2 mid = (a.position() + b.position()) * 0.5;
  const double half_span = 0.5 * (b.position() - a.position()).norm();

  std::array<Vec2, 2 * kMaxPartVertices> buf{};
  const Frame2D fa(a);
  const Frame2D fb(b);
  for (const auto& part : body.parts()) {
    const auto& vs = part.vertices();
    const std::size_t n = std::min(vs.size(), kMaxPartVertices);
    for (std::size_t i = 0; i < n; ++i) {
      buf[i] = fa.apply(vs[i]);
      buf[n + i] = fb.apply(vs[i]);
    }
    const std::span<const Vec2> pts(buf.data(), 2 * n);
    if (!points_inside(pts, ws.bounds, margin)) {
      return false;
    }
    const double r = part.reach() + half_span + margin;
    bool clear = true;
    std::vector<Vec2> hull;
    obstacles.for_each_near(mid, r, [&](std::size_t i) {
      if (hull.empty()) {
        hull = convex_hull(std::vector<Vec2>(pts.begin(), pts.end()));
      }
      clear = convex_separated(hull, obstacles.polygons()[i].vertices(), margin);
      if (!clear) obstacles.blame(i);
      return clear;
    });
    if (!clear) {
      return false;
    }
  }
  return true;
}

namespace {

// Hull with nearly collinear vertices dropped, so the strict convexity check holds.
Polygon2D hull_polygon(std::vector<Vec2> pts) {
  auto hull = convex_hull(std::move(pts));
  bool changed = true;
  while (changed && hull.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec2& a = hull[(i + hull.size() - 1) % hull.size()];
      const Vec2& b = hull[i];
      const Vec2& c = hull[(i + 1) % hull.size()];
      const Vec2 e0 = b - a;
      const Vec2 e1 = c - b;
      if (e0.cross(e1) <= 1e-12 * e0.norm() * e1.norm()) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return Polygon2D(std::move(hull));
}

}  // namespace

std::vector<Polygon2D> swept_hulls(const Pose2D& a, const Pose2D& b, const Body& body) {
  std::vector<Polygon2D> out;
  for (const auto& part : body.parts()) {
    std::vector<Vec2> pts;
    for (const auto& v : part.vertices()) {
      pts.push_back(a.apply(v));
      pts.push_back(b.apply(v));
    }
    out.push_back(hull_polygon(std::move(pts)));
  }
  return out;
}

}  // namespace pushplan
