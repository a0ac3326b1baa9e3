#include "pushplan/push_model.hpp"

#include <stdexcept>
#include <string>

namespace pushplan {

Polygon2D RobotParams::default_body(double bumper_offset) {
  return Polygon2D::rectangle(-0.1, -0.12, bumper_offset - 0.005, 0.12);
}

void RobotParams::validate() const {
  if (!(rho_transit > 0.0)) {
    throw std::invalid_argument("transit turning radius must be positive");
  }
  if (!(rho_push_min > 0.0) || rho_push < rho_push_min) {
    throw std::invalid_argument("pushing turning radius " + std::to_string(rho_push) +
                                " is below the quasistatic minimum " + std::to_string(rho_push_min));
  }
  if (!(bumper_offset > 0.0)) {
    throw std::invalid_argument("bumper offset must be positive");
  }
}

bool SymmetryGroup::equivalent(const Pose2D& a, const Pose2D& b, double pos_tol, double ang_tol) const {
  if (std::hypot(a.x - b.x, a.y - b.y) > pos_tol) {
    return false;
  }
  const double step = kTwoPi / order;
  const double diff = normalize_angle(b.theta - a.theta);
  const double k = std::round(diff / step);
  return std::abs(diff - k * step) <= ang_tol;
}

std::vector<Pose2D> SymmetryGroup::variants(const Pose2D& p) const {
  std::vector<Pose2D> out;
  for (int k = 0; k < order; ++k) {
    out.emplace_back(p.x, p.y, p.theta + k * kTwoPi / order);
  }
  return out;
}

Pose2D contact_frame(const Polygon2D& shape, int face, double bumper_offset) {
  const auto& v = shape.vertices();
  const auto n = static_cast<int>(v.size());
  if (face < 0 || face >= n) {
    throw std::out_of_range("face index " + std::to_string(face) + " out of range");
  }
  const Vec2 a = v[static_cast<std::size_t>(face)];
  const Vec2 b = v[static_cast<std::size_t>((face + 1) % n)];
  const Vec2 mid = (a + b) * 0.5;
  const Vec2 e = b - a;
  const Vec2 outward = Vec2{e.y, -e.x} * (1.0 / e.norm());
  // Bumper on the face midpoint, rear axle `bumper_offset` behind it, facing inward.
  const Vec2 axle = mid + outward * bumper_offset;
  return {axle.x, axle.y, std::atan2(-outward.y, -outward.x)};
}

PushingPose pushing_pose(ObjectId id, const Pose2D& object_pose, const Polygon2D& shape, int face,
                         const RobotParams& params) {
  const Pose2D local = contact_frame(shape, face, params.bumper_offset);
  return {id, face, compose(object_pose, local), inverse(local)};
}

std::vector<PushingPose> pushing_poses(ObjectId id, const Pose2D& object_pose, const Polygon2D& shape,
                                       const RobotParams& params) {
  std::vector<PushingPose> out;
  for (int f = 0; f < static_cast<int>(shape.size()); ++f) {
    out.push_back(pushing_pose(id, object_pose, shape, f, params));
  }
  return out;
}

}  // namespace pushplan
