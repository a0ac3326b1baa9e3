#pragma once

#include <vector>

#include "pushplan/geom.hpp"
#include "pushplan/sweep.hpp"

namespace pushplan {

using ObjectId = int;

/// Kinematic and contact parameters of the car-like pusher.
struct RobotParams {
  double rho_push = 1.43;      // turning radius while pushing
  double rho_transit = 1.09;   // turning radius without an object
  double rho_push_min = 0.815; // quasistatic lower bound for rho_push
  double bumper_offset = 0.2;  // rear axle to bumper face
  Polygon2D body_footprint = default_body(0.2);

  /// Rectangular body whose front edge sits 5 mm behind the bumper face, so a robot
  /// at a pushing pose does not touch the object it is about to push.
  static Polygon2D default_body(double bumper_offset);
  /// Throws std::invalid_argument when a radius or the offset is out of range.
  void validate() const;
  Body body() const { return Body({body_footprint}); }
};

/// Rotational symmetry of an object shape: `order` equivalent orientations spaced 2π/order.
struct SymmetryGroup {
  int order = 1;
  /// True iff the two object poses coincide up to a symmetry rotation.
  bool equivalent(const Pose2D& a, const Pose2D& b, double pos_tol, double ang_tol) const;
  std::vector<Pose2D> variants(const Pose2D& p) const;
};

struct PushingPose {
  ObjectId object_id = 0;
  int face_index = 0;
  Pose2D robot_pose;
  /// Object pose expressed in the robot frame; fixed for a given shape, face and offset.
  Pose2D attach_transform;
};

/// Robot pose, relative to the object frame, that pushes face `face` at its midpoint.
Pose2D contact_frame(const Polygon2D& shape, int face, double bumper_offset);

/// One pushing pose per face, in face order.
std::vector<PushingPose> pushing_poses(ObjectId id, const Pose2D& object_pose, const Polygon2D& shape,
                                       const RobotParams& params);
PushingPose pushing_pose(ObjectId id, const Pose2D& object_pose, const Polygon2D& shape, int face,
                         const RobotParams& params);

/// Object pose carried rigidly by a robot at `robot_pose`.
inline Pose2D object_pose_along_push(const Pose2D& robot_pose, const Pose2D& attach) {
  return compose(robot_pose, attach);
}

}  // namespace pushplan
