#pragma once

#include <memory>
#include <optional>

#include "pushplan/dubins.hpp"
#include "pushplan/push_model.hpp"
#include "pushplan/sweep.hpp"

namespace pushplan {

/// One infeasible push-transfer to be split by an intermediate object pose. The robot
/// pushes face `start_push.face_index` (a) from the start, re-contacts face
/// `goal_push.face_index` (b) at the intermediate pose, and finishes at `goal_push`.
struct PrereloQuery {
  ObjectId object_id = 0;
  Polygon2D shape = Polygon2D::square(0.15);
  PushingPose start_push;
  PushingPose goal_push;
  std::shared_ptr<const ObstacleSet> obstacles = std::make_shared<ObstacleSet>();
  Workspace ws;
  RobotParams params;

  int face_a() const { return start_push.face_index; }
  int face_b() const { return goal_push.face_index; }
};

/// Builds a query from object poses; `goal_object` must be the goal pose whose face-b
/// pushing pose the robot ends at. Throws std::out_of_range on a bad face index.
PrereloQuery make_prerelo_query(ObjectId id, const Polygon2D& shape, const Pose2D& start_object,
                                const Pose2D& goal_object, int face_a, int face_b,
                                std::shared_ptr<const ObstacleSet> obstacles, const Workspace& ws,
                                const RobotParams& params);

enum class SeedKind { Fillet1, Fillet2, AxisSample, None };
std::string_view to_string(SeedKind s);

struct PrereloSolution {
  Pose2D pre_pose;
  DubinsPath path1;
  DubinsPath path2;
  double cost = 0.0;
  SeedKind seed_used = SeedKind::None;
  int face_a = 0;
  int face_b = 0;
};

/// Fillet warm start. Variant 1 puts the intermediate pose on the back-extension of the
/// goal push (P1 = straight + arc, P2 = straight); variant 2 mirrors it
/// (P1 = straight, P2 = arc + straight). Either way the seed has exactly one arc.
std::optional<PrereloSolution> seed_fillet(const PrereloQuery& q, int variant);

enum class PrereloStart { FilletSeeds, Midpoint };

struct DescentOptions {
  double initial_pos_step = 0.05;
  double initial_ang_step = 0.05;
  double shrink = 0.5;
  double min_pos_step = 1e-3;
  double min_ang_step = 1e-3;
  int max_polls = 20000;
};

/// Feasible pattern-search descent over the intermediate pose. Seeds from both fillet
/// variants (or from the straight midpoint for PrereloStart::Midpoint) and falls back
/// to axis sampling when no start point is feasible.
std::optional<PrereloSolution> optimize_prerelocation(const PrereloQuery& q,
                                                      PrereloStart start = PrereloStart::FilletSeeds,
                                                      const DescentOptions& opts = {});

/// Greedy baseline: intermediate poses translated along the object's contact normals
/// at multiples of `step`; the closest feasible one wins (ties by face order).
std::optional<PrereloSolution> sample_axis_prerelocation(const PrereloQuery& q, double step, double max_dist);

/// Objective and feasibility for a candidate intermediate pose, using shortest Dubins legs.
double prerelo_cost(const PrereloQuery& q, const Pose2D& pre_pose);
std::optional<PrereloSolution> evaluate_prerelocation(const PrereloQuery& q, const Pose2D& pre_pose);

/// True iff a leg pushed with the given face clears workspace and obstacles.
bool push_leg_feasible(const PrereloQuery& q, const DubinsPath& leg, int face);

}  // namespace pushplan
