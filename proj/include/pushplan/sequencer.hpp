#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pushplan/scenario.hpp"
#include "pushplan/transit.hpp"

namespace pushplan {

enum class Method { ReloPush, B, BO, BOSS };
std::string_view to_string(Method m);
/// Accepts relopush, b, bo, boss. Throws std::invalid_argument otherwise.
Method method_from_string(std::string_view s);
PrereloMethod prerelo_method(Method m);
bool backtracks(Method m);

struct WorldState {
  Pose2D robot_pose;
  std::map<ObjectId, Pose2D> object_poses;
  std::set<ObjectId> done;
};

enum class ActionKind { Transit, PushTransfer, ObstacleRelocation };
std::string_view to_string(ActionKind k);

struct PlanAction {
  ActionKind kind = ActionKind::Transit;
  /// Pushed object; unset for transits.
  std::optional<ObjectId> object_id;
  /// Contacted face for pushes.
  int face_index = 0;
  TransitPath transit;
  DubinsPath push;
  /// Pose of the pushed object after the action.
  Pose2D object_pose_after;

  double length() const { return kind == ActionKind::Transit ? transit.length : push.length(); }
};

struct DepthRecord {
  int depth = 0;
  ObjectId object_id = 0;
  EdgeKind edge_kind = EdgeKind::Direct;
  /// Candidates popped at this depth before the committed one.
  int candidates_tried = 0;
};

struct RearrangementPlan {
  std::vector<PlanAction> actions;
  double pushing_length = 0.0;
  double transit_length = 0.0;
  double total_length = 0.0;
  std::vector<DepthRecord> depth_trace;

  void recompute_totals();
};

enum class FailureReason { None, Timeout, NoSolution };
std::string_view to_string(FailureReason r);

struct PlanStats {
  double seconds = 0.0;
  std::int64_t work = 0;
  int depths_entered = 0;
  int backtracks = 0;
  int edges_evaluated = 0;
};

struct PlanResult {
  std::optional<RearrangementPlan> plan;
  FailureReason failure = FailureReason::None;
  PlanStats stats;

  bool ok() const { return plan.has_value(); }
};

struct PlanOptions {
  double time_limit = 1200.0;
  /// Deterministic cap in work units (transit expansions and edge evaluations).
  std::optional<std::int64_t> work_limit;
  TransitOptions transit;
  DescentOptions descent;
};

WorldState initial_world(const Scenario& s);

PlanResult plan(const Scenario& scenario, Method method, const PlanOptions& opts = {});

/// Independent replay at 10x finer collision sampling. Returns a description of the
/// first violation, or nothing for a valid plan.
std::optional<std::string> find_plan_violation(const RearrangementPlan& plan, const Scenario& scenario);
bool validate_plan(const RearrangementPlan& plan, const Scenario& scenario);

}  // namespace pushplan
