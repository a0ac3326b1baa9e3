#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pushplan/budget.hpp"
#include "pushplan/dubins.hpp"
#include "pushplan/push_model.hpp"

namespace pushplan {

/// Constant-curvature piece of a transit path. `curvature` is signed (left positive)
/// with respect to the direction of travel; `direction` is +1 forward, -1 reverse.
struct TransitArc {
  double length = 0.0;
  double curvature = 0.0;
  int direction = 1;
};

/// Pose after driving `s` meters along `arc` from `start`.
Pose2D arc_pose(const Pose2D& start, const TransitArc& arc, double s);

/// Waypoint i and i+1 are joined by arcs[i].
struct TransitPath {
  std::vector<Pose2D> waypoints;
  std::vector<TransitArc> arcs;
  double length = 0.0;
  double radius_used = 0.0;

  /// Poses along the path spaced at most `step` apart, waypoints included.
  std::vector<Pose2D> sample(double step) const;
  bool uses_reverse() const;
};

struct TransitOptions {
  bool allow_reverse = true;
  int heading_bins = 16;
  /// Analytic Dubins shots are tried every `shot_interval` expansions and always
  /// within `shot_radius` of the goal.
  int shot_interval = 8;
  double shot_radius = 1.5;
  int max_expansions = 60000;
  /// With reversing allowed, also search from the goal, alternating expansions.
  bool bidirectional = true;
};

/// Why a transit failed. `enclosed` means the goal is cut off from every pose outside
/// `region` (lattice cells, see lattice_cell); a blocked goal pose has an empty region.
struct TransitFailure {
  bool enclosed = false;
  std::vector<std::int64_t> region;
};

/// Index of the (x, y, heading) lattice cell containing `p`.
std::int64_t lattice_cell(const Pose2D& p, const Workspace& ws, int heading_bins);

std::optional<TransitPath> plan_transit(const Pose2D& start, const Pose2D& goal, const ObstacleSet& obstacles,
                                        const Workspace& ws, const RobotParams& params,
                                        const TransitOptions& opts = {}, Budget* budget = nullptr,
                                        TransitFailure* why = nullptr);
std::optional<TransitPath> plan_transit(const Pose2D& start, const Pose2D& goal,
                                        std::span<const Polygon2D> obstacles, const Workspace& ws,
                                        const RobotParams& params, const TransitOptions& opts = {},
                                        Budget* budget = nullptr);

/// Swept check of a whole transit path at the given step.
bool transit_clear(const TransitPath& path, const Body& body, const ObstacleSet& obstacles, const Workspace& ws,
                   double step = 0.05);

/// plan_transit with results kept across obstacle layouts. A stored result is returned
/// when the search would replay identically, and a stored path is also reused while it
/// stays clear. Workspace, robot and options must be the same on every call.
class TransitMemo {
 public:
  std::optional<TransitPath> plan(const Pose2D& start, const Pose2D& goal, const ObstacleSet& obstacles,
                                  const Workspace& ws, const RobotParams& params, const TransitOptions& opts = {},
                                  Budget* budget = nullptr, TransitFailure* why = nullptr);
  std::size_t hits() const { return hits_; }

 private:
  struct Known {
    ReplayCertificate cert;
    std::optional<TransitPath> path;
    TransitFailure why;
  };
  std::map<std::array<double, 6>, std::vector<Known>> known_;
  std::size_t hits_ = 0;
};

/// Transit path that follows a forward Dubins path (or a reversed one).
TransitPath transit_from_dubins(const DubinsPath& path, bool reverse);

}  // namespace pushplan
