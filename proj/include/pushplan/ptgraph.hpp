#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pushplan/budget.hpp"
#include "pushplan/prerelo.hpp"

namespace pushplan {

/// A movable object as seen by one graph build: its current pose is `start`.
struct WorldObject {
  ObjectId id = 0;
  Polygon2D shape = Polygon2D::square(0.15);
  Pose2D start;
  Pose2D goal;
  SymmetryGroup symmetry;
};

enum class VertexConfig { Start, Goal };

struct PTVertex {
  ObjectId object_id = 0;
  VertexConfig config = VertexConfig::Start;
  int face_index = 0;
  /// Object pose this vertex pushes; for goal vertices, the symmetry variant used.
  Pose2D object_pose;
  PushingPose pose;
};

enum class EdgeKind { Direct, Prerelocated, BlockedChain };
std::string_view to_string(EdgeKind k);

/// Straight clearing push of a blocking object.
struct Relocation {
  ObjectId object_id = 0;
  int face_index = 0;
  double distance = 0.0;
  Pose2D from;
  Pose2D to;
  PushingPose push;
  DubinsPath path;
};

enum class PrereloMethod { None, AxisSample, Midpoint, FilletSeeds };

/// Runs the prerelocation solver selected by `method`; None always fails.
std::optional<PrereloSolution> solve_prerelocation(const PrereloQuery& q, PrereloMethod method,
                                                   const DescentOptions& descent);

/// Prerelocation results kept across obstacle layouts of one planning run.
class PrereloMemo {
 public:
  std::optional<PrereloSolution> solve(const PrereloQuery& q, PrereloMethod method, const DescentOptions& descent);
  std::size_t hits() const { return hits_; }

 private:
  using Key = std::array<double, 10>;
  std::map<Key, std::vector<std::pair<ReplayCertificate, std::optional<PrereloSolution>>>> known_;
  std::size_t hits_ = 0;
};

struct GraphOptions {
  PrereloMethod prerelo = PrereloMethod::FilletSeeds;
  DescentOptions descent;
  /// Optional, shared by every graph built during one planning run.
  std::shared_ptr<PrereloMemo> memo;
};

struct PTEdge {
  int src = -1;
  int dst = -1;
  double weight = 0.0;
  EdgeKind kind = EdgeKind::Direct;
  /// Transfer path for direct and blocked_chain edges.
  DubinsPath path;
  std::optional<PrereloSolution> prerelo;
  std::vector<ObjectId> blockers;
  /// Clearing pushes for the blockers, in execution order.
  std::vector<Relocation> relocations;
  /// Object pose after the transfer (symmetry-equivalent to the goal).
  Pose2D final_object_pose;
};

class PTGraph {
 public:
  const std::vector<PTVertex>& vertices() const { return vertices_; }
  const std::vector<PTEdge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int v) const { return out_[static_cast<std::size_t>(v)]; }
  std::vector<int> vertices_of(ObjectId id, VertexConfig config) const;
  /// Plain-text adjacency listing, one edge per line.
  std::string dump() const;

  int add_vertex(PTVertex v);
  int add_edge(PTEdge e);

 private:
  std::vector<PTVertex> vertices_;
  std::vector<PTEdge> edges_;
  std::vector<std::vector<int>> out_;
};

/// Everything an edge evaluation needs about the current world: movable objects at
/// their current poses plus fixed obstacles (objects already at their goals).
class GraphContext {
 public:
  GraphContext(std::vector<WorldObject> movable, std::vector<Polygon2D> fixed, Workspace ws, RobotParams params,
               GraphOptions opts = {});

  const std::vector<WorldObject>& movable() const { return movable_; }
  const Workspace& ws() const { return ws_; }
  const RobotParams& params() const { return params_; }
  const GraphOptions& options() const { return opts_; }

  std::vector<PTVertex> start_vertices(std::size_t obj) const;
  /// Goal pushing poses over all symmetry variants, deduplicated by robot pose.
  std::vector<PTVertex> goal_vertices(std::size_t obj) const;

  /// Edge between a start and a goal vertex of object `obj`: the first feasible of
  /// direct, prerelocated and blocked_chain, in that order.
  std::optional<PTEdge> evaluate_edge(std::size_t obj, const PTVertex& src, const PTVertex& dst) const;
  /// Lower bound on the weight of any edge evaluate_edge could return.
  double edge_lower_bound(std::size_t obj, const PTVertex& src, const PTVertex& dst) const;

  /// Footprints of every object except `obj` (fixed ones included).
  const ObstacleSet& others(std::size_t obj) const { return others_[obj]; }
  const ObstacleSet& fixed() const { return fixed_; }

 private:
  std::vector<WorldObject> movable_;
  std::vector<Polygon2D> footprints_;
  ObstacleSet fixed_;
  std::vector<ObstacleSet> others_;
  std::vector<std::shared_ptr<const ObstacleSet>> others_shared_;
  Workspace ws_;
  RobotParams params_;
  GraphOptions opts_;
};

/// Throws std::invalid_argument when two start footprints overlap.
PTGraph build_graph(std::span<const WorldObject> world, const Workspace& ws, const RobotParams& params,
                    const GraphOptions& opts = {}, std::span<const Polygon2D> fixed = {});
PTGraph build_graph(const GraphContext& ctx, Budget* budget = nullptr);

struct RearrangementCandidate {
  ObjectId object_id = 0;
  std::vector<int> vertex_path;
  std::vector<int> edge_path;
  double push_length = 0.0;
  std::vector<Relocation> required_relocations;
};

/// Candidates from every start vertex to every reachable goal vertex of `object_id`,
/// ascending by push length (ties by goal face, then start face).
std::vector<RearrangementCandidate> search_rearrangement(const PTGraph& graph, ObjectId object_id);

/// Minimal straight push along one of the blocker's contact normals, sampled at
/// ws.grid_resolution up to the workspace diagonal, that leaves the blocker clear of
/// `forbidden`, `others` and the walls. The push itself must be collision-free.
std::optional<Relocation> plan_obstacle_relocation(ObjectId blocker_id, const Pose2D& blocker_pose,
                                                   const Polygon2D& shape, std::span<const Polygon2D> forbidden,
                                                   const ObstacleSet& others, const Workspace& ws,
                                                   const RobotParams& params);

/// Swept region of a body along a path, one hull per part and sample interval.
std::vector<Polygon2D> swept_region(const DubinsPath& path, const Body& body, double step = kCollisionStep);

}  // namespace pushplan
