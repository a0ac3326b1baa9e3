#include "pushplan/ptgraph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pushplan {

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Direct: return "direct";
    case EdgeKind::Prerelocated: return "prerelocated";
    case EdgeKind::BlockedChain: return "blocked_chain";
  }
  return "direct";
}

int PTGraph::add_vertex(PTVertex v) {
  vertices_.push_back(std::move(v));
  out_.emplace_back();
  return static_cast<int>(vertices_.size() - 1);
}

int PTGraph::add_edge(PTEdge e) {
  if (e.src < 0 || e.dst < 0 || e.src >= static_cast<int>(vertices_.size()) ||
      e.dst >= static_cast<int>(vertices_.size())) {
    throw std::out_of_range("edge endpoint out of range");
  }
  if (vertices_[static_cast<std::size_t>(e.src)].config != VertexConfig::Start) {
    throw std::invalid_argument("edges must originate from a start vertex");
  }
  edges_.push_back(std::move(e));
  const int id = static_cast<int>(edges_.size() - 1);
  out_[static_cast<std::size_t>(edges_.back().src)].push_back(id);
  return id;
}

std::vector<int> PTGraph::vertices_of(ObjectId id, VertexConfig config) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].object_id == id && vertices_[i].config == config) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::string PTGraph::dump() const {
  std::ostringstream os;
  char buf[256];
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    const auto& p = v.pose.robot_pose;
    std::snprintf(buf, sizeof buf, "v%zu obj=%d %s face=%d robot=(%.6f, %.6f, %.6f)\n", i, v.object_id,
                  v.config == VertexConfig::Start ? "start" : "goal", v.face_index, p.x, p.y, p.theta);
    os << buf;
  }
  for (const auto& e : edges_) {
    std::snprintf(buf, sizeof buf, "v%d -> v%d %s w=%.6f", e.src, e.dst, std::string(to_string(e.kind)).c_str(),
                  e.weight);
    os << buf;
    if (!e.blockers.empty()) {
      os << " blockers=";
      for (std::size_t i = 0; i < e.blockers.size(); ++i) {
        os << (i ? "," : "") << e.blockers[i];
      }
    }
    os << '\n';
  }
  return os.str();
}

namespace {

// Clearance demanded between a relocated blocker and the hull-approximated swept
// region; covers the arc bulge between 0.05 m samples.
constexpr double kForbiddenMargin = 1e-3;
constexpr double kEquivTol = 1e-6;

Body pushing_body(const RobotParams& params, const Polygon2D& shape, const Pose2D& attach) {
  return params.body().with(footprint_at(shape, attach));
}

}  // namespace

std::optional<PrereloSolution> solve_prerelocation(const PrereloQuery& q, PrereloMethod method,
                                                   const DescentOptions& descent) {
  switch (method) {
    case PrereloMethod::AxisSample: return sample_axis_prerelocation(q, q.ws.grid_resolution, q.ws.bounds.diagonal());
    case PrereloMethod::Midpoint: return optimize_prerelocation(q, PrereloStart::Midpoint, descent);
    case PrereloMethod::FilletSeeds: return optimize_prerelocation(q, PrereloStart::FilletSeeds, descent);
    case PrereloMethod::None: break;
  }
  return std::nullopt;
}

std::optional<PrereloSolution> PrereloMemo::solve(const PrereloQuery& q, PrereloMethod method,
                                                  const DescentOptions& descent) {
  const auto& a = q.start_push.robot_pose;
  const auto& b = q.goal_push.robot_pose;
  const Key key{static_cast<double>(q.object_id), static_cast<double>(method), static_cast<double>(q.face_a()),
                static_cast<double>(q.face_b()), a.x, a.y, a.theta, b.x, b.y, b.theta};
  auto& known = known_[key];
  for (const auto& [cert, sol] : known) {
    if (sol ? cert.replays_on(*q.obstacles) : cert.rejections_hold_on(*q.obstacles)) {
      ++hits_;
      return sol;
    }
  }
  CheckTrace trace(q.obstacles->size());
  q.obstacles->record(&trace);
  auto sol = solve_prerelocation(q, method, descent);
  q.obstacles->record(nullptr);
  known.emplace_back(ReplayCertificate::from(*q.obstacles, trace), sol);
  return sol;
}

GraphContext::GraphContext(std::vector<WorldObject> movable, std::vector<Polygon2D> fixed, Workspace ws,
                           RobotParams params, GraphOptions opts)
    : movable_(std::move(movable)), fixed_(fixed), ws_(ws), params_(std::move(params)), opts_(opts) {
  for (const auto& o : movable_) {
    footprints_.push_back(footprint_at(o.shape, o.start));
  }
  for (std::size_t i = 0; i < footprints_.size(); ++i) {
    for (std::size_t j = i + 1; j < footprints_.size(); ++j) {
      if (polygons_intersect(footprints_[i], footprints_[j])) {
        throw std::invalid_argument("object footprints overlap: " + std::to_string(movable_[i].id) + " and " +
                                    std::to_string(movable_[j].id));
      }
    }
  }
  for (std::size_t i = 0; i < movable_.size(); ++i) {
    std::vector<Polygon2D> polys = fixed;
    for (std::size_t j = 0; j < footprints_.size(); ++j) {
      if (j != i) polys.push_back(footprints_[j]);
    }
    others_.emplace_back(polys);
    others_shared_.push_back(std::make_shared<const ObstacleSet>(std::move(polys)));
  }
}

std::vector<PTVertex> GraphContext::start_vertices(std::size_t obj) const {
  const auto& o = movable_.at(obj);
  std::vector<PTVertex> out;
  for (auto& pp : pushing_poses(o.id, o.start, o.shape, params_)) {
    out.push_back({o.id, VertexConfig::Start, pp.face_index, o.start, pp});
  }
  return out;
}

std::vector<PTVertex> GraphContext::goal_vertices(std::size_t obj) const {
  const auto& o = movable_.at(obj);
  std::vector<PTVertex> out;
  for (const auto& variant : o.symmetry.variants(o.goal)) {
    for (auto& pp : pushing_poses(o.id, variant, o.shape, params_)) {
      const bool dup = std::any_of(out.begin(), out.end(), [&](const PTVertex& v) {
        return planar_distance(v.pose.robot_pose, pp.robot_pose) < 1e-9 &&
               std::abs(normalize_angle(v.pose.robot_pose.theta - pp.robot_pose.theta)) < 1e-9;
      });
      if (!dup) out.push_back({o.id, VertexConfig::Goal, pp.face_index, variant, pp});
    }
  }
  return out;
}

double GraphContext::edge_lower_bound(std::size_t obj, const PTVertex& src, const PTVertex& dst) const {
  const auto& o = movable_.at(obj);
  const double rho = params_.rho_push;
  double lb = std::numeric_limits<double>::infinity();
  const Pose2D direct_end = object_pose_along_push(dst.pose.robot_pose, src.pose.attach_transform);
  if (o.symmetry.equivalent(direct_end, o.goal, kEquivTol, kEquivTol)) {
    lb = shortest_dubins_length(src.pose.robot_pose, dst.pose.robot_pose, rho);
  }
  if (opts_.prerelo != PrereloMethod::None) {
    double reach = 0.0;
    for (int f = 0; f < static_cast<int>(o.shape.size()); ++f) {
      reach = std::max(reach, contact_frame(o.shape, f, params_.bumper_offset).position().norm());
    }
    double rot = kPi;
    for (const auto& v : o.symmetry.variants(o.goal)) {
      rot = std::min(rot, std::abs(normalize_angle(v.theta - o.start.theta)));
    }
    const double disp = (o.goal.position() - o.start.position()).norm() * rho / (rho + reach);
    lb = std::min(lb, std::max(rho * rot, disp));
  }
  return lb;
}

std::optional<PTEdge> GraphContext::evaluate_edge(std::size_t obj, const PTVertex& src, const PTVertex& dst) const {
  const auto& o = movable_.at(obj);
  const double rho = params_.rho_push;
  const Body body = pushing_body(params_, o.shape, src.pose.attach_transform);
  const DubinsPath direct = shortest_dubins(src.pose.robot_pose, dst.pose.robot_pose, rho);
  const Pose2D direct_end = object_pose_along_push(direct.end_pose(), src.pose.attach_transform);
  const bool direct_lands = o.symmetry.equivalent(direct_end, o.goal, kEquivTol, kEquivTol);

  PTEdge edge;
  edge.kind = EdgeKind::Direct;
  if (direct_lands && path_collision_free(direct, body, others_[obj], ws_)) {
    edge.weight = direct.length();
    edge.path = direct;
    edge.final_object_pose = direct_end;
    return edge;
  }

  if (opts_.prerelo != PrereloMethod::None) {
    const int faces = static_cast<int>(o.shape.size());
    for (int i = 0; i < faces; ++i) {
      const int b = (dst.face_index + i) % faces;
      const Pose2D contact_b = contact_frame(o.shape, b, params_.bumper_offset);
      const Pose2D goal_obj = compose(dst.pose.robot_pose, inverse(contact_b));
      if (!o.symmetry.equivalent(goal_obj, o.goal, kEquivTol, kEquivTol)) continue;
      PrereloQuery q{o.id, o.shape, src.pose, PushingPose{o.id, b, dst.pose.robot_pose, inverse(contact_b)},
                     others_shared_[obj], ws_, params_};
      auto sol = opts_.memo ? opts_.memo->solve(q, opts_.prerelo, opts_.descent)
                            : solve_prerelocation(q, opts_.prerelo, opts_.descent);
      if (sol) {
        edge.kind = EdgeKind::Prerelocated;
        edge.weight = sol->cost;
        edge.final_object_pose = object_pose_along_push(sol->path2.end_pose(), q.goal_push.attach_transform);
        edge.prerelo = std::move(sol);
        return edge;
      }
    }
  }

  // Only movable objects may obstruct a blocked transfer; walls and placed objects rule it out.
  if (!direct_lands || !path_collision_free(direct, body, fixed_, ws_)) {
    return std::nullopt;
  }
  std::vector<std::size_t> blockers;
  for (std::size_t j = 0; j < movable_.size(); ++j) {
    if (j == obj) continue;
    const ObstacleSet single({footprints_[j]});
    if (!path_collision_free(direct, body, single, ws_)) blockers.push_back(j);
  }
  if (blockers.empty()) {
    return std::nullopt;
  }
  const auto forbidden = swept_region(direct, body);
  std::vector<Polygon2D> current = footprints_;
  std::vector<Relocation> relocations;
  double weight = direct.length();
  for (std::size_t j : blockers) {
    std::vector<Polygon2D> polys = fixed_.polygons();
    for (std::size_t k = 0; k < current.size(); ++k) {
      if (k != j) polys.push_back(current[k]);
    }
    auto reloc = plan_obstacle_relocation(movable_[j].id, movable_[j].start, movable_[j].shape, forbidden,
                                          ObstacleSet(std::move(polys)), ws_, params_);
    if (!reloc) return std::nullopt;
    current[j] = footprint_at(movable_[j].shape, reloc->to);
    weight += reloc->distance;
    edge.blockers.push_back(movable_[j].id);
    relocations.push_back(std::move(*reloc));
  }
  edge.kind = EdgeKind::BlockedChain;
  edge.weight = weight;
  edge.path = direct;
  edge.relocations = std::move(relocations);
  edge.final_object_pose = direct_end;
  return edge;
}

PTGraph build_graph(const GraphContext& ctx, Budget* budget) {
  PTGraph g;
  for (std::size_t i = 0; i < ctx.movable().size(); ++i) {
    std::vector<int> starts;
    std::vector<int> goals;
    for (auto& v : ctx.start_vertices(i)) starts.push_back(g.add_vertex(v));
    for (auto& v : ctx.goal_vertices(i)) goals.push_back(g.add_vertex(v));
    for (int s : starts) {
      for (int t : goals) {
        if (budget) {
          budget->charge();
          if (budget->expired()) return g;
        }
        const auto& vs = g.vertices()[static_cast<std::size_t>(s)];
        const auto& vt = g.vertices()[static_cast<std::size_t>(t)];
        if (auto e = ctx.evaluate_edge(i, vs, vt)) {
          e->src = s;
          e->dst = t;
          g.add_edge(std::move(*e));
        }
      }
    }
  }
  return g;
}

PTGraph build_graph(std::span<const WorldObject> world, const Workspace& ws, const RobotParams& params,
                    const GraphOptions& opts, std::span<const Polygon2D> fixed) {
  const GraphContext ctx({world.begin(), world.end()}, {fixed.begin(), fixed.end()}, ws, params, opts);
  return build_graph(ctx);
}

std::vector<RearrangementCandidate> search_rearrangement(const PTGraph& graph, ObjectId object_id) {
  const auto& verts = graph.vertices();
  const auto goals = graph.vertices_of(object_id, VertexConfig::Goal);
  std::vector<RearrangementCandidate> out;
  std::vector<std::pair<int, int>> order;  // (goal face, start face) per candidate
  for (int s : graph.vertices_of(object_id, VertexConfig::Start)) {
    // Dijkstra from one start vertex.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(verts.size(), inf);
    std::vector<int> via(verts.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(s)] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[static_cast<std::size_t>(v)]) continue;
      for (int ei : graph.out_edges(v)) {
        const auto& e = graph.edges()[static_cast<std::size_t>(ei)];
        const double nd = d + e.weight;
        if (nd < dist[static_cast<std::size_t>(e.dst)]) {
          dist[static_cast<std::size_t>(e.dst)] = nd;
          via[static_cast<std::size_t>(e.dst)] = ei;
          pq.push({nd, e.dst});
        }
      }
    }
    for (int t : goals) {
      if (dist[static_cast<std::size_t>(t)] == inf) continue;
      RearrangementCandidate c;
      c.object_id = object_id;
      c.push_length = dist[static_cast<std::size_t>(t)];
      for (int v = t; v != s;) {
        const int ei = via[static_cast<std::size_t>(v)];
        c.edge_path.push_back(ei);
        c.vertex_path.push_back(v);
        v = graph.edges()[static_cast<std::size_t>(ei)].src;
      }
      c.vertex_path.push_back(s);
      std::reverse(c.vertex_path.begin(), c.vertex_path.end());
      std::reverse(c.edge_path.begin(), c.edge_path.end());
      for (int ei : c.edge_path) {
        const auto& rel = graph.edges()[static_cast<std::size_t>(ei)].relocations;
        c.required_relocations.insert(c.required_relocations.end(), rel.begin(), rel.end());
      }
      order.emplace_back(verts[static_cast<std::size_t>(t)].face_index, verts[static_cast<std::size_t>(s)].face_index);
      out.push_back(std::move(c));
    }
  }
  std::vector<std::size_t> idx(out.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (out[a].push_length != out[b].push_length) return out[a].push_length < out[b].push_length;
    return order[a] < order[b];
  });
  std::vector<RearrangementCandidate> sorted;
  for (std::size_t i : idx) sorted.push_back(std::move(out[i]));
  return sorted;
}

std::vector<Polygon2D> swept_region(const DubinsPath& path, const Body& body, double step) {
  std::vector<Polygon2D> out;
  const auto samples = segment_samples(path, step);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    auto hulls = swept_hulls(samples[i - 1].pose, samples[i].pose, body);
    out.insert(out.end(), std::make_move_iterator(hulls.begin()), std::make_move_iterator(hulls.end()));
  }
  if (samples.size() == 1) {
    for (const auto& part : body.parts()) out.push_back(footprint_at(part, samples[0].pose));
  }
  return out;
}

std::optional<Relocation> plan_obstacle_relocation(ObjectId blocker_id, const Pose2D& blocker_pose,
                                                   const Polygon2D& shape, std::span<const Polygon2D> forbidden,
                                                   const ObstacleSet& others, const Workspace& ws,
                                                   const RobotParams& params) {
  const double step = ws.grid_resolution;
  const double max_dist = ws.bounds.diagonal();
  const auto pushes = pushing_poses(blocker_id, blocker_pose, shape, params);
  const ObstacleSet forbid({forbidden.begin(), forbidden.end()});
  const Body object_only({shape});
  for (int i = 1; step * i <= max_dist + 1e-12; ++i) {
    const double d = step * i;
    for (const auto& pp : pushes) {
      const Pose2D h = pp.robot_pose;
      const Pose2D to{blocker_pose.x + d * std::cos(h.theta), blocker_pose.y + d * std::sin(h.theta),
                      blocker_pose.theta};
      if (!pose_clear(to, object_only, others, ws)) continue;
      const auto fp = footprint_at(shape, to);
      bool clear = true;
      forbid.for_each_near(fp.centroid(), shape.reach() + kForbiddenMargin, [&](std::size_t k) {
        clear = convex_separated(fp.vertices(), forbid.polygons()[k].vertices(), kForbiddenMargin);
        return clear;
      });
      if (!clear) continue;
      const auto path = straight_path(h, d, params.rho_push);
      if (!path_collision_free(path, pushing_body(params, shape, pp.attach_transform), others, ws)) continue;
      return Relocation{blocker_id, pp.face_index, d, blocker_pose, to, pp, path};
    }
  }
  return std::nullopt;
}

}  // namespace pushplan
