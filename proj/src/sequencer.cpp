#include "pushplan/sequencer.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>

namespace pushplan {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ReloPush: return "relopush";
    case Method::B: return "b";
    case Method::BO: return "bo";
    case Method::BOSS: return "boss";
  }
  return "boss";
}

Method method_from_string(std::string_view s) {
  for (Method m : {Method::ReloPush, Method::B, Method::BO, Method::BOSS}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

PrereloMethod prerelo_method(Method m) {
  switch (m) {
    case Method::ReloPush:
    case Method::B: return PrereloMethod::AxisSample;
    case Method::BO: return PrereloMethod::Midpoint;
    case Method::BOSS: return PrereloMethod::FilletSeeds;
  }
  return PrereloMethod::FilletSeeds;
}

bool backtracks(Method m) { return m != Method::ReloPush; }

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Transit: return "transit";
    case ActionKind::PushTransfer: return "push_transfer";
    case ActionKind::ObstacleRelocation: return "obstacle_relocation";
  }
  return "transit";
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "none";
    case FailureReason::Timeout: return "timeout";
    case FailureReason::NoSolution: return "no_solution";
  }
  return "none";
}

void RearrangementPlan::recompute_totals() {
  pushing_length = 0.0;
  transit_length = 0.0;
  for (const auto& a : actions) {
    (a.kind == ActionKind::Transit ? transit_length : pushing_length) += a.length();
  }
  total_length = pushing_length + transit_length;
}

WorldState initial_world(const Scenario& s) {
  WorldState w;
  w.robot_pose = s.robot_start;
  for (const auto& o : s.objects) {
    w.object_poses[o.id] = o.start;
    if (o.symmetry.equivalent(o.start, o.goal, 1e-6, 1e-6)) w.done.insert(o.id);
  }
  return w;
}

namespace {

// Queue entry: a lower bound until evaluated, then the exact edge.
struct Entry {
  double key = 0.0;
  ObjectId object_id = 0;
  int goal_face = 0;
  int start_face = 0;
  std::size_t obj = 0;
  std::size_t src = 0;
  std::size_t dst = 0;
  std::shared_ptr<const PTEdge> edge;

  auto rank() const { return std::tuple(key, object_id, goal_face, start_face, src, dst, edge != nullptr); }
  bool operator>(const Entry& o) const { return rank() > o.rank(); }
};

class Planner {
 public:
  Planner(const Scenario& sc, Method method, const PlanOptions& opts)
      : sc_(sc),
        method_(method),
        opts_(opts),
        budget_(opts.time_limit, opts.work_limit),
        body_(sc.robot.body()) {}

  PlanResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult result;
    WorldState w = initial_world(sc_);
    const bool ok = !budget_.expired() && dfs(w, 0);
    if (ok) {
      RearrangementPlan p;
      p.actions = std::move(actions_);
      p.depth_trace = std::move(trace_);
      p.recompute_totals();
      result.plan = std::move(p);
    } else {
      result.failure = (timed_out_ || budget_.expired()) ? FailureReason::Timeout : FailureReason::NoSolution;
    }
    stats_.work = budget_.work();
    stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.stats = stats_;
    return result;
  }

 private:
  std::vector<Polygon2D> footprints(const WorldState& w, std::optional<ObjectId> skip = std::nullopt) const {
    std::vector<Polygon2D> out;
    for (const auto& o : sc_.objects) {
      if (skip && *skip == o.id) continue;
      out.push_back(footprint_at(o.shape, w.object_poses.at(o.id)));
    }
    return out;
  }

  bool transit_to(WorldState& w, const Pose2D& target, std::vector<PlanAction>& acts,
                  TransitFailure* why = nullptr) {
    if (planar_distance(w.robot_pose, target) < 1e-12 &&
        std::abs(normalize_angle(w.robot_pose.theta - target.theta)) < 1e-12) {
      return true;
    }
    auto path = transit_memo_.plan(w.robot_pose, target, ObstacleSet(footprints(w)), sc_.ws, sc_.robot,
                                   opts_.transit, &budget_, why);
    if (!path) {
      if (budget_.expired()) timed_out_ = true;
      return false;
    }
    PlanAction a;
    a.kind = ActionKind::Transit;
    a.transit = std::move(*path);
    w.robot_pose = target;
    acts.push_back(std::move(a));
    return true;
  }

  bool push(WorldState& w, ActionKind kind, const WorldObject& o, int face, const DubinsPath& path,
            std::vector<PlanAction>& acts) {
    const Pose2D attach = inverse(contact_frame(o.shape, face, sc_.robot.bumper_offset));
    const Body body = body_.with(footprint_at(o.shape, attach));
    if (!path_collision_free(path, body, ObstacleSet(footprints(w, o.id)), sc_.ws)) {
      return false;
    }
    PlanAction a;
    a.kind = kind;
    a.object_id = o.id;
    a.face_index = face;
    a.push = path;
    a.object_pose_after = object_pose_along_push(path.end_pose(), attach);
    w.object_poses[o.id] = a.object_pose_after;
    w.robot_pose = path.end_pose();
    acts.push_back(std::move(a));
    return true;
  }

  static Pose2D first_contact(const PTEdge& e) {
    if (!e.relocations.empty()) return e.relocations.front().push.robot_pose;
    return e.prerelo ? e.prerelo->path1.start : e.path.start;
  }

  // Executes one candidate against `w` with the robot already at its first pushing
  // pose. Nothing here depends on where the robot came from.
  bool execute(WorldState& w, const WorldObject& o, const PTEdge& e, int start_face, std::vector<PlanAction>& acts) {
    w.robot_pose = first_contact(e);
    for (const auto& r : e.relocations) {
      const auto& blocker = sc_.object(r.object_id);
      if (!transit_to(w, r.push.robot_pose, acts)) return false;
      if (!push(w, ActionKind::ObstacleRelocation, blocker, r.face_index, r.path, acts)) return false;
    }
    if (e.prerelo) {
      const auto& s = *e.prerelo;
      if (!transit_to(w, s.path1.start, acts)) return false;
      if (!push(w, ActionKind::PushTransfer, o, s.face_a, s.path1, acts)) return false;
      if (!transit_to(w, s.path2.start, acts)) return false;
      if (!push(w, ActionKind::PushTransfer, o, s.face_b, s.path2, acts)) return false;
    } else {
      if (!transit_to(w, e.path.start, acts)) return false;
      if (!push(w, ActionKind::PushTransfer, o, start_face, e.path, acts)) return false;
    }
    w.done.insert(o.id);
    return true;
  }

  // Footprint-level identity of a world, independent of the robot pose and of which
  // symmetric orientation an object rests in.
  std::vector<std::int64_t> state_key(const WorldState& w) const {
    std::vector<std::int64_t> key;
    for (const auto& o : sc_.objects) {
      const Pose2D& p = w.object_poses.at(o.id);
      const double period = kTwoPi / o.symmetry.order;
      double th = std::fmod(p.theta + kTwoPi, period);
      if (period - th < 1e-7) th = 0.0;
      key.push_back(w.done.count(o.id) ? 1 : 0);
      for (double v : {p.x, p.y, th}) key.push_back(std::llround(v * 1e6));
    }
    return key;
  }

  bool dfs(const WorldState& w, int depth) {
    if (w.done.size() == sc_.objects.size()) return true;
    const auto key = state_key(w);
    if (const auto d = dead_.find(key);
        d != dead_.end() && !d->second.count(lattice_cell(w.robot_pose, sc_.ws, opts_.transit.heading_bins))) {
      return false;
    }
    ++stats_.depths_entered;
    bool robot_sensitive = false;
    std::set<std::int64_t> pockets;

    std::vector<WorldObject> movable;
    std::vector<Polygon2D> fixed;
    for (const auto& o : sc_.objects) {
      if (w.done.count(o.id)) {
        fixed.push_back(footprint_at(o.shape, w.object_poses.at(o.id)));
      } else {
        WorldObject m = o;
        m.start = w.object_poses.at(o.id);
        movable.push_back(std::move(m));
      }
    }
    const GraphContext ctx(movable, fixed, sc_.ws, sc_.robot, {prerelo_method(method_), opts_.descent, memo_});
    std::vector<std::vector<PTVertex>> starts;
    std::vector<std::vector<PTVertex>> goals;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (std::size_t i = 0; i < movable.size(); ++i) {
      starts.push_back(ctx.start_vertices(i));
      goals.push_back(ctx.goal_vertices(i));
      for (std::size_t s = 0; s < starts[i].size(); ++s) {
        for (std::size_t g = 0; g < goals[i].size(); ++g) {
          const double lb = ctx.edge_lower_bound(i, starts[i][s], goals[i][g]);
          if (std::isinf(lb)) continue;
          queue.push({lb, movable[i].id, goals[i][g].face_index, starts[i][s].face_index, i, s, g, nullptr});
        }
      }
    }

    auto& edges = edge_cache_[key];
    int tried = 0;
    while (!queue.empty()) {
      if (budget_.expired()) {
        timed_out_ = true;
        return false;
      }
      Entry top = queue.top();
      queue.pop();
      if (!top.edge) {
        // Edges depend on footprints only, so revisits of a state reuse them.
        auto [it, fresh] = edges.try_emplace({top.obj, top.src, top.dst});
        if (fresh) {
          budget_.charge();
          ++stats_.edges_evaluated;
          if (auto e = ctx.evaluate_edge(top.obj, starts[top.obj][top.src], goals[top.obj][top.dst])) {
            it->second.edge = std::make_shared<const PTEdge>(std::move(*e));
          }
        }
        if (it->second.edge) {
          top.key = it->second.edge->weight;
          top.edge = it->second.edge;
          queue.push(std::move(top));
        }
        continue;
      }
      ++tried;
      // The part after the first pushing pose is as cacheable as the edge itself.
      Slot& slot = edges.at({top.obj, top.src, top.dst});
      if (!slot.tail) {
        Tail t{false, w, {}};
        t.ok = execute(t.after, sc_.object(top.object_id), *top.edge, top.start_face, t.actions);
        if (timed_out_) return false;
        slot.tail = std::move(t);
      }
      bool feasible = slot.tail->ok;
      WorldState next = w;
      std::vector<PlanAction> acts;
      if (feasible) {
        TransitFailure why;
        feasible = transit_to(next, first_contact(*top.edge), acts, &why);
        if (timed_out_) return false;
        if (!feasible && why.enclosed) {
          pockets.insert(why.region.begin(), why.region.end());
        } else if (!feasible) {
          robot_sensitive = true;
        }
      }
      if (feasible) {
        next = slot.tail->after;
        const std::size_t mark = actions_.size();
        actions_.insert(actions_.end(), acts.begin(), acts.end());
        actions_.insert(actions_.end(), slot.tail->actions.begin(), slot.tail->actions.end());
        trace_.push_back({depth, top.object_id, top.edge->kind, tried - 1});
        if (dfs(next, depth + 1)) return true;
        if (timed_out_) return false;
        actions_.resize(mark);
        trace_.pop_back();
        ++stats_.backtracks;
      }
      if (!backtracks(method_)) return false;
    }
    // Transits out of the entry pose either succeeded or hit goals enclosed in known
    // pockets, so the subtree fails from any robot pose outside those pockets.
    if (!robot_sensitive) dead_.emplace(key, std::move(pockets));
    return false;
  }

  const Scenario& sc_;
  Method method_;
  PlanOptions opts_;
  Budget budget_;
  Body body_;
  PlanStats stats_;
  bool timed_out_ = false;
  std::vector<PlanAction> actions_;
  std::vector<DepthRecord> trace_;
  std::map<std::vector<std::int64_t>, std::set<std::int64_t>> dead_;
  std::shared_ptr<PrereloMemo> memo_ = std::make_shared<PrereloMemo>();
  TransitMemo transit_memo_;
  struct Tail {
    bool ok = false;
    WorldState after;
    std::vector<PlanAction> actions;
  };
  struct Slot {
    std::shared_ptr<const PTEdge> edge;
    std::optional<Tail> tail;
  };
  using SlotKey = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::map<std::vector<std::int64_t>, std::map<SlotKey, Slot>> edge_cache_;
};

}  // namespace

PlanResult plan(const Scenario& scenario, Method method, const PlanOptions& opts) {
  validate_scenario(scenario);
  return Planner(scenario, method, opts).run();
}

namespace {

constexpr double kReplayStep = kCollisionStep / 10;
constexpr double kTol = 1e-6;

bool same_pose(const Pose2D& a, const Pose2D& b) {
  return planar_distance(a, b) <= kTol && std::abs(normalize_angle(a.theta - b.theta)) <= kTol;
}

std::string at(std::size_t i) { return "action " + std::to_string(i) + ": "; }

}  // namespace

std::optional<std::string> find_plan_violation(const RearrangementPlan& plan, const Scenario& sc) {
  try {
    validate_scenario(sc);
  } catch (const ScenarioError& e) {
    return std::string("invalid scenario: ") + e.what();
  }
  std::map<ObjectId, Pose2D> poses;
  for (const auto& o : sc.objects) poses[o.id] = o.start;
  Pose2D robot = sc.robot_start;
  const auto robot_parts = sc.robot.body().parts();

  auto clear = [&](const std::vector<Polygon2D>& parts, std::optional<ObjectId> skip) -> bool {
    for (const auto& fp : parts) {
      if (!inside_workspace(fp, sc.ws)) return false;
      for (const auto& o : sc.objects) {
        if (skip && *skip == o.id) continue;
        if (polygons_intersect(fp, footprint_at(o.shape, poses.at(o.id)))) return false;
      }
    }
    return true;
  };

  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const auto& a = plan.actions[i];
    if (a.kind == ActionKind::Transit) {
      const auto& t = a.transit;
      if (t.waypoints.size() != t.arcs.size() + 1) return at(i) + "malformed transit";
      if (!same_pose(t.waypoints.front(), robot)) return at(i) + "transit does not start at the robot pose";
      double len = 0.0;
      for (std::size_t k = 0; k < t.arcs.size(); ++k) {
        if (std::abs(t.arcs[k].curvature) > 1.0 / sc.robot.rho_transit + 1e-9) {
          return at(i) + "transit curvature above 1/rho_transit";
        }
        if (t.arcs[k].length < 0.0) return at(i) + "negative arc length";
        if (!same_pose(arc_pose(t.waypoints[k], t.arcs[k], t.arcs[k].length), t.waypoints[k + 1])) {
          return at(i) + "transit arcs do not join waypoints";
        }
        len += t.arcs[k].length;
      }
      if (std::abs(len - t.length) > kTol) return at(i) + "transit length mismatch";
      for (const auto& p : t.sample(kReplayStep)) {
        std::vector<Polygon2D> parts;
        for (const auto& part : robot_parts) parts.push_back(footprint_at(part, p));
        if (!clear(parts, std::nullopt)) return at(i) + "transit collides";
      }
      robot = t.waypoints.back();
      continue;
    }
    if (!a.object_id || !poses.count(*a.object_id)) return at(i) + "push without a known object";
    const auto& o = sc.object(*a.object_id);
    if (a.face_index < 0 || a.face_index >= static_cast<int>(o.shape.size())) return at(i) + "bad face index";
    if (a.push.radius < sc.robot.rho_push - 1e-9) return at(i) + "push radius below rho_push";
    if (a.kind == ActionKind::ObstacleRelocation && a.push.total_turning() != 0.0) {
      return at(i) + "obstacle relocation is not a straight push";
    }
    if (!same_pose(a.push.start, robot)) return at(i) + "push does not start at the robot pose";
    const Pose2D attach = inverse(contact_frame(o.shape, a.face_index, sc.robot.bumper_offset));
    if (!same_pose(compose(a.push.start, attach), poses.at(o.id))) return at(i) + "robot is not at a pushing pose";
    for (const auto& p : sample_path(a.push, kReplayStep)) {
      std::vector<Polygon2D> parts;
      for (const auto& part : robot_parts) parts.push_back(footprint_at(part, p));
      parts.push_back(footprint_at(o.shape, compose(p, attach)));
      if (!clear(parts, o.id)) return at(i) + "push collides";
    }
    robot = a.push.end_pose();
    poses[o.id] = compose(robot, attach);
    if (!same_pose(poses[o.id], a.object_pose_after)) return at(i) + "recorded object pose disagrees with replay";
  }
  for (const auto& o : sc.objects) {
    if (!o.symmetry.equivalent(poses.at(o.id), o.goal, kTol, kTol)) {
      return "object " + std::to_string(o.id) + " is not at its goal";
    }
  }
  return std::nullopt;
}

bool validate_plan(const RearrangementPlan& plan, const Scenario& scenario) {
  return !find_plan_violation(plan, scenario).has_value();
}

}  // namespace pushplan
