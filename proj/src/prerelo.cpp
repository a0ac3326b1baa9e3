#include "pushplan/prerelo.hpp"

#include <array>
#include <cmath>

namespace pushplan {

std::string_view to_string(SeedKind s) {
  switch (s) {
    case SeedKind::Fillet1: return "fillet_1";
    case SeedKind::Fillet2: return "fillet_2";
    case SeedKind::AxisSample: return "axis_sample";
    case SeedKind::None: return "none";
  }
  return "none";
}

PrereloQuery make_prerelo_query(ObjectId id, const Polygon2D& shape, const Pose2D& start_object,
                                const Pose2D& goal_object, int face_a, int face_b,
                                std::shared_ptr<const ObstacleSet> obstacles, const Workspace& ws,
                                const RobotParams& params) {
  return PrereloQuery{id,
                      shape,
                      pushing_pose(id, start_object, shape, face_a, params),
                      pushing_pose(id, goal_object, shape, face_b, params),
                      std::move(obstacles),
                      ws,
                      params};
}

namespace {

// Per-query constants: contact frames and the robot+object bodies for both legs.
struct Legs {
  const PrereloQuery& q;
  Pose2D contact_a;
  Pose2D contact_b;
  Body body_a;
  Body body_b;

  explicit Legs(const PrereloQuery& query)
      : q(query),
        contact_a(contact_frame(q.shape, q.face_a(), q.params.bumper_offset)),
        contact_b(contact_frame(q.shape, q.face_b(), q.params.bumper_offset)),
        body_a(q.params.body().with(footprint_at(q.shape, inverse(contact_a)))),
        body_b(q.params.body().with(footprint_at(q.shape, inverse(contact_b)))) {}

  Pose2D arrive(const Pose2D& pre) const { return compose(pre, contact_a); }
  Pose2D depart(const Pose2D& pre) const { return compose(pre, contact_b); }

  double cost(const Pose2D& pre) const {
    const double rho = q.params.rho_push;
    return shortest_dubins_length(q.start_push.robot_pose, arrive(pre), rho) +
           shortest_dubins_length(depart(pre), q.goal_push.robot_pose, rho);
  }

  bool feasible(const DubinsPath& p1, const DubinsPath& p2) const {
    return path_collision_free(p1, body_a, *q.obstacles, q.ws) &&
           path_collision_free(p2, body_b, *q.obstacles, q.ws);
  }

  std::optional<PrereloSolution> evaluate(const Pose2D& pre, SeedKind seed) const {
    const double rho = q.params.rho_push;
    auto p1 = shortest_dubins(q.start_push.robot_pose, arrive(pre), rho);
    auto p2 = shortest_dubins(depart(pre), q.goal_push.robot_pose, rho);
    if (!feasible(p1, p2)) {
      return std::nullopt;
    }
    const double cost = p1.length() + p2.length();
    return PrereloSolution{pre, p1, p2, cost, seed, q.face_a(), q.face_b()};
  }
};

Vec2 left_normal(double theta) { return {-std::sin(theta), std::cos(theta)}; }
Vec2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

constexpr double kParallelEps = 1e-12;
constexpr double kAntiParallelEps = 1e-9;

// Solves u * a + v * b = r for the coefficients (u, v).
std::optional<std::pair<double, double>> solve2(const Vec2& a, const Vec2& b, const Vec2& r) {
  const double det = a.cross(b);
  if (std::abs(det) < kParallelEps) {
    return std::nullopt;
  }
  return std::pair{r.cross(b) / det, a.cross(r) / det};
}

double clamp_small_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

// One arc of signed angle `delta` followed by, or preceded by, straight segments along two
// fixed directions. Returns (straight along `first_dir`, straight along `second_dir`).
std::optional<std::pair<double, double>> fillet_lengths(const Vec2& first_dir, const Vec2& second_dir,
                                                        const Vec2& rhs, double delta) {
  if (std::abs(delta) > kPi - kAntiParallelEps) {
    return std::nullopt;
  }
  std::optional<std::pair<double, double>> sol = solve2(first_dir, second_dir, rhs);
  if (!sol) {
    // Parallel legs: only the degenerate collinear case with no turn is reachable.
    if (std::abs(delta) > kParallelEps || std::abs(rhs.cross(first_dir)) > 1e-9) {
      return std::nullopt;
    }
    sol = std::pair{rhs.dot(first_dir), 0.0};
  }
  const double u = clamp_small_negative(sol->first);
  const double v = clamp_small_negative(sol->second);
  if (u < 0.0 || v < 0.0) {
    return std::nullopt;
  }
  return std::pair{u, v};
}

}  // namespace

double prerelo_cost(const PrereloQuery& q, const Pose2D& pre_pose) { return Legs(q).cost(pre_pose); }

std::optional<PrereloSolution> evaluate_prerelocation(const PrereloQuery& q, const Pose2D& pre_pose) {
  return Legs(q).evaluate(pre_pose, SeedKind::None);
}

bool push_leg_feasible(const PrereloQuery& q, const DubinsPath& leg, int face) {
  const Pose2D contact = contact_frame(q.shape, face, q.params.bumper_offset);
  const Body body = q.params.body().with(footprint_at(q.shape, inverse(contact)));
  return path_collision_free(leg, body, *q.obstacles, q.ws);
}

std::optional<PrereloSolution> seed_fillet(const PrereloQuery& q, int variant) {
  const Legs legs(q);
  const double rho = q.params.rho_push;
  const Pose2D& ps = q.start_push.robot_pose;
  const Pose2D& pg = q.goal_push.robot_pose;
  // Rigid offset between the two contact frames at the intermediate pose.
  const Pose2D b_to_a = compose(inverse(legs.contact_b), legs.contact_a);

  if (variant == 1) {
    // p_pre_b = pg - t * h_g; p_pre_a = p_pre_b ∘ b_to_a; P1 = straight s1 then one arc.
    const Pose2D at_goal = compose(pg, b_to_a);
    const double heading_a = at_goal.theta;
    const double delta = normalize_angle(heading_a - ps.theta);
    const double sigma = delta >= 0.0 ? 1.0 : -1.0;
    const Vec2 arc_shift = (left_normal(ps.theta) - left_normal(heading_a)) * (sigma * rho);
    const Vec2 rhs = at_goal.position() - ps.position() - arc_shift;
    const auto lens = fillet_lengths(unit(ps.theta), unit(pg.theta), rhs, delta);
    if (!lens) {
      return std::nullopt;
    }
    const auto [s1, t] = *lens;
    const Pose2D depart{pg.x - t * std::cos(pg.theta), pg.y - t * std::sin(pg.theta), pg.theta};
    const Pose2D pre = compose(depart, inverse(legs.contact_b));
    const DubinsWord word = sigma > 0 ? DubinsWord::LSL : DubinsWord::RSR;
    DubinsPath p1{word, {0.0, s1, std::abs(delta) * rho}, rho, ps};
    DubinsPath p2 = straight_path(depart, t, rho);
    if (!legs.feasible(p1, p2)) {
      return std::nullopt;
    }
    return PrereloSolution{pre, p1, p2, p1.length() + p2.length(), SeedKind::Fillet1, q.face_a(), q.face_b()};
  }
  if (variant == 2) {
    // p_pre_a = ps + u * h_s; p_pre_b = p_pre_a ∘ a_to_b; P2 = one arc then straight s2.
    const Pose2D at_start = compose(ps, inverse(b_to_a));
    const double heading_b = at_start.theta;
    const double delta = normalize_angle(pg.theta - heading_b);
    const double sigma = delta >= 0.0 ? 1.0 : -1.0;
    const Vec2 arc_shift = (left_normal(heading_b) - left_normal(pg.theta)) * (sigma * rho);
    const Vec2 rhs = pg.position() - at_start.position() - arc_shift;
    const auto lens = fillet_lengths(unit(ps.theta), unit(pg.theta), rhs, delta);
    if (!lens) {
      return std::nullopt;
    }
    const auto [u, s2] = *lens;
    const Pose2D arrive{ps.x + u * std::cos(ps.theta), ps.y + u * std::sin(ps.theta), ps.theta};
    const Pose2D pre = compose(arrive, inverse(legs.contact_a));
    const Pose2D depart = legs.depart(pre);
    const DubinsWord word = sigma > 0 ? DubinsWord::LSL : DubinsWord::RSR;
    DubinsPath p1 = straight_path(ps, u, rho);
    DubinsPath p2{word, {std::abs(delta) * rho, s2, 0.0}, rho, depart};
    if (!legs.feasible(p1, p2)) {
      return std::nullopt;
    }
    return PrereloSolution{pre, p1, p2, p1.length() + p2.length(), SeedKind::Fillet2, q.face_a(), q.face_b()};
  }
  throw std::invalid_argument("fillet seed variant must be 1 or 2");
}

namespace {

PrereloSolution descend(const Legs& legs, PrereloSolution incumbent, const DescentOptions& opts) {
  Pose2D x = incumbent.pre_pose;
  // The seed's own legs may not be the shortest Dubins legs; try those first.
  if (legs.cost(x) < incumbent.cost) {
    if (auto sol = legs.evaluate(x, incumbent.seed_used)) {
      incumbent = *sol;
    }
  }
  double pos_step = opts.initial_pos_step;
  double ang_step = opts.initial_ang_step;
  int polls = 0;
  while ((pos_step >= opts.min_pos_step || ang_step >= opts.min_ang_step) && polls < opts.max_polls) {
    const std::array<Pose2D, 6> moves = {
        Pose2D{x.x + pos_step, x.y, x.theta}, Pose2D{x.x - pos_step, x.y, x.theta},
        Pose2D{x.x, x.y + pos_step, x.theta}, Pose2D{x.x, x.y - pos_step, x.theta},
        Pose2D{x.x, x.y, x.theta + ang_step}, Pose2D{x.x, x.y, x.theta - ang_step}};
    bool improved = false;
    for (const auto& cand : moves) {
      ++polls;
      // Cheap objective first; collision checks only for improving candidates.
      if (legs.cost(cand) >= incumbent.cost) {
        continue;
      }
      if (auto sol = legs.evaluate(cand, incumbent.seed_used)) {
        incumbent = *sol;
        x = cand;
        improved = true;
        break;
      }
    }
    if (!improved) {
      pos_step *= opts.shrink;
      ang_step *= opts.shrink;
    }
  }
  return incumbent;
}

Pose2D straight_midpoint(const PrereloQuery& q) {
  const Pose2D s = object_pose_along_push(q.start_push.robot_pose, q.start_push.attach_transform);
  const Pose2D g = object_pose_along_push(q.goal_push.robot_pose, q.goal_push.attach_transform);
  const double heading = std::atan2(std::sin(s.theta) + std::sin(g.theta), std::cos(s.theta) + std::cos(g.theta));
  return {0.5 * (s.x + g.x), 0.5 * (s.y + g.y), heading};
}

}  // namespace

std::optional<PrereloSolution> optimize_prerelocation(const PrereloQuery& q, PrereloStart start,
                                                      const DescentOptions& opts) {
  const Legs legs(q);
  std::vector<PrereloSolution> starts;
  if (start == PrereloStart::FilletSeeds) {
    for (int variant : {1, 2}) {
      if (auto s = seed_fillet(q, variant)) {
        starts.push_back(*s);
      }
    }
  } else if (auto s = legs.evaluate(straight_midpoint(q), SeedKind::None)) {
    starts.push_back(*s);
  }
  if (starts.empty()) {
    return sample_axis_prerelocation(q, q.ws.grid_resolution, q.ws.bounds.diagonal());
  }
  std::optional<PrereloSolution> best;
  for (const auto& s : starts) {
    auto sol = descend(legs, s, opts);
    if (!best || sol.cost < best->cost) {
      best = sol;
    }
  }
  return best;
}

std::optional<PrereloSolution> sample_axis_prerelocation(const PrereloQuery& q, double step, double max_dist) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("axis sampling step must be positive");
  }
  const Legs legs(q);
  const Pose2D start_obj = object_pose_along_push(q.start_push.robot_pose, q.start_push.attach_transform);
  const int faces = static_cast<int>(q.shape.size());
  std::vector<Vec2> axes;
  for (int f = 0; f < faces; ++f) {
    const Pose2D push_frame = compose(start_obj, contact_frame(q.shape, f, q.params.bumper_offset));
    axes.push_back(unit(push_frame.theta));
  }
  const Body object_only({q.shape});
  for (int i = 1; step * i <= max_dist + 1e-12; ++i) {
    const double d = step * i;
    for (int f = 0; f < faces; ++f) {
      const Vec2 c = start_obj.position() + axes[static_cast<std::size_t>(f)] * d;
      const Pose2D pre{c.x, c.y, start_obj.theta};
      // Necessary conditions for both legs, far cheaper than the swept checks.
      if (!pose_clear(pre, object_only, *q.obstacles, q.ws) ||
          !pose_clear(legs.arrive(pre), legs.body_a, *q.obstacles, q.ws) ||
          !pose_clear(legs.depart(pre), legs.body_b, *q.obstacles, q.ws)) {
        continue;
      }
      if (auto sol = legs.evaluate(pre, SeedKind::AxisSample)) {
        return sol;
      }
    }
  }
  return std::nullopt;
}

}  // namespace pushplan
