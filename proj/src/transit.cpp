#include "pushplan/transit.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace pushplan {

Pose2D arc_pose(const Pose2D& start, const TransitArc& arc, double s) {
  const double d = arc.direction >= 0 ? 1.0 : -1.0;
  if (std::abs(arc.curvature) < 1e-12) {
    return {start.x + d * s * std::cos(start.theta), start.y + d * s * std::sin(start.theta), start.theta};
  }
  const double th = start.theta + d * arc.curvature * s;
  return {start.x + (std::sin(th) - std::sin(start.theta)) / arc.curvature,
          start.y - (std::cos(th) - std::cos(start.theta)) / arc.curvature, th};
}

std::vector<Pose2D> TransitPath::sample(double step) const {
  if (step <= 0.0) {
    throw std::invalid_argument("sample step must be positive");
  }
  std::vector<Pose2D> out;
  if (waypoints.empty()) return out;
  out.push_back(waypoints.front());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const int n = std::max(1, static_cast<int>(std::ceil(arcs[i].length / step)));
    for (int k = 1; k < n; ++k) {
      out.push_back(arc_pose(waypoints[i], arcs[i], arcs[i].length * k / n));
    }
    out.push_back(waypoints[i + 1]);
  }
  return out;
}

bool TransitPath::uses_reverse() const {
  for (const auto& a : arcs) {
    if (a.direction < 0 && a.length > 0.0) return true;
  }
  return false;
}

namespace {

Pose2D flip(const Pose2D& p) { return {p.x, p.y, p.theta + kPi}; }

Body flipped(const Body& b) {
  std::vector<Polygon2D> parts;
  for (const auto& p : b.parts()) {
    parts.push_back(footprint_at(p, {0, 0, kPi}));
  }
  return Body(std::move(parts));
}

// Rebuilds waypoints by propagating arcs so that consecutive waypoints are exactly
// joined; merges adjacent arcs with identical curvature and direction.
TransitPath assemble(const Pose2D& start, const Pose2D& goal, const std::vector<TransitArc>& raw, double radius) {
  TransitPath out;
  out.radius_used = radius;
  for (const auto& a : raw) {
    if (a.length <= 0.0) continue;
    if (!out.arcs.empty() && out.arcs.back().direction == a.direction &&
        out.arcs.back().curvature == a.curvature) {
      out.arcs.back().length += a.length;
    } else {
      out.arcs.push_back(a);
    }
  }
  out.waypoints.push_back(start);
  for (const auto& a : out.arcs) {
    out.waypoints.push_back(arc_pose(out.waypoints.back(), a, a.length));
    out.length += a.length;
  }
  out.waypoints.back() = goal;
  return out;
}

struct Node {
  Pose2D pose;
  double g = 0.0;
  int parent = -1;
  TransitArc arc;
};

struct Entry {
  double f;
  std::uint64_t seq;
  int node;
  bool operator>(const Entry& o) const { return f != o.f ? f > o.f : seq > o.seq; }
};

}  // namespace

TransitPath transit_from_dubins(const DubinsPath& path, bool reverse) {
  std::vector<TransitArc> arcs;
  const auto kinds = segment_kinds(path.word);
  for (std::size_t i = 0; i < 3; ++i) {
    double k = 0.0;
    if (kinds[i] == SegmentKind::Left) k = 1.0 / path.radius;
    if (kinds[i] == SegmentKind::Right) k = -1.0 / path.radius;
    arcs.push_back(reverse ? TransitArc{path.seg_lengths[i], -k, -1} : TransitArc{path.seg_lengths[i], k, 1});
  }
  const Pose2D s = reverse ? flip(path.start) : path.start;
  const Pose2D e = reverse ? flip(path.end_pose()) : path.end_pose();
  return assemble(s, e, arcs, path.radius);
}

std::optional<TransitPath> plan_transit(const Pose2D& start, const Pose2D& goal, std::span<const Polygon2D> obstacles,
                                        const Workspace& ws, const RobotParams& params, const TransitOptions& opts,
                                        Budget* budget) {
  return plan_transit(start, goal, ObstacleSet({obstacles.begin(), obstacles.end()}), ws, params, opts, budget);
}

std::int64_t lattice_cell(const Pose2D& p, const Workspace& ws, int heading_bins) {
  const double res = ws.grid_resolution;
  const double bin = kTwoPi / heading_bins;
  const auto nx = static_cast<std::int64_t>(std::ceil(ws.bounds.width() / res)) + 1;
  const auto ny = static_cast<std::int64_t>(std::ceil(ws.bounds.height() / res)) + 1;
  const auto ix = static_cast<std::int64_t>(std::floor((p.x - ws.bounds.x_min) / res));
  const auto iy = static_cast<std::int64_t>(std::floor((p.y - ws.bounds.y_min) / res));
  const auto ib = static_cast<std::int64_t>(std::floor((p.theta + kPi) / bin)) % heading_bins;
  return (ib * ny + iy) * nx + ix;
}

namespace {

enum class Outcome { Running, Found, Exhausted, OutOfBudget };

// Hybrid A* over (cell, heading bin) with analytic Dubins shots, advanced one expansion
// at a time so that two searches can run side by side.
class Search {
 public:
  Search(const Pose2D& start, const Pose2D& goal, const ObstacleSet& obstacles, const Workspace& ws, double rho,
         const Body& body, const Body& back, const TransitOptions& opts)
      : goal_(goal),
        obstacles_(obstacles),
        ws_(ws),
        rho_(rho),
        body_(body),
        back_(back),
        opts_(opts),
        // Straight primitives are long enough to always leave their lattice cell;
        // turning primitives sweep exactly one heading bin so that turning is never
        // absorbed into the straight successor's cell.
        straight_len_(ws.grid_resolution * std::sqrt(2.0)),
        turn_len_(rho * kTwoPi / opts.heading_bins) {
    nodes_.push_back({start, 0.0, -1, {}});
    open_.push({heuristic(start), seq_++, 0});
    best_g_[key(start)] = 0.0;
  }

  int expansions() const { return expansions_; }
  const std::vector<TransitArc>& arcs() const { return arcs_; }
  std::vector<std::int64_t> closed() const { return {closed_.begin(), closed_.end()}; }

  Outcome step(Budget* budget) {
    while (!open_.empty()) {
      const Entry top = open_.top();
      open_.pop();
      const Node cur = nodes_[top.node];
      if (!closed_.insert(key(cur.pose)).second) continue;
      ++expansions_;
      if (budget) {
        budget->charge();
        if (budget->expired()) return Outcome::OutOfBudget;
      }
      const double dist = (goal_.position() - cur.pose.position()).norm();
      if (expansions_ == 1 || expansions_ % opts_.shot_interval == 0 || dist < opts_.shot_radius) {
        if (auto hit = shot(cur.pose)) {
          for (int n = top.node; nodes_[n].parent >= 0; n = nodes_[n].parent) {
            arcs_.push_back(nodes_[n].arc);
          }
          std::reverse(arcs_.begin(), arcs_.end());
          const auto tail = transit_from_dubins(hit->first, hit->second);
          arcs_.insert(arcs_.end(), tail.arcs.begin(), tail.arcs.end());
          return Outcome::Found;
        }
      }
      expand(top.node);
      return Outcome::Running;
    }
    return Outcome::Exhausted;
  }

 private:
  std::int64_t key(const Pose2D& p) const { return lattice_cell(p, ws_, opts_.heading_bins); }

  double heuristic(const Pose2D& p) const {
    double h = shortest_dubins_length(p, goal_, rho_);
    if (opts_.allow_reverse) h = std::min(h, shortest_dubins_length(flip(p), flip(goal_), rho_));
    return h;
  }

  std::optional<std::pair<DubinsPath, bool>> shot(const Pose2D& from) const {
    const auto fwd = shortest_dubins(from, goal_, rho_);
    if (path_collision_free(fwd, body_, obstacles_, ws_)) return std::pair{fwd, false};
    if (opts_.allow_reverse) {
      const auto rev = shortest_dubins(flip(from), flip(goal_), rho_);
      if (path_collision_free(rev, back_, obstacles_, ws_)) return std::pair{rev, true};
    }
    return std::nullopt;
  }

  void expand(int idx) {
    const Node cur = nodes_[idx];
    const std::array<double, 3> curvatures{0.0, 1.0 / rho_, -1.0 / rho_};
    for (int dir : {1, -1}) {
      if (dir < 0 && !opts_.allow_reverse) continue;
      for (double kappa : curvatures) {
        const double len = kappa == 0.0 ? straight_len_ : turn_len_;
        const TransitArc arc{len, kappa, dir};
        const Pose2D next = arc_pose(cur.pose, arc, len);
        const auto nk = key(next);
        const double g = cur.g + len;
        if (closed_.count(nk)) continue;
        const auto it = best_g_.find(nk);
        if (it != best_g_.end() && it->second <= g) continue;
        const int pieces = static_cast<int>(std::ceil(len / straight_len_ - 1e-9));
        bool clear = true;
        Pose2D prev = cur.pose;
        for (int i = 1; i <= pieces && clear; ++i) {
          const Pose2D p = i == pieces ? next : arc_pose(cur.pose, arc, len * i / pieces);
          clear = motion_clear(prev, p, kappa == 0.0 ? kStraight : 1.0 / kappa, body_, obstacles_, ws_);
          prev = p;
        }
        if (!clear) continue;
        best_g_[nk] = g;
        nodes_.push_back({next, g, idx, arc});
        open_.push({g + heuristic(next), seq_++, static_cast<int>(nodes_.size() - 1)});
      }
    }
  }

  Pose2D goal_;
  const ObstacleSet& obstacles_;
  const Workspace& ws_;
  double rho_;
  const Body& body_;
  const Body& back_;
  const TransitOptions& opts_;
  double straight_len_;
  double turn_len_;
  std::vector<Node> nodes_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_;
  std::uint64_t seq_ = 0;
  std::unordered_map<std::int64_t, double> best_g_;
  std::unordered_set<std::int64_t> closed_;
  int expansions_ = 0;
  std::vector<TransitArc> arcs_;
};

}  // namespace

std::optional<TransitPath> plan_transit(const Pose2D& start, const Pose2D& goal, const ObstacleSet& obstacles,
                                        const Workspace& ws, const RobotParams& params, const TransitOptions& opts,
                                        Budget* budget, TransitFailure* why) {
  const double rho = params.rho_transit;
  const Body body = params.body();
  if (!pose_clear(goal, body, obstacles, ws)) {
    if (why) *why = {true, {}};
    return std::nullopt;
  }
  if (!pose_clear(start, body, obstacles, ws)) {
    return std::nullopt;
  }
  const Body back = flipped(body);

  Search fwd(start, goal, obstacles, ws, rho, body, back, opts);
  if (!opts.allow_reverse || !opts.bidirectional) {
    Outcome o = Outcome::Running;
    while (o == Outcome::Running && fwd.expansions() < opts.max_expansions) o = fwd.step(budget);
    if (o != Outcome::Found) return std::nullopt;
    return assemble(start, goal, fwd.arcs(), rho);
  }
  // With reverse driving every primitive is invertible, so the lattice component of
  // the goal can be grown from either end. Whichever search settles first decides: a
  // path found from the goal is driven backwards, and a search that runs out of
  // lattice proves the two poses disconnected.
  Search bwd(goal, start, obstacles, ws, rho, body, back, opts);
  while (fwd.expansions() < opts.max_expansions) {
    const Outcome b = bwd.step(budget);
    if (b == Outcome::OutOfBudget) return std::nullopt;
    if (b == Outcome::Exhausted) {
      if (why) *why = {true, bwd.closed()};
      return std::nullopt;
    }
    if (b == Outcome::Found) {
      std::vector<TransitArc> arcs;
      for (auto it = bwd.arcs().rbegin(); it != bwd.arcs().rend(); ++it) {
        arcs.push_back({it->length, it->curvature, -it->direction});
      }
      return assemble(start, goal, arcs, rho);
    }
    const Outcome f = fwd.step(budget);
    if (f == Outcome::Found) return assemble(start, goal, fwd.arcs(), rho);
    if (f != Outcome::Running) return std::nullopt;
  }
  return std::nullopt;
}

bool transit_clear(const TransitPath& path, const Body& body, const ObstacleSet& obstacles, const Workspace& ws,
                   double step) {
  if (path.waypoints.empty() || !pose_clear(path.waypoints.front(), body, obstacles, ws)) return false;
  for (std::size_t i = 0; i < path.arcs.size(); ++i) {
    const auto& arc = path.arcs[i];
    const int n = std::max(1, static_cast<int>(std::ceil(arc.length / step - 1e-12)));
    Pose2D prev = path.waypoints[i];
    for (int k = 1; k <= n; ++k) {
      const Pose2D cur = k == n ? path.waypoints[i + 1] : arc_pose(path.waypoints[i], arc, arc.length * k / n);
      if (!motion_clear(prev, cur, arc.curvature == 0.0 ? kStraight : 1.0 / arc.curvature, body, obstacles, ws)) {
        return false;
      }
      prev = cur;
    }
  }
  return true;
}

std::optional<TransitPath> TransitMemo::plan(const Pose2D& start, const Pose2D& goal, const ObstacleSet& obstacles,
                                             const Workspace& ws, const RobotParams& params,
                                             const TransitOptions& opts, Budget* budget, TransitFailure* why) {
  auto& known = known_[{start.x, start.y, start.theta, goal.x, goal.y, goal.theta}];
  for (const auto& k : known) {
    if (k.cert.replays_on(obstacles)) {
      ++hits_;
      if (why && !k.path) *why = k.why;
      return k.path;
    }
  }
  // A stored path that is still clear is kept even though a fresh search might differ.
  const Body body = params.body();
  const Known* reuse = nullptr;
  for (const auto& k : known) {
    if (k.path && (!reuse || k.path->length < reuse->path->length) &&
        transit_clear(*k.path, body, obstacles, ws)) {
      reuse = &k;
    }
  }
  if (reuse) {
    ++hits_;
    return reuse->path;
  }
  CheckTrace trace(obstacles.size());
  TransitFailure failure;
  obstacles.record(&trace);
  auto path = plan_transit(start, goal, obstacles, ws, params, opts, budget, &failure);
  obstacles.record(nullptr);
  if (!path && why) *why = failure;
  if (!(budget && budget->expired())) {
    known.push_back({ReplayCertificate::from(obstacles, trace), path, std::move(failure)});
  }
  return path;
}

}  // namespace pushplan
