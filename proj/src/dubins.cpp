#include "pushplan/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pushplan {

DubinsFamily family(DubinsWord w) {
  return (w == DubinsWord::RLR || w == DubinsWord::LRL) ? DubinsFamily::CCC : DubinsFamily::CSC;
}

std::array<SegmentKind, 3> segment_kinds(DubinsWord w) {
  using enum SegmentKind;
  switch (w) {
    case DubinsWord::LSL: return {Left, Straight, Left};
    case DubinsWord::RSR: return {Right, Straight, Right};
    case DubinsWord::LSR: return {Left, Straight, Right};
    case DubinsWord::RSL: return {Right, Straight, Left};
    case DubinsWord::RLR: return {Right, Left, Right};
    case DubinsWord::LRL: return {Left, Right, Left};
  }
  return {Left, Straight, Left};
}

std::string_view to_string(DubinsWord w) {
  switch (w) {
    case DubinsWord::LSL: return "LSL";
    case DubinsWord::RSR: return "RSR";
    case DubinsWord::LSR: return "LSR";
    case DubinsWord::RSL: return "RSL";
    case DubinsWord::RLR: return "RLR";
    case DubinsWord::LRL: return "LRL";
  }
  return "?";
}

DubinsWord dubins_word_from_string(std::string_view s) {
  for (auto w : kAllDubinsWords) {
    if (to_string(w) == s) {
      return w;
    }
  }
  throw std::invalid_argument("unknown Dubins word '" + std::string(s) + "'");
}

namespace {

// Arc steps within this many radians of a full turn are treated as zero.
constexpr double kWrapEps = 1e-10;

double mod2pi(double a) {
  double r = a - kTwoPi * std::floor(a / kTwoPi);
  if (r >= kTwoPi - kWrapEps || r < 0.0) {
    r = 0.0;
  }
  return r;
}

Pose2D advance(const Pose2D& p, SegmentKind kind, double len, double radius) {
  switch (kind) {
    case SegmentKind::Straight:
      return {p.x + len * std::cos(p.theta), p.y + len * std::sin(p.theta), p.theta};
    case SegmentKind::Left: {
      const double phi = len / radius;
      return {p.x + radius * (std::sin(p.theta + phi) - std::sin(p.theta)),
              p.y + radius * (std::cos(p.theta) - std::cos(p.theta + phi)), p.theta + phi};
    }
    case SegmentKind::Right: {
      const double phi = len / radius;
      return {p.x + radius * (std::sin(p.theta) - std::sin(p.theta - phi)),
              p.y + radius * (std::cos(p.theta - phi) - std::cos(p.theta)), p.theta - phi};
    }
  }
  return p;
}

// Normalized-frame quantities shared by all words (unit turning radius).
struct Frame {
  double d, alpha, beta, sa, sb, ca, cb, c_ab;
};

Frame make_frame(const Pose2D& start, const Pose2D& goal, double radius) {
  const double dx = goal.x - start.x;
  const double dy = goal.y - start.y;
  const double d = std::hypot(dx, dy) / radius;
  const double th = d > 0.0 ? mod2pi(std::atan2(dy, dx)) : 0.0;
  const double alpha = mod2pi(start.theta - th);
  const double beta = mod2pi(goal.theta - th);
  return {d, alpha, beta, std::sin(alpha), std::sin(beta), std::cos(alpha), std::cos(beta),
          std::cos(alpha - beta)};
}

using Params = std::array<double, 3>;

// Candidate parameter triples (in radians / unit lengths) for one word.
std::vector<Params> word_params(const Frame& f, DubinsWord word) {
  const double d_sq = f.d * f.d;
  std::vector<Params> out;
  switch (word) {
    case DubinsWord::LSL: {
      const double p_sq = 2.0 + d_sq - 2.0 * f.c_ab + 2.0 * f.d * (f.sa - f.sb);
      if (p_sq < 0.0) break;
      const double tmp = std::atan2(f.cb - f.ca, f.d + f.sa - f.sb);
      out.push_back({mod2pi(tmp - f.alpha), std::sqrt(p_sq), mod2pi(f.beta - tmp)});
      break;
    }
    case DubinsWord::RSR: {
      const double p_sq = 2.0 + d_sq - 2.0 * f.c_ab + 2.0 * f.d * (f.sb - f.sa);
      if (p_sq < 0.0) break;
      const double tmp = std::atan2(f.ca - f.cb, f.d - f.sa + f.sb);
      out.push_back({mod2pi(f.alpha - tmp), std::sqrt(p_sq), mod2pi(tmp - f.beta)});
      break;
    }
    case DubinsWord::LSR: {
      const double p_sq = -2.0 + d_sq + 2.0 * f.c_ab + 2.0 * f.d * (f.sa + f.sb);
      if (p_sq < 0.0) break;
      const double p = std::sqrt(p_sq);
      const double tmp = std::atan2(-f.ca - f.cb, f.d + f.sa + f.sb) - std::atan2(-2.0, p);
      out.push_back({mod2pi(tmp - f.alpha), p, mod2pi(tmp - f.beta)});
      break;
    }
    case DubinsWord::RSL: {
      const double p_sq = -2.0 + d_sq + 2.0 * f.c_ab - 2.0 * f.d * (f.sa + f.sb);
      if (p_sq < 0.0) break;
      const double p = std::sqrt(p_sq);
      const double tmp = std::atan2(f.ca + f.cb, f.d - f.sa - f.sb) - std::atan2(2.0, p);
      out.push_back({mod2pi(f.alpha - tmp), p, mod2pi(f.beta - tmp)});
      break;
    }
    case DubinsWord::RLR: {
      const double c = (6.0 - d_sq + 2.0 * f.c_ab + 2.0 * f.d * (f.sa - f.sb)) / 8.0;
      if (std::abs(c) > 1.0) break;
      const double phi = std::atan2(f.ca - f.cb, f.d - f.sa + f.sb);
      // Both roots of the middle-arc equation; the caller keeps the shorter one.
      for (double p : {mod2pi(kTwoPi - std::acos(c)), std::acos(c)}) {
        const double t = mod2pi(f.alpha - phi + 0.5 * p);
        out.push_back({t, p, mod2pi(f.alpha - f.beta - t + p)});
      }
      break;
    }
    case DubinsWord::LRL: {
      const double c = (6.0 - d_sq + 2.0 * f.c_ab + 2.0 * f.d * (f.sb - f.sa)) / 8.0;
      if (std::abs(c) > 1.0) break;
      const double phi = std::atan2(f.ca - f.cb, f.d + f.sa - f.sb);
      for (double p : {mod2pi(kTwoPi - std::acos(c)), std::acos(c)}) {
        const double t = mod2pi(-f.alpha - phi + 0.5 * p);
        out.push_back({t, p, mod2pi(f.beta - f.alpha - t + p)});
      }
      break;
    }
  }
  return out;
}

bool reaches(const DubinsPath& path, const Pose2D& goal) {
  const Pose2D end = path.end_pose();
  const double tol = 1e-6 * std::max(1.0, path.radius);
  return std::hypot(end.x - goal.x, end.y - goal.y) <= tol &&
         std::abs(normalize_angle(end.theta - goal.theta)) <= 1e-6;
}

void require_radius(double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("Dubins radius must be positive");
  }
}

bool coincident(const Pose2D& a, const Pose2D& b) {
  return a.x == b.x && a.y == b.y && normalize_angle(a.theta - b.theta) == 0.0;
}

}  // namespace

Pose2D DubinsPath::pose_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const auto kinds = segment_kinds(word);
  Pose2D p = start;
  for (std::size_t i = 0; i < 3; ++i) {
    const double len = std::min(s, seg_lengths[i]);
    p = advance(p, kinds[i], len, radius);
    s -= len;
    if (s <= 0.0) {
      break;
    }
  }
  return p;
}

double DubinsPath::segment_radius(std::size_t i) const {
  switch (segment_kinds(word)[i]) {
    case SegmentKind::Left: return radius;
    case SegmentKind::Right: return -radius;
    case SegmentKind::Straight: return kStraight;
  }
  return kStraight;
}

double DubinsPath::total_turning() const {
  const auto kinds = segment_kinds(word);
  double turn = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (kinds[i] != SegmentKind::Straight) {
      turn += seg_lengths[i] / radius;
    }
  }
  return turn;
}

DubinsPath straight_path(const Pose2D& start, double length, double radius) {
  return DubinsPath{DubinsWord::LSL, {0.0, length, 0.0}, radius, start};
}

std::optional<DubinsPath> dubins_word_path(const Pose2D& start, const Pose2D& goal, double radius,
                                           DubinsWord word) {
  require_radius(radius);
  if (coincident(start, goal)) {
    if (word == DubinsWord::LSL) {
      return DubinsPath{word, {0.0, 0.0, 0.0}, radius, start};
    }
  }
  const Frame f = make_frame(start, goal, radius);
  std::optional<DubinsPath> best;
  for (const auto& prm : word_params(f, word)) {
    DubinsPath path{word, {prm[0] * radius, prm[1] * radius, prm[2] * radius}, radius, start};
    if (!reaches(path, goal)) {
      continue;
    }
    if (!best || path.length() < best->length()) {
      best = path;
    }
  }
  return best;
}

DubinsPath shortest_dubins(const Pose2D& start, const Pose2D& goal, double radius) {
  require_radius(radius);
  std::optional<DubinsPath> best;
  for (auto w : kAllDubinsWords) {
    auto cand = dubins_word_path(start, goal, radius, w);
    if (cand && (!best || cand->length() < best->length())) {
      best = cand;
    }
  }
  // LSL and RSR are always admissible, so this only trips on non-finite input.
  if (!best) {
    throw std::invalid_argument("no Dubins path between non-finite poses");
  }
  return *best;
}

double shortest_dubins_length(const Pose2D& start, const Pose2D& goal, double radius) {
  require_radius(radius);
  if (coincident(start, goal)) {
    return 0.0;
  }
  const Frame f = make_frame(start, goal, radius);
  double best = std::numeric_limits<double>::infinity();
  for (auto w : kAllDubinsWords) {
    for (const auto& prm : word_params(f, w)) {
      best = std::min(best, (prm[0] + prm[1] + prm[2]) * radius);
    }
  }
  return best;
}

DistanceRegime classify_regime(const Pose2D& start, const Pose2D& goal, double radius) {
  require_radius(radius);
  return planar_distance(start, goal) < 4.0 * radius ? DistanceRegime::ShortDistance
                                                     : DistanceRegime::LongDistance;
}

std::vector<Pose2D> sample_path(const DubinsPath& path, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("sample step must be positive");
  }
  const double len = path.length();
  if (len <= 0.0) {
    return {path.start};
  }
  const auto n = static_cast<std::size_t>(std::ceil(len / step - 1e-12));
  std::vector<Pose2D> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    out.push_back(path.pose_at(len * static_cast<double>(i) / static_cast<double>(n)));
  }
  return out;
}

std::vector<PathSample> segment_samples(const DubinsPath& path, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("sample step must be positive");
  }
  const auto kinds = segment_kinds(path.word);
  std::vector<PathSample> out{{path.start, kStraight}};
  Pose2D seg_start = path.start;
  for (std::size_t i = 0; i < 3; ++i) {
    const double len = path.seg_lengths[i];
    if (len <= 0.0) {
      continue;
    }
    const auto n = static_cast<std::size_t>(std::ceil(len / step - 1e-12));
    const double r = path.segment_radius(i);
    for (std::size_t k = 1; k <= n; ++k) {
      const double s = len * static_cast<double>(k) / static_cast<double>(n);
      out.push_back({advance(seg_start, kinds[i], s, path.radius), r});
    }
    seg_start = out.back().pose;
  }
  return out;
}

bool path_collision_free(const DubinsPath& path, const Body& body, const ObstacleSet& obstacles,
                         const Workspace& ws, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("sample step must be positive");
  }
  // The last swept hull contains the end footprint, so a blocked end pose rejects early.
  if (!pose_clear(path.end_pose(), body, obstacles, ws)) {
    return false;
  }
  const auto kinds = segment_kinds(path.word);
  // Coarse pass over single footprints. Each swept hull covers the footprints along its
  // piece, so a blocked sample already decides the answer.
  constexpr std::size_t kStride = 4;
  Pose2D seg_start = path.start;
  for (std::size_t i = 0; i < 3; ++i) {
    const double len = path.seg_lengths[i];
    if (len <= 0.0) continue;
    const auto n = static_cast<std::size_t>(std::ceil(len / step - 1e-12));
    for (std::size_t k = kStride; k < n; k += kStride) {
      const double s = len * static_cast<double>(k) / static_cast<double>(n);
      if (!pose_clear(advance(seg_start, kinds[i], s, path.radius), body, obstacles, ws)) {
        return false;
      }
    }
    seg_start = advance(seg_start, kinds[i], len, path.radius);
  }
  Pose2D prev = path.start;
  bool moved = false;
  for (std::size_t i = 0; i < 3; ++i) {
    const double len = path.seg_lengths[i];
    if (len <= 0.0) {
      continue;
    }
    const auto n = static_cast<std::size_t>(std::ceil(len / step - 1e-12));
    const double r = path.segment_radius(i);
    seg_start = prev;
    for (std::size_t k = 1; k <= n; ++k) {
      const double s = len * static_cast<double>(k) / static_cast<double>(n);
      const Pose2D cur = advance(seg_start, kinds[i], s, path.radius);
      if (!motion_clear(prev, cur, r, body, obstacles, ws)) {
        return false;
      }
      prev = cur;
      moved = true;
    }
  }
  return moved || pose_clear(path.start, body, obstacles, ws);
}

bool path_collision_free(const DubinsPath& path, const Body& body, std::span<const Polygon2D> obstacles,
                         const Workspace& ws, double step) {
  return path_collision_free(path, body, ObstacleSet({obstacles.begin(), obstacles.end()}), ws, step);
}

}  // namespace pushplan
