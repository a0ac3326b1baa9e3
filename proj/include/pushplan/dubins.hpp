#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pushplan/geom.hpp"
#include "pushplan/sweep.hpp"

namespace pushplan {

enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };
inline constexpr std::array<DubinsWord, 6> kAllDubinsWords = {
    DubinsWord::LSL, DubinsWord::RSR, DubinsWord::LSR, DubinsWord::RSL, DubinsWord::RLR, DubinsWord::LRL};

enum class DubinsFamily { CSC, CCC };
enum class SegmentKind { Left, Straight, Right };
enum class DistanceRegime { ShortDistance, LongDistance };

DubinsFamily family(DubinsWord w);
std::array<SegmentKind, 3> segment_kinds(DubinsWord w);
std::string_view to_string(DubinsWord w);
/// Throws std::invalid_argument for unknown names.
DubinsWord dubins_word_from_string(std::string_view s);

/// Three-segment bounded-curvature path. Segment lengths are in meters.
struct DubinsPath {
  DubinsWord word = DubinsWord::LSL;
  std::array<double, 3> seg_lengths{0.0, 0.0, 0.0};
  double radius = 1.0;
  Pose2D start;

  double length() const { return seg_lengths[0] + seg_lengths[1] + seg_lengths[2]; }
  /// Pose after travelling arc length s (clamped to [0, length()]).
  Pose2D pose_at(double s) const;
  Pose2D end_pose() const { return pose_at(length()); }
  /// Signed turning radius of segment i (kStraight for lines, negative for right turns).
  double segment_radius(std::size_t i) const;
  /// Net absolute heading swept by the arc segments.
  double total_turning() const;
};

/// Straight path of the given length from `start`, encoded as an LSL word with empty arcs.
DubinsPath straight_path(const Pose2D& start, double length, double radius);

/// Closed-form solution for one word; nullopt when the word is not admissible.
std::optional<DubinsPath> dubins_word_path(const Pose2D& start, const Pose2D& goal, double radius,
                                           DubinsWord word);

/// Minimum-length path over all six words. Ties keep the earlier word in
/// LSL, RSR, LSR, RSL, RLR, LRL order. Throws std::invalid_argument if radius <= 0.
DubinsPath shortest_dubins(const Pose2D& start, const Pose2D& goal, double radius);

/// Length of the shortest path only (no path object).
double shortest_dubins_length(const Pose2D& start, const Pose2D& goal, double radius);

DistanceRegime classify_regime(const Pose2D& start, const Pose2D& goal, double radius);

/// Poses spaced uniformly at no more than `step` of arc length, endpoints included.
std::vector<Pose2D> sample_path(const DubinsPath& path, double step);

/// Poses sampled per segment so that consecutive poses always lie on one segment.
/// Each entry carries the signed radius of the motion that reaches it.
struct PathSample {
  Pose2D pose;
  double radius_from_prev = kStraight;
};
std::vector<PathSample> segment_samples(const DubinsPath& path, double step);

inline constexpr double kCollisionStep = 0.05;

/// True iff the body swept along the path stays inside the workspace and clear of
/// every obstacle.
bool path_collision_free(const DubinsPath& path, const Body& body, const ObstacleSet& obstacles,
                         const Workspace& ws, double step = kCollisionStep);
bool path_collision_free(const DubinsPath& path, const Body& body, std::span<const Polygon2D> obstacles,
                         const Workspace& ws, double step = kCollisionStep);

}  // namespace pushplan
