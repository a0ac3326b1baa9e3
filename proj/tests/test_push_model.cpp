#include <doctest.h>

#include <algorithm>

#include "pushplan/dubins.hpp"
#include "pushplan/push_model.hpp"
#include "support.hpp"

using namespace pushplan;
using pushplan::testing::near;

TEST_CASE("pushing poses of a 0.15 m square") {
  RobotParams params;
  const auto sq = Polygon2D::square(0.15);
  const auto poses = pushing_poses(3, {}, sq, params);
  REQUIRE(poses.size() == 4);
  std::vector<double> headings;
  for (const auto& p : poses) {
    CHECK(p.object_id == 3);
    headings.push_back(p.robot_pose.theta);
    const double dist = std::hypot(p.robot_pose.x, p.robot_pose.y);
    CHECK(dist == doctest::Approx(0.075 + params.bumper_offset));
    // Facing the object center.
    const double to_center = std::atan2(-p.robot_pose.y, -p.robot_pose.x);
    CHECK(std::abs(normalize_angle(to_center - p.robot_pose.theta)) < 1e-12);
    // Bumper face midpoint touches the contacted face midpoint.
    const Vec2 bumper = p.robot_pose.apply({params.bumper_offset, 0.0});
    CHECK(std::abs(std::max(std::abs(bumper.x), std::abs(bumper.y)) - 0.075) < 1e-12);
    CHECK(std::min(std::abs(bumper.x), std::abs(bumper.y)) < 1e-12);
  }
  std::sort(headings.begin(), headings.end());
  CHECK(headings[0] == doctest::Approx(-kPi / 2));
  CHECK(headings[1] == doctest::Approx(0.0));
  CHECK(headings[2] == doctest::Approx(kPi / 2));
  CHECK(headings[3] == doctest::Approx(kPi));
}

TEST_CASE("pushing poses are equivariant under object rotation") {
  RobotParams params;
  const auto sq = Polygon2D::square(0.15);
  const double phi = 0.7;
  const auto base = pushing_poses(0, {}, sq, params);
  const auto rotated = pushing_poses(0, {0, 0, phi}, sq, params);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(near(rotated[i].robot_pose, compose(Pose2D{0, 0, phi}, base[i].robot_pose), 1e-12));
    CHECK(near(rotated[i].attach_transform, base[i].attach_transform, 1e-15));
  }
}

TEST_CASE("triangle has three pushing poses") {
  const Polygon2D tri({{0, 0}, {0.2, 0}, {0.1, 0.15}});
  CHECK(pushing_poses(1, {1, 1, 0}, tri, RobotParams{}).size() == 3);
  CHECK_THROWS(pushing_pose(1, {}, tri, 3, RobotParams{}));
}

TEST_CASE("attach transform round-trips for every face") {
  std::mt19937_64 rng(3);
  RobotParams params;
  for (int i = 0; i < 500; ++i) {
    const auto obj = testing::random_pose(rng, 3.0);
    const auto shape = testing::random_convex(rng, {0, 0}, 0.2);
    for (const auto& pp : pushing_poses(0, obj, shape, params)) {
      CHECK(near(object_pose_along_push(pp.robot_pose, pp.attach_transform), obj, 1e-12));
    }
  }
}

TEST_CASE("object follows the robot rigidly") {
  RobotParams params;
  const auto sq = Polygon2D::square(0.15);
  const Pose2D obj{2, 2, 0.3};
  const auto pp = pushing_pose(0, obj, sq, 1, params);

  const auto line = straight_path(pp.robot_pose, 1.0, params.rho_push);
  const auto moved = object_pose_along_push(line.end_pose(), pp.attach_transform);
  CHECK(planar_distance(moved, obj) == doctest::Approx(1.0));
  CHECK(moved.theta == doctest::Approx(obj.theta));

  // Arc of angle alpha at rho_p: object heading turns by exactly alpha, and its
  // position matches rotating the initial object pose about the arc center.
  const double alpha = 0.9;
  const DubinsPath arc{DubinsWord::LSL, {alpha * params.rho_push, 0, 0}, params.rho_push, pp.robot_pose};
  const auto after = object_pose_along_push(arc.end_pose(), pp.attach_transform);
  CHECK(normalize_angle(after.theta - obj.theta) == doctest::Approx(alpha));
  const Vec2 center = pp.robot_pose.apply({0.0, params.rho_push});
  const Pose2D rot{center.x, center.y, alpha};
  const Pose2D expected = compose(compose(rot, inverse(Pose2D{center.x, center.y, 0})), obj);
  CHECK(near(after, expected, 1e-12));
}

TEST_CASE("symmetry group equivalence") {
  const SymmetryGroup four{4};
  CHECK(four.equivalent({1, 1, 0}, {1, 1, kPi / 2}, 1e-6, 1e-6));
  CHECK(four.equivalent({1, 1, 0.1}, {1, 1, 0.1 - kPi}, 1e-6, 1e-6));
  CHECK_FALSE(four.equivalent({1, 1, 0}, {1, 1, 0.3}, 1e-6, 1e-6));
  const SymmetryGroup one{1};
  CHECK_FALSE(one.equivalent({1, 1, 0}, {1, 1, kPi / 2}, 1e-6, 1e-6));
  CHECK(four.variants({0, 0, 0}).size() == 4);
}

TEST_CASE("robot params validation") {
  RobotParams ok;
  CHECK_NOTHROW(ok.validate());
  RobotParams slow = ok;
  slow.rho_push = 0.5;
  CHECK_THROWS(slow.validate());
  RobotParams bad = ok;
  bad.bumper_offset = 0;
  CHECK_THROWS(bad.validate());
}
