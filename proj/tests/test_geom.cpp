#include <doctest.h>

#include "pushplan/geom.hpp"
#include "pushplan/sweep.hpp"
#include "support.hpp"

using namespace pushplan;
using pushplan::testing::near;

TEST_CASE("normalize_angle maps into (-pi, pi]") {
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(0.5) == doctest::Approx(0.5));
  CHECK(normalize_angle(-kTwoPi - 0.25) == doctest::Approx(-0.25));
}

TEST_CASE("compose examples") {
  const Pose2D p{0.3, -1.2, 2.0};
  CHECK(near(compose(Pose2D{}, p), p, 1e-15));
  CHECK(near(compose(Pose2D{1, 0, 0}, Pose2D{1, 0, 0}), Pose2D{2, 0, 0}, 1e-15));
  CHECK(near(compose(Pose2D{0, 0, kPi / 2}, Pose2D{1, 0, 0}), Pose2D{0, 1, kPi / 2}, 1e-15));
}

TEST_CASE("compose is associative and inverse cancels") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto a = testing::random_pose(rng, 5.0);
    const auto b = testing::random_pose(rng, 5.0);
    const auto c = testing::random_pose(rng, 5.0);
    CHECK(near(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-12));
    CHECK(near(compose(a, inverse(a)), Pose2D{}, 1e-12));
    const auto ab = compose(a, b);
    CHECK(ab.theta > -kPi);
    CHECK(ab.theta <= kPi);
  }
}

TEST_CASE("polygon validation") {
  CHECK_THROWS_AS(Polygon2D({{0, 0}, {1, 0}}), GeometryError);
  CHECK_THROWS_AS(Polygon2D({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), GeometryError);  // clockwise
  CHECK_THROWS_AS(Polygon2D({{0, 0}, {1, 0}, {2, 0}}), GeometryError);          // degenerate
  CHECK_THROWS_AS(Polygon2D({{0, 0}, {2, 0}, {1, 0.2}, {1, 2}}), GeometryError);  // reflex vertex
  CHECK_NOTHROW(Polygon2D({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(Polygon2D::square(2.0).area() == doctest::Approx(4.0));
}

TEST_CASE("polygons_intersect examples") {
  const auto unit = Polygon2D::square(1.0);
  CHECK_FALSE(polygons_intersect(unit, footprint_at(unit, {10, 0, 0})));
  CHECK(polygons_intersect(unit, unit));
  // Shared edge: the oracle sees the common boundary, so the closed regions meet.
  const auto right = footprint_at(unit, {1, 0, 0});
  CHECK(testing::oracle_intersect(unit, right));
  CHECK(polygons_intersect(unit, right));
  CHECK(polygons_intersect(right, unit));
  CHECK_FALSE(polygons_intersect(unit, footprint_at(unit, {1.0 + 1e-9, 0, 0})));
}

TEST_CASE("polygons_intersect agrees with an edge-crossing oracle and is symmetric") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> off(-2.5, 2.5);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = testing::random_convex(rng, {0, 0}, 1.0);
    const auto b = testing::random_convex(rng, {off(rng), off(rng)}, 1.0);
    const bool expected = testing::oracle_intersect(a, b);
    hits += expected ? 1 : 0;
    REQUIRE(polygons_intersect(a, b) == expected);
    REQUIRE(polygons_intersect(b, a) == expected);
  }
  // Both outcomes must be well represented for the comparison to mean anything.
  CHECK(hits > 1000);
  CHECK(hits < 9000);
}

TEST_CASE("footprint_at transforms and preserves area") {
  const auto sq = Polygon2D::square(0.15);
  CHECK(footprint_at(sq, {}) == sq);
  const auto moved = footprint_at(sq, {1, 1, 0});
  for (std::size_t i = 0; i < sq.size(); ++i) {
    CHECK(moved.vertices()[i].x == doctest::Approx(sq.vertices()[i].x + 1));
    CHECK(moved.vertices()[i].y == doctest::Approx(sq.vertices()[i].y + 1));
  }
  const auto rotated = footprint_at(sq, {0, 0, kPi / 4});
  CHECK(rotated.vertices()[0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rotated.vertices()[0].y == doctest::Approx(-0.075 * std::sqrt(2.0)));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto poly = testing::random_convex(rng, {0.1, -0.2}, 0.7);
    const auto out = footprint_at(poly, testing::random_pose(rng, 4.0));
    CHECK(std::abs(out.area() - poly.area()) <= 1e-9 * poly.area());
    CHECK(out.area() > 0.0);
  }
}

TEST_CASE("inside_workspace uses the closed rectangle") {
  const auto ws = Workspace::make({0, 0, 4, 5.2}, 0.1);
  const auto sq = Polygon2D::square(0.15);
  CHECK(inside_workspace(footprint_at(sq, {2, 2.6, 0}), ws));
  CHECK_FALSE(inside_workspace(footprint_at(sq, {0.0, 2.6, 0}), ws));
  CHECK(inside_workspace(footprint_at(sq, {0.075, 2.6, 0}), ws));
  CHECK_THROWS_AS(Workspace::make({0, 0, 0, 1}, 0.1), GeometryError);
  CHECK_THROWS_AS(Workspace::make({0, 0, 1, 1}, 0.0), GeometryError);
}

TEST_CASE("motion_clear covers the continuous sweep") {
  const auto ws = Workspace::make({-5, -5, 5, 5}, 0.1);
  const Body body({Polygon2D::square(0.2)});
  // A thin obstacle that both endpoint footprints miss but the straight sweep crosses.
  const ObstacleSet thin({Polygon2D::rectangle(0.3, -0.5, 0.32, 0.5)});
  CHECK(pose_clear({0, 0, 0}, body, thin, ws));
  CHECK(pose_clear({0.7, 0, 0}, body, thin, ws));
  CHECK_FALSE(motion_clear({0, 0, 0}, {0.7, 0, 0}, kStraight, body, thin, ws));
  CHECK(motion_clear({0, 1, 0}, {0.7, 1, 0}, kStraight, body, thin, ws));
}

TEST_CASE("check traces certify when a result carries over to another layout") {
  const auto ws = Workspace::make({-5, -5, 5, 5}, 0.1);
  const Body body({Polygon2D::square(0.2)});
  const auto wall = Polygon2D::rectangle(0.3, -0.5, 0.32, 0.5);
  const auto side = Polygon2D::rectangle(-1.0, 2.0, -0.8, 2.2);
  const ObstacleSet before({side, wall});
  CheckTrace trace(before.size());
  before.record(&trace);
  CHECK_FALSE(motion_clear({0, 0, 0}, {0.7, 0, 0}, kStraight, body, before, ws));
  CHECK(pose_clear({0, 0, 0}, body, before, ws));
  before.record(nullptr);
  CHECK(trace.blamed == std::vector<char>{0, 1});
  CHECK(trace.touched.x_min <= -0.1);
  CHECK(trace.touched.x_max >= 0.8);

  const auto cert = ReplayCertificate::from(before, trace);
  REQUIRE(cert.blamed.size() == 1);
  CHECK(cert.blamed[0] == wall);
  // The blamed wall stays and the side block was never near: same answers.
  CHECK(cert.replays_on(ObstacleSet({wall})));
  CHECK(cert.replays_on(ObstacleSet({wall, Polygon2D::rectangle(3, 3, 3.2, 3.2)})));
  // Something new inside the inspected box might change a passed check.
  const ObstacleSet crowded({wall, Polygon2D::rectangle(-0.2, 0.15, 0.0, 0.3)});
  CHECK_FALSE(cert.replays_on(crowded));
  CHECK(cert.rejections_hold_on(crowded));
  CHECK_FALSE(cert.rejections_hold_on(ObstacleSet({side})));
}

TEST_CASE("swept hulls along translations stay strictly convex") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> len(1e-4, 0.05);
  const Body body({Polygon2D::rectangle(-0.1, -0.12, 0.195, 0.12), Polygon2D::square(0.15)});
  for (int i = 0; i < 2000; ++i) {
    const Pose2D a = testing::random_pose(rng, 3.0);
    // Translating along a body axis puts hull vertices on a common line.
    const double dir = a.theta + (i % 2 ? 0.0 : ang(rng));
    const double d = len(rng);
    const Pose2D b{a.x + d * std::cos(dir), a.y + d * std::sin(dir), a.theta};
    CHECK_NOTHROW(swept_hulls(a, b, body));
  }
}
