#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aeronav/errors.hpp"
#include "aeronav/geometry.hpp"
#include "aeronav/rng.hpp"

using namespace aeronav;

namespace {
constexpr double kPi = std::numbers::pi;
const ActionBounds kBounds;  // 5 m translation, pi/4 turn
}  // namespace

TEST_CASE("apply_action identity") {
  Pose origin;
  Pose out = apply_action(origin, Action{}, kBounds);
  CHECK(out == origin);
}

TEST_CASE("apply_action single-axis sum") {
  Pose p(0, 0, 5);
  Pose out = apply_action(p, Action{0, 0, -1, 0, 0, 0}, kBounds);
  CHECK(out.z == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("apply_action wraps angles into [-pi, pi)") {
  Pose p(1, 0, 0, kPi - 0.1);
  Pose out = apply_action(p, Action{2, 0, 0, 0.2, 0, 0}, kBounds);
  CHECK(out.x == doctest::Approx(3.0));
  CHECK(out.theta == doctest::Approx(-kPi + 0.1).epsilon(1e-12));
}

TEST_CASE("apply_action rejects out-of-bounds components") {
  Pose p;
  CHECK_THROWS_AS(apply_action(p, Action{5.01, 0, 0, 0, 0, 0}, kBounds), BoundsError);
  CHECK_THROWS_AS(apply_action(p, Action{0, 0, 0, 1.0, 0, 0}, kBounds), BoundsError);
  CHECK_THROWS_AS(apply_action(p, Action{std::nan(""), 0, 0, 0, 0, 0}, kBounds), BoundsError);
}

TEST_CASE("apply_action angles stay in range and results are bit-deterministic") {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    Pose p(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(0, 100),
           rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    Action a{rng.uniform(-5, 5),
             rng.uniform(-5, 5),
             rng.uniform(-5, 5),
             rng.uniform(-kBounds.max_turn, kBounds.max_turn),
             rng.uniform(-kBounds.max_turn, kBounds.max_turn),
             rng.uniform(-kBounds.max_turn, kBounds.max_turn)};
    Pose out1 = apply_action(p, a, kBounds);
    Pose out2 = apply_action(p, a, kBounds);
    CHECK(out1 == out2);  // bit-identical
    for (double ang : {out1.theta, out1.phi, out1.psi}) {
      CHECK(ang >= -kPi);
      CHECK(ang < kPi);
    }
  }
}

TEST_CASE("euclidean_distance basics") {
  CHECK(euclidean_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(euclidean_distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
  CHECK(euclidean_distance({1, 1, 1}, {2, 2, 2}) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("euclidean_distance symmetry") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Vec3 a{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    Vec3 b{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    CHECK(euclidean_distance(a, b) == euclidean_distance(b, a));
    CHECK(euclidean_distance(a, b) >= 0.0);
  }
}

TEST_CASE("path_length examples") {
  Trajectory single;
  single.waypoints.emplace_back(1, 2, 3);
  CHECK(path_length(single) == 0.0);
  CHECK(single.n() == 0);

  Trajectory line;
  line.waypoints.emplace_back(0, 0, 0);
  line.waypoints.emplace_back(5, 0, 0);
  line.waypoints.emplace_back(10, 0, 0);
  CHECK(path_length(line) == doctest::Approx(10.0));

  Trajectory corner;
  corner.waypoints.emplace_back(0, 0, 0);
  corner.waypoints.emplace_back(3, 0, 0);
  corner.waypoints.emplace_back(3, 4, 0);
  CHECK(path_length(corner) == doctest::Approx(7.0));
  CHECK(corner.n() == 2);
}

TEST_CASE("path_length dominates the straight-line distance") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Trajectory t;
    const int n = 2 + static_cast<int>(rng.uniform_int(8));
    for (int k = 0; k < n; ++k) {
      t.waypoints.emplace_back(rng.uniform(-50, 50), rng.uniform(-50, 50),
                               rng.uniform(-50, 50));
    }
    const double straight = euclidean_distance(t.waypoints.front().position(),
                                               t.waypoints.back().position());
    CHECK(path_length(t) >= straight - 1e-9);
  }
}

TEST_CASE("point_segment_distance") {
  CHECK(point_segment_distance({0, 1, 0}, {-1, 0, 0}, {1, 0, 0}) == doctest::Approx(1.0));
  CHECK(point_segment_distance({5, 0, 0}, {-1, 0, 0}, {1, 0, 0}) == doctest::Approx(4.0));
  CHECK(point_segment_distance({2, 2, 0}, {1, 1, 0}, {1, 1, 0}) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("waypoint arrival radius must be positive") {
  CHECK_NOTHROW(Waypoint({0, 0, 0}, 1.0));
  CHECK_NOTHROW(Waypoint({0, 0, 0}));
  CHECK_THROWS_AS(Waypoint({0, 0, 0}, 0.0), BoundsError);
  CHECK_THROWS_AS(Waypoint({0, 0, 0}, -2.0), BoundsError);
}

TEST_CASE("pose construction rejects non-finite coordinates") {
  CHECK_THROWS_AS(Pose(std::numeric_limits<double>::infinity(), 0, 0), BoundsError);
  CHECK_THROWS_AS(Pose(0, std::nan(""), 0), BoundsError);
}
