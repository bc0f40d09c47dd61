#ifndef AERONAV_GEOMETRY_HPP
#define AERONAV_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace aeronav {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3& o) const = default;
};

double norm(const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
double euclidean_distance(const Vec3& a, const Vec3& b);

// Distance from point p to the segment [a, b].
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

// 6-DoF state: world-frame position in meters, Euler angles in radians.
// Angles are wrapped to [-pi, pi) on construction; coordinates must be finite.
// Orientation is inert state here: it is observed but does not steer kinematics.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double z_, double theta_ = 0.0, double phi_ = 0.0,
       double psi_ = 0.0);

  Vec3 position() const { return {x, y, z}; }
  bool operator==(const Pose& o) const = default;
};

// Additive delta applied to a Pose. Bounds are configuration, checked at
// application time, not construction.
struct Action {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  double dtheta = 0.0;
  double dphi = 0.0;
  double dpsi = 0.0;

  bool operator==(const Action& o) const = default;
};

struct ActionBounds {
  double max_step_len = 5.0;  // meters, per translational component
  double max_turn = 0.7853981633974483;  // pi/4 radians, per angular component
};

// Throws BoundsError when a component exceeds the bounds.
void validate_action(const Action& a, const ActionBounds& bounds);

// Clamp each component into the bounds (used on sampled actions).
Action clamp_action(const Action& a, const ActionBounds& bounds);

// Component-wise sum with angle wrapping. Throws BoundsError on an
// out-of-bounds action or a non-finite result.
Pose apply_action(const Pose& p, const Action& a, const ActionBounds& bounds);

struct Waypoint {
  Vec3 position;
  std::optional<double> arrival_radius;  // > 0 when present

  Waypoint() = default;
  explicit Waypoint(const Vec3& pos, std::optional<double> radius = std::nullopt);
};

// Fixed-dimension embedding of a state or goal.
struct FeatureVector {
  std::vector<double> values;

  size_t size() const { return values.size(); }
  double operator[](size_t i) const { return values[i]; }
  bool operator==(const FeatureVector& o) const = default;
};

// Goal description: position plus a token seed standing in for the
// instruction text. description_features is the frozen encoding of both.
struct GoalSpec {
  Vec3 goal_position;
  int64_t goal_token_seed = 0;
  FeatureVector description_features;
};

// Ordered waypoint poses; n = waypoints.size() - 1 transitions.
struct Trajectory {
  std::vector<Pose> waypoints;

  size_t n() const { return waypoints.empty() ? 0 : waypoints.size() - 1; }
  bool operator==(const Trajectory& o) const = default;
};

// Sum of consecutive Euclidean segment lengths; 0 for a single pose.
double path_length(const Trajectory& t);

// Min distance from a point to the polyline through the trajectory waypoints.
double polyline_distance(const Vec3& p, const Trajectory& t);

}  // namespace aeronav

#endif  // AERONAV_GEOMETRY_HPP
