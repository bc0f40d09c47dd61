#ifndef AERONAV_WORLD_HPP
#define AERONAV_WORLD_HPP

#include <optional>
#include <string>
#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/encoder.hpp"
#include "aeronav/geometry.hpp"

namespace aeronav {

struct Obstacle {
  enum class Kind { kBox, kSphere };
  Kind kind = Kind::kBox;
  // Box: corners; Sphere: center + radius (min unused).
  Vec3 min;
  Vec3 max;     // box only
  double radius = 0.0;  // sphere only; center stored in min

  static Obstacle box(const Vec3& lo, const Vec3& hi);
  static Obstacle sphere(const Vec3& center, double radius);

  bool operator==(const Obstacle& o) const = default;
};

// True iff the point lies strictly inside the obstacle inflated by
// inflation meters (open containment: the boundary itself is free).
bool collides(const Vec3& p, const std::vector<Obstacle>& obstacles, double inflation);
bool collides(const Pose& p, const std::vector<Obstacle>& obstacles, double inflation);

// Offset from p to the nearest obstacle surface point within range;
// nullopt when nothing is in range.
std::optional<Vec3> nearest_obstacle_offset(const Vec3& p,
                                            const std::vector<Obstacle>& obstacles,
                                            double range);

struct Scenario {
  std::string id;
  uint64_t seed = 0;
  std::string difficulty;  // "easy" | "hard"
  Pose start;
  GoalSpec goal;
  std::vector<Obstacle> obstacles;
  Trajectory oracle_path;

  double oracle_length() const { return path_length(oracle_path); }
  double straight_distance() const {
    return euclidean_distance(start.position(), goal.goal_position);
  }
};

// Collision-free polyline from start to goal: exact A* on an axis-connected
// 3D grid at world.grid_resolution, then line-of-sight shortcutting. Start
// and goal must be free and grid-aligned to the world lattice. Throws
// UnreachableError when no grid path exists.
Trajectory oracle_shortest_path(const Vec3& start, const Vec3& goal,
                                const std::vector<Obstacle>& obstacles,
                                const WorldConfig& world);

// Grid-optimal path length at the same resolution/occupancy (test oracle
// comparisons and the planner's own optimality bound share this value).
double grid_shortest_length(const Vec3& start, const Vec3& goal,
                            const std::vector<Obstacle>& obstacles, const WorldConfig& world);

// Node inflation used for grid occupancy; larger than the collision
// inflation so every point along a free-node edge stays flyable.
double planner_inflation(const WorldConfig& world);

// Deterministic scenario generation: rejection-resamples start/goal and
// obstacles until a collision-free oracle path of the requested length
// class exists. Throws GenerationError after bounded attempts.
Scenario generate_scenario(uint64_t seed, const std::string& difficulty,
                           const WorldConfig& world, const EncoderParams& enc);

// Next oracle waypoint under the given assistance level, or nullopt.
// L1: always; L2: only when deviation exceeds world.helper_threshold;
// L3: never.
std::optional<Vec3> assistance_hint(Assistance level, const Pose& pose,
                                    const Scenario& scenario, double deviation,
                                    const WorldConfig& world);

// Scenario file round-trip (flat structured text, bit-exact floats).
std::string serialize_scenario(const Scenario& s);
Scenario parse_scenario(const std::string& text, const EncoderParams& enc);

}  // namespace aeronav

#endif  // AERONAV_WORLD_HPP
