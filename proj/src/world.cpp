#include "aeronav/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "aeronav/errors.hpp"
#include "aeronav/rng.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

Obstacle Obstacle::box(const Vec3& lo, const Vec3& hi) {
  if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z)) {
    throw ConfigError("box obstacle needs min < max per axis");
  }
  Obstacle o;
  o.kind = Kind::kBox;
  o.min = lo;
  o.max = hi;
  return o;
}

Obstacle Obstacle::sphere(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("sphere obstacle needs radius > 0");
  Obstacle o;
  o.kind = Kind::kSphere;
  o.min = center;
  o.radius = radius;
  return o;
}

bool collides(const Vec3& p, const std::vector<Obstacle>& obstacles, double inflation) {
  for (const Obstacle& o : obstacles) {
    if (o.kind == Obstacle::Kind::kBox) {
      if (p.x > o.min.x - inflation && p.x < o.max.x + inflation &&
          p.y > o.min.y - inflation && p.y < o.max.y + inflation &&
          p.z > o.min.z - inflation && p.z < o.max.z + inflation) {
        return true;
      }
    } else {
      if (euclidean_distance(p, o.min) < o.radius + inflation) return true;
    }
  }
  return false;
}

bool collides(const Pose& p, const std::vector<Obstacle>& obstacles, double inflation) {
  return collides(p.position(), obstacles, inflation);
}

std::optional<Vec3> nearest_obstacle_offset(const Vec3& p,
                                            const std::vector<Obstacle>& obstacles,
                                            double range) {
  std::optional<Vec3> best;
  double best_d = range;
  for (const Obstacle& o : obstacles) {
    Vec3 surface;
    if (o.kind == Obstacle::Kind::kBox) {
      surface = Vec3{std::clamp(p.x, o.min.x, o.max.x), std::clamp(p.y, o.min.y, o.max.y),
                     std::clamp(p.z, o.min.z, o.max.z)};
    } else {
      Vec3 dir = p - o.min;
      double dist = norm(dir);
      surface = dist > 1e-12 ? o.min + dir * (o.radius / dist) : o.min + Vec3{o.radius, 0, 0};
    }
    Vec3 offset = surface - p;
    double d = norm(offset);
    if (d <= best_d) {
      best_d = d;
      best = offset;
    }
  }
  return best;
}

double planner_inflation(const WorldConfig& world) {
  return world.drone_radius + 0.5 * world.grid_resolution + 0.5;
}

namespace {

// Lattice over [0,extent]^2 x [min_altitude,max_altitude] at grid_resolution.
struct Grid {
  const WorldConfig& world;
  int nx, ny, nz;

  explicit Grid(const WorldConfig& w) : world(w) {
    nx = static_cast<int>(std::floor(w.extent / w.grid_resolution)) + 1;
    ny = nx;
    nz = static_cast<int>(std::floor((w.max_altitude - w.min_altitude) / w.grid_resolution)) + 1;
  }

  size_t count() const {
    return static_cast<size_t>(nx) * static_cast<size_t>(ny) * static_cast<size_t>(nz);
  }
  size_t id(int ix, int iy, int iz) const {
    return static_cast<size_t>(ix) +
           static_cast<size_t>(nx) * (static_cast<size_t>(iy) +
                                      static_cast<size_t>(ny) * static_cast<size_t>(iz));
  }
  Vec3 pos(int ix, int iy, int iz) const {
    const double r = world.grid_resolution;
    return Vec3{ix * r, iy * r, world.min_altitude + iz * r};
  }
  bool snap(const Vec3& p, int& ix, int& iy, int& iz) const {
    const double r = world.grid_resolution;
    double fx = p.x / r;
    double fy = p.y / r;
    double fz = (p.z - world.min_altitude) / r;
    ix = static_cast<int>(std::lround(fx));
    iy = static_cast<int>(std::lround(fy));
    iz = static_cast<int>(std::lround(fz));
    if (ix < 0 || ix >= nx || iy < 0 || iy >= ny || iz < 0 || iz >= nz) return false;
    Vec3 node = pos(ix, iy, iz);
    return euclidean_distance(node, p) < 1e-6;
  }
};

struct AStarResult {
  std::vector<Vec3> nodes;  // start..goal node positions
  double grid_length = 0.0;
};

AStarResult astar(const Vec3& start, const Vec3& goal, const std::vector<Obstacle>& obstacles,
                  const WorldConfig& world) {
  Grid grid(world);
  int sx, sy, sz, gx, gy, gz;
  if (!grid.snap(start, sx, sy, sz)) {
    throw ConfigError("planner start is not on the world lattice");
  }
  if (!grid.snap(goal, gx, gy, gz)) {
    throw ConfigError("planner goal is not on the world lattice");
  }
  const double infl = planner_inflation(world);
  if (collides(start, obstacles, infl)) throw UnreachableError("planner start is blocked");
  if (collides(goal, obstacles, infl)) throw UnreachableError("planner goal is blocked");

  const size_t n = grid.count();
  const size_t start_id = grid.id(sx, sy, sz);
  const size_t goal_id = grid.id(gx, gy, gz);
  const Vec3 goal_pos = grid.pos(gx, gy, gz);
  std::vector<double> gscore(n, std::numeric_limits<double>::infinity());
  std::vector<size_t> parent(n, SIZE_MAX);
  std::vector<uint8_t> closed(n, 0);

  struct Entry {
    double f;
    double g;
    size_t id;
    // Deterministic strict ordering for the max-heap: lowest f first,
    // then lowest g, then lowest node id.
    bool operator<(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (g != o.g) return g > o.g;
      return id > o.id;
    }
  };
  std::priority_queue<Entry> open;
  gscore[start_id] = 0.0;
  open.push({euclidean_distance(grid.pos(sx, sy, sz), goal_pos), 0.0, start_id});

  const double step = world.grid_resolution;
  const int dxs[6] = {1, -1, 0, 0, 0, 0};
  const int dys[6] = {0, 0, 1, -1, 0, 0};
  const int dzs[6] = {0, 0, 0, 0, 1, -1};

  while (!open.empty()) {
    Entry cur = open.top();
    open.pop();
    if (closed[cur.id]) continue;
    closed[cur.id] = 1;
    if (cur.id == goal_id) break;
    const int iz = static_cast<int>(cur.id / (static_cast<size_t>(grid.nx) * grid.ny));
    const size_t rem = cur.id % (static_cast<size_t>(grid.nx) * grid.ny);
    const int iy = static_cast<int>(rem / static_cast<size_t>(grid.nx));
    const int ix = static_cast<int>(rem % static_cast<size_t>(grid.nx));
    for (int k = 0; k < 6; ++k) {
      const int jx = ix + dxs[k];
      const int jy = iy + dys[k];
      const int jz = iz + dzs[k];
      if (jx < 0 || jx >= grid.nx || jy < 0 || jy >= grid.ny || jz < 0 || jz >= grid.nz) {
        continue;
      }
      const size_t jid = grid.id(jx, jy, jz);
      if (closed[jid]) continue;
      const Vec3 jpos = grid.pos(jx, jy, jz);
      if (collides(jpos, obstacles, infl)) continue;
      const double tentative = cur.g + step;
      if (tentative < gscore[jid]) {
        gscore[jid] = tentative;
        parent[jid] = cur.id;
        open.push({tentative + euclidean_distance(jpos, goal_pos), tentative, jid});
      }
    }
  }

  if (!closed[goal_id]) {
    throw UnreachableError("no collision-free grid path between start and goal");
  }

  AStarResult result;
  result.grid_length = gscore[goal_id];
  std::vector<size_t> chain;
  for (size_t id = goal_id; id != SIZE_MAX; id = parent[id]) {
    chain.push_back(id);
    if (id == start_id) break;
  }
  std::reverse(chain.begin(), chain.end());
  result.nodes.reserve(chain.size());
  for (size_t id : chain) {
    const int iz = static_cast<int>(id / (static_cast<size_t>(grid.nx) * grid.ny));
    const size_t rem = id % (static_cast<size_t>(grid.nx) * grid.ny);
    const int iy = static_cast<int>(rem / static_cast<size_t>(grid.nx));
    const int ix = static_cast<int>(rem % static_cast<size_t>(grid.nx));
    result.nodes.push_back(grid.pos(ix, iy, iz));
  }
  return result;
}

// Segment clearance for shortcutting: samples every meter at the planner
// inflation, so shortcuts keep the same berth as the grid path and the
// continuous segment stays flyable between samples.
bool segment_clear(const Vec3& a, const Vec3& b, const std::vector<Obstacle>& obstacles,
                   const WorldConfig& world) {
  const double len = euclidean_distance(a, b);
  const double margin = planner_inflation(world);
  const int samples = std::max(1, static_cast<int>(std::ceil(len)));
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    if (collides(a + (b - a) * t, obstacles, margin)) return false;
  }
  return true;
}

}  // namespace

Trajectory oracle_shortest_path(const Vec3& start, const Vec3& goal,
                                const std::vector<Obstacle>& obstacles,
                                const WorldConfig& world) {
  AStarResult raw = astar(start, goal, obstacles, world);

  // String pulling: greedily take the farthest visible node.
  std::vector<Vec3> smooth;
  smooth.push_back(raw.nodes.front());
  size_t i = 0;
  while (i + 1 < raw.nodes.size()) {
    size_t best = i + 1;
    for (size_t j = raw.nodes.size() - 1; j > i + 1; --j) {
      if (segment_clear(raw.nodes[i], raw.nodes[j], obstacles, world)) {
        best = j;
        break;
      }
    }
    smooth.push_back(raw.nodes[best]);
    i = best;
  }

  Trajectory t;
  t.waypoints.reserve(smooth.size());
  for (const Vec3& p : smooth) t.waypoints.emplace_back(p.x, p.y, p.z);
  return t;
}

double grid_shortest_length(const Vec3& start, const Vec3& goal,
                            const std::vector<Obstacle>& obstacles, const WorldConfig& world) {
  return astar(start, goal, obstacles, world).grid_length;
}

namespace {

std::vector<Obstacle> sample_obstacles(Rng& rng, const WorldConfig& world) {
  std::vector<Obstacle> obstacles;
  obstacles.reserve(static_cast<size_t>(world.obstacle_count));
  for (int i = 0; i < world.obstacle_count; ++i) {
    if (rng.uniform() < 0.6) {
      const double w = rng.uniform(15.0, 60.0);
      const double l = rng.uniform(15.0, 60.0);
      const double cx = rng.uniform(0.0, world.extent - w);
      const double cy = rng.uniform(0.0, world.extent - l);
      const double top = rng.uniform(world.min_altitude + 5.0, world.max_altitude - 15.0);
      obstacles.push_back(Obstacle::box({cx, cy, 0.0}, {cx + w, cy + l, top}));
    } else {
      const double r = rng.uniform(5.0, 20.0);
      const Vec3 c{rng.uniform(r, world.extent - r), rng.uniform(r, world.extent - r),
                   rng.uniform(world.min_altitude + 5.0, world.max_altitude - 5.0)};
      obstacles.push_back(Obstacle::sphere(c, r));
    }
  }
  return obstacles;
}

std::string scenario_name(const std::string& difficulty, uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06llu", difficulty.c_str(),
                static_cast<unsigned long long>(seed));
  return std::string(buf);
}

}  // namespace

Scenario generate_scenario(uint64_t seed, const std::string& difficulty,
                           const WorldConfig& world, const EncoderParams& enc) {
  if (difficulty != "easy" && difficulty != "hard") {
    throw ConfigError("difficulty must be easy or hard, got '" + difficulty + "'");
  }
  const bool easy = difficulty == "easy";
  // Straight-line windows chosen so the 250 m oracle-length split is
  // reachable by rejection: oracle length >= straight distance always.
  const double d_lo = easy ? 50.0 : 255.0;
  const double d_hi = easy ? 230.0 : 395.0;

  Grid grid(world);
  Rng rng(derive_seed(seed, streams::kScenario, easy ? 0 : 1));
  const double infl = planner_inflation(world);
  constexpr int kMaxAttempts = 200;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Obstacle> obstacles = sample_obstacles(rng, world);

    // Grid-aligned start/goal pair with the right straight-line distance.
    bool found = false;
    Vec3 start_pos, goal_pos;
    for (int inner = 0; inner < 200 && !found; ++inner) {
      const int sx = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(grid.nx)));
      const int sy = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(grid.ny)));
      const int sz = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(grid.nz)));
      const int tx = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(grid.nx)));
      const int ty = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(grid.ny)));
      const int tz = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(grid.nz)));
      start_pos = grid.pos(sx, sy, sz);
      goal_pos = grid.pos(tx, ty, tz);
      const double d = euclidean_distance(start_pos, goal_pos);
      if (d < d_lo || d > d_hi) continue;
      if (collides(start_pos, obstacles, infl) || collides(goal_pos, obstacles, infl)) continue;
      found = true;
    }
    if (!found) continue;

    Trajectory oracle;
    try {
      oracle = oracle_shortest_path(start_pos, goal_pos, obstacles, world);
    } catch (const UnreachableError&) {
      continue;
    }
    const double len = path_length(oracle);
    if (easy ? (len >= 250.0) : (len < 250.0)) continue;

    Scenario s;
    s.id = scenario_name(difficulty, seed);
    s.seed = seed;
    s.difficulty = difficulty;
    s.start = Pose(start_pos.x, start_pos.y, start_pos.z);
    const int64_t token_seed =
        static_cast<int64_t>(derive_seed(seed, streams::kScenario, 1000) & 0x7fffffff);
    s.goal = make_goal_spec(enc, goal_pos, token_seed);
    s.obstacles = std::move(obstacles);
    s.oracle_path = std::move(oracle);
    return s;
  }
  throw GenerationError("scenario generation exhausted after " + fmt_int(kMaxAttempts) +
                        " attempts (seed " + fmt_int(static_cast<long long>(seed)) + ", " +
                        difficulty + ")");
}

std::optional<Vec3> assistance_hint(Assistance level, const Pose& pose,
                                    const Scenario& scenario, double deviation,
                                    const WorldConfig& world) {
  if (level == Assistance::kL3) return std::nullopt;
  if (level == Assistance::kL2 && deviation <= world.helper_threshold) return std::nullopt;

  const auto& wps = scenario.oracle_path.waypoints;
  if (wps.empty()) return std::nullopt;
  size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < wps.size(); ++i) {
    const double d = euclidean_distance(pose.position(), wps[i].position());
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  const size_t next = std::min(nearest + 1, wps.size() - 1);
  return wps[next].position();
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  out += "id=" + s.id + "\n";
  out += "seed=" + fmt_int(static_cast<long long>(s.seed)) + "\n";
  out += "difficulty=" + s.difficulty + "\n";
  out += "start=" + join_doubles({s.start.x, s.start.y, s.start.z, s.start.theta, s.start.phi,
                                  s.start.psi}) + "\n";
  out += "goal=" + join_doubles({s.goal.goal_position.x, s.goal.goal_position.y,
                                 s.goal.goal_position.z}) + "\n";
  out += "goal_token_seed=" + fmt_int(s.goal.goal_token_seed) + "\n";
  for (const Obstacle& o : s.obstacles) {
    if (o.kind == Obstacle::Kind::kBox) {
      out += "obstacle=box," +
             join_doubles({o.min.x, o.min.y, o.min.z, o.max.x, o.max.y, o.max.z}) + "\n";
    } else {
      out += "obstacle=sphere," + join_doubles({o.min.x, o.min.y, o.min.z, o.radius}) + "\n";
    }
  }
  for (const Pose& p : s.oracle_path.waypoints) {
    out += "oracle=" + join_doubles({p.x, p.y, p.z}) + "\n";
  }
  return out;
}

Scenario parse_scenario(const std::string& text, const EncoderParams& enc) {
  Scenario s;
  Vec3 goal_pos;
  int64_t token_seed = 0;
  bool have_goal = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    KeyValue kv = parse_kv(line);
    if (kv.key == "id") {
      s.id = kv.value;
    } else if (kv.key == "seed") {
      s.seed = static_cast<uint64_t>(parse_int(kv.value));
    } else if (kv.key == "difficulty") {
      s.difficulty = kv.value;
    } else if (kv.key == "start") {
      auto v = split_doubles(kv.value);
      if (v.size() != 6) throw FormatError("scenario start needs 6 numbers");
      s.start = Pose(v[0], v[1], v[2], v[3], v[4], v[5]);
    } else if (kv.key == "goal") {
      auto v = split_doubles(kv.value);
      if (v.size() != 3) throw FormatError("scenario goal needs 3 numbers");
      goal_pos = {v[0], v[1], v[2]};
      have_goal = true;
    } else if (kv.key == "goal_token_seed") {
      token_seed = parse_int(kv.value);
    } else if (kv.key == "obstacle") {
      auto parts = split(kv.value, ',');
      if (parts.empty()) throw FormatError("empty obstacle record");
      if (parts[0] == "box") {
        if (parts.size() != 7) throw FormatError("box obstacle needs 6 numbers");
        s.obstacles.push_back(Obstacle::box(
            {parse_double(parts[1]), parse_double(parts[2]), parse_double(parts[3])},
            {parse_double(parts[4]), parse_double(parts[5]), parse_double(parts[6])}));
      } else if (parts[0] == "sphere") {
        if (parts.size() != 5) throw FormatError("sphere obstacle needs 4 numbers");
        s.obstacles.push_back(Obstacle::sphere(
            {parse_double(parts[1]), parse_double(parts[2]), parse_double(parts[3])},
            parse_double(parts[4])));
      } else {
        throw FormatError("unknown obstacle kind '" + parts[0] + "'");
      }
    } else if (kv.key == "oracle") {
      auto v = split_doubles(kv.value);
      if (v.size() != 3) throw FormatError("oracle waypoint needs 3 numbers");
      s.oracle_path.waypoints.emplace_back(v[0], v[1], v[2]);
    } else {
      throw FormatError("unknown scenario key '" + kv.key + "'");
    }
  }
  if (!have_goal || s.id.empty()) throw FormatError("scenario file missing id or goal");
  s.goal = make_goal_spec(enc, goal_pos, token_seed);
  return s;
}

}  // namespace aeronav
