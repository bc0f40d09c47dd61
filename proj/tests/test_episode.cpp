#include <doctest.h>

#include <cmath>

#include "aeronav/episode.hpp"
#include "aeronav/errors.hpp"
#include "aeronav/metrics.hpp"
#include "aeronav/rng.hpp"
#include "aeronav/trainer.hpp"

using namespace aeronav;

namespace {

struct Fixture {
  RunConfig cfg;
  EncoderParams enc;
  ValueParams value;

  Fixture() : enc(make()) {
    Rng rng(derive_seed(cfg.episode.seed, streams::kValueInit));
    value = make_value(cfg.encoder.d, 16, 1, rng);
  }

  EncoderParams make() {
    cfg.world.obstacle_count = 0;
    cfg.episode.seed = 3;
    return EncoderParams(cfg.encoder.encoder_seed, cfg.encoder.d, cfg.world);
  }

  Episode run(const Agent& agent, const Scenario& s, Assistance level, uint64_t seed) {
    return run_episode(agent, value, s, level, cfg.episode, cfg.reward, cfg.world, enc, seed);
  }
};

// Always pushes straight into the wall ahead.
class ChargeAgent : public Agent {
 public:
  explicit ChargeAgent(Vec3 dir) : dir_(dir) {}
  std::pair<Action, double> act(const StepView&, Rng&) const override {
    return {Action{dir_.x, dir_.y, dir_.z, 0, 0, 0}, 0.0};
  }

 private:
  Vec3 dir_;
};

}  // namespace

TEST_CASE("oracle agent reaches the goal in an empty world") {
  Fixture f;
  Scenario s = generate_scenario(100, "easy", f.cfg.world, f.enc);
  OraclePathAgent agent;
  Episode e = f.run(agent, s, Assistance::kL1, 17);
  CHECK(e.outcome == Outcome::kSuccess);
  CHECK(e.final_distance <= f.cfg.episode.success_radius);
  CHECK(e.records.size() < 200);
  CHECK(e.min_distance <= e.final_distance);
  // Success pose is among the visited poses (closed containment).
  CHECK(episode_success(visited_poses(e), s.goal.goal_position,
                        f.cfg.episode.success_radius));
}

TEST_CASE("zero-action agent times out with exactly max_steps records") {
  Fixture f;
  Scenario s = generate_scenario(101, "easy", f.cfg.world, f.enc);
  ZeroActionAgent agent;
  Episode e = f.run(agent, s, Assistance::kL3, 17);
  CHECK(e.outcome == Outcome::kTimeout);
  CHECK(e.records.size() == static_cast<size_t>(f.cfg.episode.max_steps));
  CHECK(e.final_distance == doctest::Approx(e.initial_distance));
  CHECK(!episode_success(visited_poses(e), s.goal.goal_position,
                         f.cfg.episode.success_radius));
}

TEST_CASE("driving into a wall collides and truncates the episode") {
  Fixture f;
  Scenario s = generate_scenario(102, "easy", f.cfg.world, f.enc);
  // Plant a wall right of the start, then charge it.
  const Vec3 p = s.start.position();
  s.obstacles.push_back(Obstacle::box({p.x + 20, p.y - 50, 0}, {p.x + 40, p.y + 50, 200}));
  ChargeAgent agent({5, 0, 0});
  Episode e = f.run(agent, s, Assistance::kL3, 17);
  CHECK(e.outcome == Outcome::kCollision);
  CHECK(e.records.size() < 10);
  CHECK(e.records.back().collided);
  // Only the last record may carry the collision flag.
  for (size_t i = 0; i + 1 < e.records.size(); ++i) CHECK(!e.records[i].collided);
}

TEST_CASE("episodes are deterministic: byte-identical serializations") {
  Fixture f;
  Scenario s = generate_scenario(103, "easy", f.cfg.world, f.enc);
  Rng prng(9);
  PolicyParams policy = make_policy(f.cfg.encoder.d, 16, 1, -0.5, prng);
  GaussianPolicyAgent agent(policy);
  Episode a = f.run(agent, s, Assistance::kL1, 99);
  Episode b = f.run(agent, s, Assistance::kL1, 99);
  CHECK(serialize_episode(a, f.enc) == serialize_episode(b, f.enc));
  Episode c = f.run(agent, s, Assistance::kL1, 100);
  CHECK(serialize_episode(a, f.enc) != serialize_episode(c, f.enc));
}

TEST_CASE("step records carry increasing t, values, rewards, and hints per level") {
  Fixture f;
  Scenario s = generate_scenario(104, "easy", f.cfg.world, f.enc);
  Rng prng(5);
  PolicyParams policy = make_policy(f.cfg.encoder.d, 16, 1, -0.5, prng);
  GaussianPolicyAgent agent(policy);

  Episode l1 = f.run(agent, s, Assistance::kL1, 7);
  for (size_t i = 0; i < l1.records.size(); ++i) {
    const StepRecord& r = l1.records[i];
    CHECK(r.t == static_cast<int>(i));
    CHECK(r.hint.has_value());  // L1: hint every step
    CHECK(r.reward_verifiable > 0.0);
    CHECK(std::isfinite(r.reward_dense));
    CHECK(std::isfinite(r.value));
    CHECK(std::isfinite(r.log_prob));
    CHECK(r.observation.size() == static_cast<size_t>(f.cfg.encoder.d));
  }

  Episode l3 = f.run(agent, s, Assistance::kL3, 7);
  for (const StepRecord& r : l3.records) CHECK(!r.hint.has_value());

  // L2 near the oracle path: no hint while deviation stays small.
  Episode l2 = f.run(agent, s, Assistance::kL2, 7);
  CHECK(!l2.records.front().hint.has_value());
}

TEST_CASE("min_distance tracks the continuous closest approach") {
  Fixture f;
  Scenario s = generate_scenario(105, "easy", f.cfg.world, f.enc);
  OraclePathAgent agent;
  Episode e = f.run(agent, s, Assistance::kL1, 3);
  CHECK(e.min_distance <= e.final_distance);
  CHECK(e.min_distance <= e.initial_distance);
  double best_pose_distance = std::numeric_limits<double>::infinity();
  for (const Pose& p : visited_poses(e)) {
    best_pose_distance = std::min(
        best_pose_distance, euclidean_distance(p.position(), s.goal.goal_position));
  }
  // Continuous tracking can only be tighter than the waypoint minimum.
  CHECK(e.min_distance <= best_pose_distance + 1e-12);
}

TEST_CASE("value sequences span records plus the terminal state") {
  Fixture f;
  Scenario s = generate_scenario(106, "easy", f.cfg.world, f.enc);
  OraclePathAgent agent;
  Episode e = f.run(agent, s, Assistance::kL1, 3);
  auto seq = observation_sequence(e);
  CHECK(seq.size() == e.records.size() + 1);
  CHECK(seq.back() == e.final_observation);
}

TEST_CASE("episode log format: header, one step line per record, final line") {
  Fixture f;
  Scenario s = generate_scenario(107, "easy", f.cfg.world, f.enc);
  ZeroActionAgent agent;
  f.cfg.episode.max_steps = 5;
  Episode e = f.run(agent, s, Assistance::kL2, 21);
  const std::string log = serialize_episode(e, f.enc);

  size_t lines = 0;
  for (char c : log) lines += (c == '\n');
  CHECK(lines == 1 + e.records.size() + 1);
  CHECK(log.rfind("episode scenario_id=" + s.id + " seed=21 assistance=L2 outcome=timeout",
                  0) == 0);
  CHECK(log.find(" encoder_seed=42 d=64\n") != std::string::npos);
  CHECK(log.find("\nstep t=0 ") != std::string::npos);
  CHECK(log.find("\nfinal ") != std::string::npos);
  // Floats round-trip through the shortest representation: spot-check one.
  const std::string key = " initial_distance=";
  const size_t at = log.find(key) + key.size();
  const std::string token = log.substr(at, log.find(' ', at) - at);
  CHECK(std::stod(token) == e.initial_distance);
}

TEST_CASE("goal_state_observation matches an in-loop observation at the goal") {
  Fixture f;
  Scenario s = generate_scenario(108, "easy", f.cfg.world, f.enc);
  FeatureVector obs = goal_state_observation(s, Assistance::kL3, f.cfg.world, f.enc);
  const Vec3 g = s.goal.goal_position;
  FeatureVector manual = encode_state(f.enc, Pose(g.x, g.y, g.z), s.goal, std::nullopt);
  CHECK(obs == manual);
}
