#include "aeronav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aeronav/errors.hpp"
#include "aeronav/rewards.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "success";
    case Outcome::kCollision: return "collision";
    case Outcome::kTimeout: return "timeout";
  }
  throw ConfigError("unknown outcome");
}

std::pair<Action, double> GaussianPolicyAgent::act(const StepView& view, Rng& rng) const {
  PolicyOutput out = policy_forward(*params_, view.observation);
  std::array<double, kActionDim> sample{};
  for (int i = 0; i < kActionDim; ++i) {
    sample[static_cast<size_t>(i)] = out.mean[static_cast<size_t>(i)] +
                                     out.std[static_cast<size_t>(i)] * rng.normal();
  }
  Action a = clamp_action(array_to_action(sample), view.bounds);
  const double lp = gaussian_log_prob(out.mean, out.std, action_to_array(a));
  return {a, lp};
}

std::pair<Action, double> OraclePathAgent::act(const StepView& view, Rng&) const {
  const auto& wps = view.scenario.oracle_path.waypoints;
  Vec3 target = view.scenario.goal.goal_position;
  if (!wps.empty()) {
    size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < wps.size(); ++i) {
      const double d = euclidean_distance(view.pose.position(), wps[i].position());
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    target = wps[std::min(nearest + 1, wps.size() - 1)].position();
    // Already on top of the last waypoint: head for the goal itself.
    if (nearest + 1 >= wps.size() &&
        euclidean_distance(view.pose.position(), target) < 1e-9) {
      target = view.scenario.goal.goal_position;
    }
  }
  Vec3 delta = target - view.pose.position();
  const double worst =
      std::max({std::abs(delta.x), std::abs(delta.y), std::abs(delta.z)});
  if (worst > view.bounds.max_step_len) {
    delta = delta * (view.bounds.max_step_len / worst);
  }
  return {Action{delta.x, delta.y, delta.z, 0.0, 0.0, 0.0}, 0.0};
}

std::pair<Action, double> ZeroActionAgent::act(const StepView&, Rng&) const {
  return {Action{}, 0.0};
}

namespace {

struct StateSnapshot {
  Pose pose;
  std::optional<Vec3> hint;
  FeatureVector observation;
  double value = 0.0;
};

StateSnapshot observe(const Pose& pose, const Scenario& scenario, Assistance assistance,
                      const WorldConfig& world, const EncoderParams& enc,
                      const ValueParams& value) {
  StateSnapshot s;
  s.pose = pose;
  const double deviation = polyline_distance(pose.position(), scenario.oracle_path);
  s.hint = assistance_hint(assistance, pose, scenario, deviation, world);
  Vec3 clearance{};
  if (auto off = nearest_obstacle_offset(pose.position(), scenario.obstacles,
                                         world.sensing_range)) {
    clearance = *off;
  }
  s.observation = encode_state(enc, pose, scenario.goal, s.hint, clearance);
  s.value = value_forward(value, s.observation);
  return s;
}

}  // namespace

Episode run_episode(const Agent& agent, const ValueParams& value, const Scenario& scenario,
                    Assistance assistance, const EpisodeConfig& episode_cfg,
                    const RewardConfig& reward_cfg, const WorldConfig& world,
                    const EncoderParams& enc, uint64_t rng_seed) {
  Rng rng(rng_seed);
  const Vec3 goal = scenario.goal.goal_position;
  const FeatureVector& goal_features = scenario.goal.description_features;

  Episode e;
  e.scenario_id = scenario.id;
  e.seed = rng_seed;
  e.assistance = assistance;
  e.initial_distance = euclidean_distance(scenario.start.position(), goal);
  e.min_distance = e.initial_distance;
  e.outcome = Outcome::kTimeout;

  StateSnapshot cur = observe(scenario.start, scenario, assistance, world, enc, value);

  for (int t = 0; t < episode_cfg.max_steps; ++t) {
    StepView view{cur.pose, cur.observation, cur.hint, t, scenario, world.action_bounds};
    auto [action, log_prob] = agent.act(view, rng);
    const Pose next_pose = apply_action(cur.pose, action, world.action_bounds);

    const double seg_min =
        point_segment_distance(goal, cur.pose.position(), next_pose.position());
    e.min_distance = std::min(e.min_distance, seg_min);
    e.agent_path_length +=
        euclidean_distance(cur.pose.position(), next_pose.position());

    const bool collided = collides(next_pose, scenario.obstacles, world.drone_radius);
    StateSnapshot next = observe(next_pose, scenario, assistance, world, enc, value);

    StepRecord rec;
    rec.t = t;
    rec.pose = cur.pose;
    rec.observation = cur.observation;
    rec.action = action;
    rec.log_prob = log_prob;
    rec.value = cur.value;
    rec.reward_dense = per_step_shaped_reward(cur.value, next.value, reward_cfg.gamma,
                                              reward_cfg.shaping_mode, t + 1);
    rec.reward_verifiable = verifiable_reward(
        cosine_similarity(next.observation, goal_features), reward_cfg.r_level,
        reward_cfg.r_max);
    rec.collided = collided;
    rec.hint = cur.hint;
    e.records.push_back(std::move(rec));

    cur = std::move(next);
    if (collided) {
      e.outcome = Outcome::kCollision;
      break;
    }
    if (euclidean_distance(cur.pose.position(), goal) <= episode_cfg.success_radius) {
      e.outcome = Outcome::kSuccess;
      break;
    }
  }

  e.final_pose = cur.pose;
  e.final_observation = cur.observation;
  e.final_value = cur.value;
  e.final_distance = euclidean_distance(cur.pose.position(), goal);
  return e;
}

FeatureVector goal_state_observation(const Scenario& scenario, Assistance assistance,
                                     const WorldConfig& world, const EncoderParams& enc) {
  const Vec3 g = scenario.goal.goal_position;
  // Value content is irrelevant here; reuse the loop's observation path.
  ValueParams dummy;
  dummy.net = Mlp({enc.d(), 1});
  return observe(Pose(g.x, g.y, g.z), scenario, assistance, world, enc, dummy).observation;
}

std::vector<Pose> visited_poses(const Episode& e) {
  std::vector<Pose> poses;
  poses.reserve(e.records.size() + 1);
  for (const StepRecord& r : e.records) poses.push_back(r.pose);
  poses.push_back(e.final_pose);
  return poses;
}

std::vector<FeatureVector> observation_sequence(const Episode& e) {
  std::vector<FeatureVector> seq;
  seq.reserve(e.records.size() + 1);
  for (const StepRecord& r : e.records) seq.push_back(r.observation);
  seq.push_back(e.final_observation);
  return seq;
}

namespace {

void append_pose(std::string& out, const Pose& p) {
  out += " x=" + fmt_double(p.x) + " y=" + fmt_double(p.y) + " z=" + fmt_double(p.z) +
         " theta=" + fmt_double(p.theta) + " phi=" + fmt_double(p.phi) +
         " psi=" + fmt_double(p.psi);
}

}  // namespace

std::string serialize_episode(const Episode& e, const EncoderParams& enc) {
  std::string out;
  out += "episode scenario_id=" + e.scenario_id +
         " seed=" + fmt_int(static_cast<long long>(e.seed)) +
         " assistance=" + to_string(e.assistance) + " outcome=" + to_string(e.outcome) +
         " steps=" + fmt_int(static_cast<long long>(e.records.size())) +
         " final_distance=" + fmt_double(e.final_distance) +
         " min_distance=" + fmt_double(e.min_distance) +
         " initial_distance=" + fmt_double(e.initial_distance) +
         " path_length=" + fmt_double(e.agent_path_length) +
         " encoder_seed=" + fmt_int(static_cast<long long>(enc.seed())) +
         " d=" + fmt_int(enc.d()) + "\n";
  for (const StepRecord& r : e.records) {
    out += "step t=" + fmt_int(r.t);
    append_pose(out, r.pose);
    out += " dx=" + fmt_double(r.action.dx) + " dy=" + fmt_double(r.action.dy) +
           " dz=" + fmt_double(r.action.dz) + " dtheta=" + fmt_double(r.action.dtheta) +
           " dphi=" + fmt_double(r.action.dphi) + " dpsi=" + fmt_double(r.action.dpsi);
    out += " log_prob=" + fmt_double(r.log_prob) + " value=" + fmt_double(r.value) +
           " reward_dense=" + fmt_double(r.reward_dense) +
           " reward_verifiable=" + fmt_double(r.reward_verifiable) +
           " collided=" + std::string(r.collided ? "1" : "0");
    if (r.hint) {
      out += " hint=" + join_doubles({r.hint->x, r.hint->y, r.hint->z});
    }
    out += " obs=" + join_doubles(r.observation.values);
    out += "\n";
  }
  out += "final";
  append_pose(out, e.final_pose);
  out += " value=" + fmt_double(e.final_value) + "\n";
  return out;
}

}  // namespace aeronav
