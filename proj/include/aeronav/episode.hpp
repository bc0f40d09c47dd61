#ifndef AERONAV_EPISODE_HPP
#define AERONAV_EPISODE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/encoder.hpp"
#include "aeronav/geometry.hpp"
#include "aeronav/policy.hpp"
#include "aeronav/rng.hpp"
#include "aeronav/world.hpp"

namespace aeronav {

// One decision step: the state where the action was taken, what was
// observed, what was done, and what it earned. collided refers to the pose
// the action arrived at; a collided step is always the last record.
struct StepRecord {
  int t = 0;
  Pose pose;
  FeatureVector observation;
  Action action;
  double log_prob = 0.0;
  double value = 0.0;
  double reward_dense = 0.0;
  double reward_verifiable = 0.0;
  bool collided = false;
  std::optional<Vec3> hint;
};

enum class Outcome { kSuccess, kCollision, kTimeout };

std::string to_string(Outcome o);

struct Episode {
  std::string scenario_id;
  uint64_t seed = 0;
  Assistance assistance = Assistance::kL3;
  std::vector<StepRecord> records;
  Outcome outcome = Outcome::kTimeout;
  double final_distance = 0.0;
  double min_distance = 0.0;   // closest continuous approach to the goal
  double initial_distance = 0.0;
  double agent_path_length = 0.0;
  // Terminal state reached by the last action; completes the value sequence.
  Pose final_pose;
  FeatureVector final_observation;
  double final_value = 0.0;
};

// Everything an agent may look at when choosing an action.
struct StepView {
  const Pose& pose;
  const FeatureVector& observation;
  const std::optional<Vec3>& hint;
  int t;
  const Scenario& scenario;
  const ActionBounds& bounds;
};

class Agent {
 public:
  virtual ~Agent() = default;
  // Returns the action and its log probability under the agent's policy.
  virtual std::pair<Action, double> act(const StepView& view, Rng& rng) const = 0;
};

// Samples from the diagonal Gaussian, clamps into the action bounds, and
// reports the log density at the clamped action (so recomputing the log
// probability from the same parameters reproduces it exactly).
class GaussianPolicyAgent : public Agent {
 public:
  explicit GaussianPolicyAgent(const PolicyParams& params) : params_(&params) {}
  std::pair<Action, double> act(const StepView& view, Rng& rng) const override;

 private:
  const PolicyParams* params_;
};

// Deterministic expert: heads for the next oracle waypoint at full speed.
class OraclePathAgent : public Agent {
 public:
  std::pair<Action, double> act(const StepView& view, Rng& rng) const override;
};

// Stationary reference.
class ZeroActionAgent : public Agent {
 public:
  std::pair<Action, double> act(const StepView& view, Rng& rng) const override;
};

// Observe -> hint -> act -> move -> collision/success check, until success,
// collision, or max_steps. Deterministic given (agent, scenario, rng_seed).
Episode run_episode(const Agent& agent, const ValueParams& value, const Scenario& scenario,
                    Assistance assistance, const EpisodeConfig& episode_cfg,
                    const RewardConfig& reward_cfg, const WorldConfig& world,
                    const EncoderParams& enc, uint64_t rng_seed);

// All poses touched at decision points plus the terminal pose.
std::vector<Pose> visited_poses(const Episode& e);

// Observation at the goal position itself, built the same way the episode
// loop builds per-step observations (value-fit sequences are anchored on it).
FeatureVector goal_state_observation(const Scenario& scenario, Assistance assistance,
                                     const WorldConfig& world, const EncoderParams& enc);

// Per-state value-model inputs along the episode (records plus terminal).
std::vector<FeatureVector> observation_sequence(const Episode& e);

// Line-delimited structured text: one header line, one line per record,
// one trailing line for the terminal state. Floats are shortest round-trip.
std::string serialize_episode(const Episode& e, const EncoderParams& enc);

}  // namespace aeronav

#endif  // AERONAV_EPISODE_HPP
