#ifndef AERONAV_CONFIG_HPP
#define AERONAV_CONFIG_HPP

#include <cstdint>
#include <string>

#include "aeronav/geometry.hpp"

namespace aeronav {

enum class ShapingMode {
  kValueDrop,   // sum of discounted value decreases, gamma^t * (v_t - v_{t+1})
  kPotential,   // discounted potential difference, gamma^(t-1) * (gamma*v_{t+1} - v_t)
};

std::string to_string(ShapingMode m);
ShapingMode shaping_mode_from_string(const std::string& s);

enum class Assistance { kL1, kL2, kL3 };

std::string to_string(Assistance a);
Assistance assistance_from_string(const std::string& s);

struct EpisodeConfig {
  int max_steps = 200;
  double success_radius = 20.0;  // meters
  uint64_t seed = 0;
};

struct RewardConfig {
  double gamma = 1.0;                    // discount, in (0, 1]
  double r_level = 5.0;                  // positive cap; +inf disables it
  double r_max = 1e6;                    // finite cap used when r_level is inf
  ShapingMode shaping_mode = ShapingMode::kPotential;
  double margin = 0.01;                  // ranking-loss margin
  double w_dense = 1.0;
  double w_verifiable = 1.0;
};

struct OptimizerConfig {
  double epsilon = 0.2;         // clip range, in (0, 1)
  double beta = 0.1;            // KL coefficient, >= 0
  double learning_rate = 1e-4;
  int batch_size = 128;         // minibatch size for inner-epoch updates
};

struct WorldConfig {
  double extent = 500.0;        // xy span [0, extent] meters
  double min_altitude = 10.0;
  double max_altitude = 110.0;
  int obstacle_count = 12;
  double drone_radius = 1.0;
  double grid_resolution = 5.0;
  double helper_threshold = 30.0;  // L2 hint trigger, meters off the oracle path
  double sensing_range = 60.0;     // obstacle clearance sensor range
  ActionBounds action_bounds;
};

struct EncoderConfig {
  uint64_t encoder_seed = 42;
  int d = 64;  // feature dimension
};

struct TrainConfig {
  int iterations = 200;
  int rollout_episodes = 16;
  int inner_epochs = 4;
  int hidden_units = 64;
  int hidden_layers = 2;
  double log_std_init = -0.5;
  bool baseline_subtract = false;
  int expert_episodes = 200;
  int value_epochs = 80;
  double value_learning_rate = 1e-3;
  double value_holdout = 0.2;
  int checkpoint_interval = 50;
  Assistance assistance = Assistance::kL1;
};

// Every tunable in one place. File format: flat UTF-8 `key=value` lines,
// keys named exactly after the fields; unknown keys are an error.
struct RunConfig {
  EpisodeConfig episode;
  RewardConfig reward;
  OptimizerConfig optimizer;
  WorldConfig world;
  EncoderConfig encoder;
  TrainConfig train;

  // Throws ConfigError when any invariant is violated.
  void validate() const;
};

// Parse `key=value` lines over defaults. Blank lines and lines starting
// with '#' are skipped. Unknown keys throw ConfigError. Validates on return.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Canonical serialization: every key, sorted, shortest round-trip values.
std::string serialize_run_config(const RunConfig& cfg);

// FNV-1a hash of the canonical serialization; recorded in checkpoints.
std::string config_hash(const RunConfig& cfg);

}  // namespace aeronav

#endif  // AERONAV_CONFIG_HPP
