#ifndef AERONAV_TRAINER_HPP
#define AERONAV_TRAINER_HPP

#include <string>
#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/encoder.hpp"
#include "aeronav/episode.hpp"
#include "aeronav/metrics.hpp"
#include "aeronav/policy.hpp"
#include "aeronav/ppo.hpp"
#include "aeronav/rewards.hpp"
#include "aeronav/world.hpp"

namespace aeronav {

struct TrainState {
  PolicyParams policy;      // current pi_theta
  PolicyParams policy_old;  // collection snapshot, refreshed per iteration
  PolicyParams policy_ref;  // frozen at run start, anchors the KL term
  ValueParams value;
  AdamState opt;
  int iteration = 0;
  uint64_t master_seed = 0;
};

// Fresh state with seeded initialization; policy_ref and policy_old start
// as copies of the initial policy.
TrainState make_train_state(const RunConfig& cfg);

struct IterationStats {
  int iteration = 0;
  double mean_return = 0.0;  // mean per-episode sum of combined rewards
  double mean_kl = 0.0;      // KL(pi_theta || pi_ref) over the batch, post-update
  int successes = 0;
  int episodes = 0;
};

// Snapshot -> collect -> K clipped-surrogate epochs. The value model stays
// frozen here; it is fitted once up front by train_run.
IterationStats train_iteration(TrainState& state, const std::vector<Scenario>& scenarios,
                               Assistance assistance, const RunConfig& cfg,
                               const EncoderParams& enc);

// Deterministic expert rollouts (oracle-following agent) for value fitting.
std::vector<Episode> collect_expert_episodes(const std::vector<Scenario>& scenarios,
                                             int count, Assistance assistance,
                                             const RunConfig& cfg, const EncoderParams& enc,
                                             const ValueParams& value, uint64_t master_seed);

// Episode-level wrapper over rewards::fit_value_model.
ValueFitReport fit_value_model(ValueParams& value, const std::vector<Episode>& experts,
                               double margin, int epochs, double learning_rate,
                               double holdout_fraction, uint64_t seed);

struct TrainRunResult {
  std::string final_checkpoint_path;
  std::vector<std::string> log_lines;  // deterministic per-iteration records
  ValueFitReport value_fit;
  TrainState state;
};

// Full pipeline: fit the value model on expert episodes, then iterate
// train_iteration, checkpointing along the way. Writes ckpt_{iteration}
// files and training_log.txt under out_dir. A partial checkpoint is
// flushed if an iteration throws.
TrainRunResult train_run(const RunConfig& cfg, const std::vector<Scenario>& scenarios,
                         const EncoderParams& enc, const std::string& out_dir);

// ---- checkpoints ----------------------------------------------------

struct Checkpoint {
  int iteration = 0;
  uint64_t encoder_seed = 0;
  int d = 0;
  std::string config_hash;
  PolicyParams policy;
  ValueParams value;
};

std::string serialize_checkpoint(const Checkpoint& c);
Checkpoint parse_checkpoint(const std::string& text);
void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

// ---- evaluation ------------------------------------------------------

struct EvalOutcome {
  std::vector<Episode> episodes;  // ordered by scenario index
  MetricsReport report;
};

// Runs every scenario once at the given level. Episodes may run on up to
// `jobs` threads; results are merged by scenario index, so the outcome is
// identical for any job count.
EvalOutcome evaluate_suite(const Agent& agent, const ValueParams& value,
                           const std::vector<Scenario>& scenarios, Assistance assistance,
                           const RunConfig& cfg, const EncoderParams& enc, int jobs = 1);

}  // namespace aeronav

#endif  // AERONAV_TRAINER_HPP
