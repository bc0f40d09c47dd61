#ifndef AERONAV_COMMANDS_HPP
#define AERONAV_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace aeronav {

inline constexpr const char* kVersion = "0.1.0";

// Relative output paths are resolved under $AERONAV_OUT_ROOT when set.
std::string resolve_out_path(const std::string& path);

struct GenerateOptions {
  uint64_t seed = 0;
  int easy = 0;
  int hard = 0;
  std::string out_dir;
  std::string config_path;  // optional; defaults when empty
};

struct TrainOptions {
  std::string suite_dir;
  double fraction = 1.0;
  std::string config_path;  // required
  std::string out_dir;
};

struct EvalOptions {
  std::string suite_dir;
  std::string checkpoint;  // path, or the built-in references "oracle" / "zero"
  std::string assistance = "L1";
  std::string out_file;
  std::string config_path;  // optional
  int jobs = 1;
};

struct AblateOptions {
  std::string suite_dir;
  std::string r_levels = "1.0,3.0,5.0,inf";
  std::string config_path;  // required
  std::string out_dir;
  int jobs = 1;
};

// Writes ceil counts of easy/hard scenarios plus index.txt. Deterministic
// in (seed, counts, config).
void cmd_generate(const GenerateOptions& opt);

// Seeded subsample of ceil(fraction * suite size) scenarios, full training
// run, manifest + checkpoints + training log under out_dir.
void cmd_train(const TrainOptions& opt);

// Evaluates every suite scenario at one assistance level; writes the
// metrics CSV to out_file and per-episode logs next to it. Refuses to run
// when the checkpoint's encoder fingerprint does not match the config.
void cmd_eval(const EvalOptions& opt);

// One paired-seed train+eval per reward threshold; per-threshold artifacts
// in subdirectories and a combined ablation.csv. Needs >= 2 thresholds.
void cmd_ablate(const AblateOptions& opt);

}  // namespace aeronav

#endif  // AERONAV_COMMANDS_HPP
