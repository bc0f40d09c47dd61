#include "aeronav/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include "aeronav/config.hpp"
#include "aeronav/errors.hpp"
#include "aeronav/suite.hpp"
#include "aeronav/textio.hpp"
#include "aeronav/trainer.hpp"

namespace aeronav {

std::string resolve_out_path(const std::string& path) {
  const char* root = std::getenv("AERONAV_OUT_ROOT");
  if (root == nullptr || *root == '\0') return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(root) / p).string();
}

namespace {

RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) {
    RunConfig cfg;
    cfg.validate();
    return cfg;
  }
  return load_run_config(path);
}

EncoderParams make_encoder(const RunConfig& cfg) {
  return EncoderParams(cfg.encoder.encoder_seed, cfg.encoder.d, cfg.world);
}

std::vector<size_t> subsample_indices(size_t total, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw UsageError("fraction must be in (0, 1]");
  }
  size_t keep = static_cast<size_t>(
      std::ceil(fraction * static_cast<double>(total) - 1e-12));
  keep = std::clamp<size_t>(keep, 1, total);
  std::vector<size_t> order(total);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(derive_seed(seed, streams::kSubsample));
  rng.shuffle(order);
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

std::string sanitize_token(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::map<std::string, std::string>& extra) {
  std::map<std::string, std::string> entries;
  for (const std::string& raw : split(serialize_run_config(cfg), '\n')) {
    if (raw.empty()) continue;
    KeyValue kv = parse_kv(raw);
    entries[kv.key] = kv.value;
  }
  entries["aeronav_version"] = kVersion;
  entries["config_hash"] = config_hash(cfg);
  for (const auto& [k, v] : extra) entries[k] = v;
  std::string out;
  for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
  write_file(path, out);
}

struct LoadedPolicy {
  std::unique_ptr<Agent> agent;
  ValueParams value;
  std::string label;
};

LoadedPolicy load_agent(const std::string& checkpoint, const RunConfig& cfg,
                        PolicyParams& policy_storage) {
  LoadedPolicy out;
  if (checkpoint == "oracle" || checkpoint == "zero") {
    // Built-in reference agents; the value model is a fresh seeded net,
    // only used to fill per-step diagnostics.
    Rng value_rng(derive_seed(cfg.episode.seed, streams::kValueInit));
    out.value = make_value(cfg.encoder.d, cfg.train.hidden_units, cfg.train.hidden_layers,
                           value_rng);
    if (checkpoint == "oracle") {
      out.agent = std::make_unique<OraclePathAgent>();
    } else {
      out.agent = std::make_unique<ZeroActionAgent>();
    }
    out.label = checkpoint;
    return out;
  }
  Checkpoint c = load_checkpoint(checkpoint);
  if (c.encoder_seed != cfg.encoder.encoder_seed || c.d != cfg.encoder.d) {
    throw ConfigError("checkpoint encoder fingerprint (seed " +
                      fmt_int(static_cast<long long>(c.encoder_seed)) + ", d " + fmt_int(c.d) +
                      ") does not match config (seed " +
                      fmt_int(static_cast<long long>(cfg.encoder.encoder_seed)) + ", d " +
                      fmt_int(cfg.encoder.d) + "); refusing to evaluate");
  }
  if (c.policy.net.input_dim() != cfg.encoder.d) {
    throw ConfigError("checkpoint policy input dimension does not match encoder output");
  }
  policy_storage = c.policy;
  out.value = c.value;
  out.agent = std::make_unique<GaussianPolicyAgent>(policy_storage);
  out.label = std::filesystem::path(checkpoint).stem().string();
  return out;
}

}  // namespace

void cmd_generate(const GenerateOptions& opt) {
  if (opt.easy + opt.hard < 1) throw UsageError("need at least one scenario (--easy/--hard)");
  if (opt.out_dir.empty()) throw UsageError("--out is required");
  RunConfig cfg = load_config_or_default(opt.config_path);
  EncoderParams enc = make_encoder(cfg);

  std::vector<Scenario> scenarios;
  scenarios.reserve(static_cast<size_t>(opt.easy + opt.hard));
  for (int i = 0; i < opt.easy; ++i) {
    scenarios.push_back(
        generate_scenario(opt.seed * 100000 + static_cast<uint64_t>(i), "easy", cfg.world, enc));
  }
  for (int i = 0; i < opt.hard; ++i) {
    scenarios.push_back(generate_scenario(
        opt.seed * 100000 + static_cast<uint64_t>(opt.easy + i), "hard", cfg.world, enc));
  }
  write_suite(resolve_out_path(opt.out_dir), scenarios);
}

void cmd_train(const TrainOptions& opt) {
  if (opt.suite_dir.empty()) throw UsageError("--suite is required");
  if (opt.config_path.empty()) throw UsageError("--config is required");
  if (opt.out_dir.empty()) throw UsageError("--out is required");
  RunConfig cfg = load_run_config(opt.config_path);
  EncoderParams enc = make_encoder(cfg);

  std::vector<Scenario> suite = load_suite(opt.suite_dir, enc);
  std::vector<size_t> picked = subsample_indices(suite.size(), opt.fraction, cfg.episode.seed);
  std::vector<Scenario> training;
  training.reserve(picked.size());
  std::string selected_ids;
  for (size_t idx : picked) {
    training.push_back(suite[idx]);
    if (!selected_ids.empty()) selected_ids += ';';
    selected_ids += suite[idx].id;
  }

  const std::string out_dir = resolve_out_path(opt.out_dir);
  TrainRunResult result = train_run(cfg, training, enc, out_dir);

  write_manifest(out_dir + "/manifest.txt", cfg,
                 {{"suite", opt.suite_dir},
                  {"fraction", fmt_double(opt.fraction)},
                  {"suite_size", fmt_int(static_cast<long long>(suite.size()))},
                  {"training_scenarios", fmt_int(static_cast<long long>(training.size()))},
                  {"selected", selected_ids},
                  {"final_checkpoint",
                   std::filesystem::path(result.final_checkpoint_path).filename().string()},
                  {"value_holdout_monotone_fraction",
                   fmt_double(result.value_fit.holdout_monotone_fraction)}});
}

void cmd_eval(const EvalOptions& opt) {
  if (opt.suite_dir.empty()) throw UsageError("--suite is required");
  if (opt.checkpoint.empty()) throw UsageError("--ckpt is required");
  if (opt.out_file.empty()) throw UsageError("--out is required");
  const Assistance level = assistance_from_string(opt.assistance);
  RunConfig cfg = load_config_or_default(opt.config_path);
  EncoderParams enc = make_encoder(cfg);

  std::vector<Scenario> suite = load_suite(opt.suite_dir, enc);
  PolicyParams policy_storage;
  LoadedPolicy loaded = load_agent(opt.checkpoint, cfg, policy_storage);

  EvalOutcome outcome =
      evaluate_suite(*loaded.agent, loaded.value, suite, level, cfg, enc, opt.jobs);

  const std::string out_file = resolve_out_path(opt.out_file);
  write_file(out_file, metrics_csv(outcome.report, loaded.label));
  const std::string log_dir = out_file + "_episodes";
  for (size_t i = 0; i < outcome.episodes.size(); ++i) {
    write_file(log_dir + "/" + suite[i].id + ".log",
               serialize_episode(outcome.episodes[i], enc));
  }
}

void cmd_ablate(const AblateOptions& opt) {
  if (opt.suite_dir.empty()) throw UsageError("--suite is required");
  if (opt.config_path.empty()) throw UsageError("--config is required");
  if (opt.out_dir.empty()) throw UsageError("--out is required");

  std::vector<std::string> tokens = split(opt.r_levels, ',');
  std::vector<std::pair<std::string, double>> thresholds;
  for (const std::string& tok : tokens) {
    if (tok.empty()) continue;
    double level;
    if (tok == "inf" || tok == "Inf" || tok == "INF") {
      level = std::numeric_limits<double>::infinity();
    } else {
      level = parse_double(tok);
      if (!(level > 0.0)) throw UsageError("reward threshold must be > 0: " + tok);
    }
    thresholds.emplace_back(tok, level);
  }
  if (thresholds.size() < 2) {
    throw UsageError("ablation needs at least 2 reward thresholds, got " +
                     fmt_int(static_cast<long long>(thresholds.size())));
  }

  RunConfig base_cfg = load_run_config(opt.config_path);
  EncoderParams enc = make_encoder(base_cfg);
  std::vector<Scenario> suite = load_suite(opt.suite_dir, enc);

  const std::string out_dir = resolve_out_path(opt.out_dir);
  std::string combined = "# ne_mode=raw success_radius=" +
                         fmt_double(base_cfg.episode.success_radius) + "\n";
  combined += "method,assistance,stratum,episodes,ne,sr,osr,spl\n";

  for (const auto& [token, level] : thresholds) {
    RunConfig cfg = base_cfg;  // paired seeds: only the threshold differs
    cfg.reward.r_level = level;
    cfg.validate();
    const std::string run_dir = out_dir + "/r_" + sanitize_token(token);

    TrainRunResult result = train_run(cfg, suite, enc, run_dir);
    Checkpoint ckpt = load_checkpoint(result.final_checkpoint_path);
    GaussianPolicyAgent agent(ckpt.policy);

    std::vector<EpisodeResult> results;
    for (Assistance level_a : {Assistance::kL1, Assistance::kL2, Assistance::kL3}) {
      EvalOutcome outcome =
          evaluate_suite(agent, ckpt.value, suite, level_a, cfg, enc, opt.jobs);
      write_file(run_dir + "/eval_" + to_string(level_a) + ".csv",
                 metrics_csv(outcome.report, "r_" + token));
      for (size_t i = 0; i < outcome.episodes.size(); ++i) {
        results.push_back(to_result(outcome.episodes[i], suite[i]));
      }
    }
    MetricsReport all = aggregate(results, cfg.episode.success_radius, NeMode::kRaw);
    for (const std::string& row : split(metrics_csv(all, "r_" + token), '\n')) {
      if (row.empty() || row[0] == '#' || row.rfind("method,", 0) == 0) continue;
      combined += row + "\n";
    }
  }
  write_file(out_dir + "/ablation.csv", combined);
}

}  // namespace aeronav
