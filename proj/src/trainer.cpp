#include "aeronav/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <numeric>
#include <thread>

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

TrainState make_train_state(const RunConfig& cfg) {
  TrainState state;
  state.master_seed = cfg.episode.seed;
  Rng policy_rng(derive_seed(cfg.episode.seed, streams::kPolicyInit));
  state.policy = make_policy(cfg.encoder.d, cfg.train.hidden_units, cfg.train.hidden_layers,
                             cfg.train.log_std_init, policy_rng);
  Rng value_rng(derive_seed(cfg.episode.seed, streams::kValueInit));
  state.value = make_value(cfg.encoder.d, cfg.train.hidden_units, cfg.train.hidden_layers,
                           value_rng);
  state.policy_old = state.policy;
  state.policy_ref = state.policy;
  return state;
}

IterationStats train_iteration(TrainState& state, const std::vector<Scenario>& scenarios,
                               Assistance assistance, const RunConfig& cfg,
                               const EncoderParams& enc) {
  if (scenarios.empty()) throw ConfigError("train_iteration: no scenarios");

  state.policy_old = state.policy;
  GaussianPolicyAgent agent(state.policy_old);

  RolloutBatch batch;
  IterationStats stats;
  stats.iteration = state.iteration;
  double return_sum = 0.0;
  for (int k = 0; k < cfg.train.rollout_episodes; ++k) {
    const uint64_t ordinal =
        static_cast<uint64_t>(state.iteration) * static_cast<uint64_t>(cfg.train.rollout_episodes) +
        static_cast<uint64_t>(k);
    const Scenario& scenario = scenarios[ordinal % scenarios.size()];
    Episode e = run_episode(agent, state.value, scenario, assistance, cfg.episode, cfg.reward,
                            cfg.world, enc, derive_seed(state.master_seed, streams::kRollout, ordinal));
    double ep_return = 0.0;
    for (const StepRecord& r : e.records) {
      ep_return += total_step_reward(r.reward_dense, r.reward_verifiable, cfg.reward);
    }
    return_sum += ep_return;
    if (e.outcome == Outcome::kSuccess) stats.successes += 1;
    append_episode(batch, e, cfg.reward);
  }
  stats.episodes = cfg.train.rollout_episodes;
  stats.mean_return = return_sum / stats.episodes;

  if (cfg.train.baseline_subtract && !batch.empty()) {
    double mean_reward = 0.0;
    for (const RolloutStep& s : batch.steps) mean_reward += s.reward;
    mean_reward /= static_cast<double>(batch.steps.size());
    for (RolloutStep& s : batch.steps) s.reward -= mean_reward;
  }

  std::vector<size_t> order(batch.steps.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> grad;
  for (int epoch = 0; epoch < cfg.train.inner_epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(state.master_seed, streams::kMinibatch,
                                static_cast<uint64_t>(state.iteration) * 1000 +
                                    static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);
    const size_t mb = static_cast<size_t>(cfg.optimizer.batch_size);
    for (size_t begin = 0; begin < order.size(); begin += mb) {
      const size_t end = std::min(begin + mb, order.size());
      std::vector<size_t> idx(order.begin() + static_cast<long>(begin),
                              order.begin() + static_cast<long>(end));
      ppo_kl_loss_grad(batch, state.policy, state.policy_old, state.policy_ref,
                       cfg.optimizer.epsilon, cfg.optimizer.beta, &grad, idx);
      std::vector<double> flat = policy_flat(state.policy);
      adam_step(flat, grad, state.opt, cfg.optimizer.learning_rate);
      policy_set_flat(state.policy, flat);
      clamp_log_std(state.policy);
    }
  }

  // Post-update anchor divergence over the collected states.
  if (!batch.empty()) {
    double kl_sum = 0.0;
    for (const RolloutStep& s : batch.steps) {
      PolicyOutput cur = policy_forward(state.policy, s.observation);
      PolicyOutput ref = policy_forward(state.policy_ref, s.observation);
      kl_sum += gaussian_kl(cur.mean, cur.std, ref.mean, ref.std);
    }
    stats.mean_kl = kl_sum / static_cast<double>(batch.steps.size());
  }

  state.iteration += 1;
  return stats;
}

std::vector<Episode> collect_expert_episodes(const std::vector<Scenario>& scenarios,
                                             int count, Assistance assistance,
                                             const RunConfig& cfg, const EncoderParams& enc,
                                             const ValueParams& value, uint64_t master_seed) {
  if (scenarios.empty()) throw ConfigError("collect_expert_episodes: no scenarios");
  OraclePathAgent agent;
  std::vector<Episode> episodes;
  episodes.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Scenario& scenario = scenarios[static_cast<size_t>(i) % scenarios.size()];
    episodes.push_back(run_episode(agent, value, scenario, assistance, cfg.episode, cfg.reward,
                                   cfg.world, enc,
                                   derive_seed(master_seed, streams::kExpert,
                                               static_cast<uint64_t>(i))));
  }
  return episodes;
}

ValueFitReport fit_value_model(ValueParams& value, const std::vector<Episode>& experts,
                               double margin, int epochs, double learning_rate,
                               double holdout_fraction, uint64_t seed) {
  if (experts.empty()) throw ConfigError("fit_value_model: empty episode set");
  std::vector<std::vector<FeatureVector>> sequences;
  sequences.reserve(experts.size());
  for (const Episode& e : experts) sequences.push_back(observation_sequence(e));
  return fit_value_model(value, sequences, margin, epochs, learning_rate, holdout_fraction,
                         seed);
}

namespace {

// A state observation the way the episode loop would build it.
FeatureVector observe_at(const Vec3& p, const Scenario& scenario, Assistance assistance,
                         const RunConfig& cfg, const EncoderParams& enc) {
  Pose pose(p.x, p.y, p.z);
  const double deviation = polyline_distance(p, scenario.oracle_path);
  auto hint = assistance_hint(assistance, pose, scenario, deviation, cfg.world);
  Vec3 clearance{};
  if (auto off = nearest_obstacle_offset(p, scenario.obstacles, cfg.world.sensing_range)) {
    clearance = *off;
  }
  return encode_state(enc, pose, scenario.goal, hint, clearance);
}

// Straight collision-free approach walks from random directions and radii.
// Monotone toward the goal by construction; they give the value model
// ordering data all around each goal, not just along the oracle tube.
std::vector<std::vector<FeatureVector>> synthetic_approach_sequences(
    const std::vector<Scenario>& scenarios, int count, Assistance assistance,
    const RunConfig& cfg, const EncoderParams& enc, uint64_t master_seed) {
  std::vector<std::vector<FeatureVector>> sequences;
  sequences.reserve(static_cast<size_t>(count));
  const double step = cfg.world.action_bounds.max_step_len;
  for (int i = 0; i < count; ++i) {
    const Scenario& scenario = scenarios[static_cast<size_t>(i) % scenarios.size()];
    Rng rng(derive_seed(master_seed, streams::kExpert, 1000000 + static_cast<uint64_t>(i)));
    const Vec3 g = scenario.goal.goal_position;
    const double max_r =
        std::max(4.0 * step, 0.9 * euclidean_distance(scenario.start.position(), g));
    // Quadratic bias toward small radii: the near-goal ring needs the
    // densest coverage.
    const double u = rng.uniform();
    const double radius = 2.0 * step + (max_r - 2.0 * step) * u * u;
    const double az = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double el = rng.uniform(-0.5, 0.5);
    Vec3 p = g + Vec3{radius * std::cos(az) * std::cos(el),
                      radius * std::sin(az) * std::cos(el), radius * std::sin(el)};
    p.z = std::clamp(p.z, cfg.world.min_altitude, cfg.world.max_altitude);

    std::vector<FeatureVector> seq;
    bool blocked = false;
    while (euclidean_distance(p, g) > step) {
      if (collides(p, scenario.obstacles, cfg.world.drone_radius)) {
        blocked = true;
        break;
      }
      seq.push_back(observe_at(p, scenario, assistance, cfg, enc));
      Vec3 dir = g - p;
      p = p + dir * (step / norm(dir));
    }
    if (blocked || seq.empty()) continue;
    seq.push_back(goal_state_observation(scenario, assistance, cfg.world, enc));
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

std::string log_line(const IterationStats& stats, double rolling_sr) {
  return "iter=" + fmt_int(stats.iteration) + " mean_return=" + fmt_double(stats.mean_return) +
         " mean_kl=" + fmt_double(stats.mean_kl) + " rolling_sr=" + fmt_double(rolling_sr);
}

std::string ckpt_path(const std::string& out_dir, int iteration) {
  return out_dir + "/ckpt_" + fmt_int(iteration) + ".txt";
}

}  // namespace

TrainRunResult train_run(const RunConfig& cfg, const std::vector<Scenario>& scenarios,
                         const EncoderParams& enc, const std::string& out_dir) {
  if (scenarios.empty()) throw ConfigError("train_run: no scenarios");

  TrainRunResult result;
  result.state = make_train_state(cfg);
  TrainState& state = result.state;
  const std::string hash = config_hash(cfg);

  auto checkpoint_now = [&](int iteration) {
    Checkpoint c{iteration, cfg.encoder.encoder_seed, cfg.encoder.d, hash, state.policy,
                 state.value};
    const std::string path = ckpt_path(out_dir, iteration);
    save_checkpoint(path, c);
    return path;
  };

  std::vector<Episode> experts =
      collect_expert_episodes(scenarios, cfg.train.expert_episodes, cfg.train.assistance, cfg,
                              enc, state.value, state.master_seed);
  // Expert episodes stop at the success radius, which leaves the region
  // inside it without ordering data; continue each sequence along the
  // straight line from the terminal pose to the goal so the value slope
  // stays informative through the final approach.
  std::vector<std::vector<FeatureVector>> sequences;
  sequences.reserve(2 * experts.size());
  for (size_t i = 0; i < experts.size(); ++i) {
    const Scenario& scenario = scenarios[i % scenarios.size()];
    std::vector<FeatureVector> seq = observation_sequence(experts[i]);
    Vec3 p = experts[i].final_pose.position();
    const Vec3 g = scenario.goal.goal_position;
    const double step = cfg.world.action_bounds.max_step_len;
    while (euclidean_distance(p, g) > step) {
      Vec3 dir = g - p;
      p = p + dir * (step / norm(dir));
      seq.push_back(observe_at(p, scenario, cfg.train.assistance, cfg, enc));
    }
    seq.push_back(goal_state_observation(scenario, cfg.train.assistance, cfg.world, enc));
    sequences.push_back(std::move(seq));
  }
  for (auto& seq : synthetic_approach_sequences(scenarios, cfg.train.expert_episodes,
                                                cfg.train.assistance, cfg, enc,
                                                state.master_seed)) {
    sequences.push_back(std::move(seq));
  }
  result.value_fit =
      fit_value_model(state.value, sequences, cfg.reward.margin, cfg.train.value_epochs,
                      cfg.train.value_learning_rate, cfg.train.value_holdout,
                      state.master_seed);
  std::fprintf(stderr, "[train] value fit: holdout monotone fraction %.3f over %zu sequences\n",
               result.value_fit.holdout_monotone_fraction,
               result.value_fit.train_sequences + result.value_fit.holdout_sequences);

  // Rolling success window across recent iterations.
  std::deque<std::pair<int, int>> window;  // (successes, episodes)
  constexpr size_t kWindow = 20;

  try {
    for (int it = 0; it < cfg.train.iterations; ++it) {
      const auto wall_start = std::chrono::steady_clock::now();
      IterationStats stats =
          train_iteration(state, scenarios, cfg.train.assistance, cfg, enc);
      window.emplace_back(stats.successes, stats.episodes);
      if (window.size() > kWindow) window.pop_front();
      int succ = 0, total = 0;
      for (const auto& [s, n] : window) {
        succ += s;
        total += n;
      }
      const double rolling_sr =
          total == 0 ? 0.0 : 100.0 * static_cast<double>(succ) / static_cast<double>(total);
      result.log_lines.push_back(log_line(stats, rolling_sr));

      const double wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - wall_start)
                                 .count();
      // Wall time goes to stderr only; the persisted log must be
      // byte-identical across reruns.
      std::fprintf(stderr, "[train] iter %d return %.4f kl %.6f sr %.1f%% (%.0f ms)\n",
                   stats.iteration, stats.mean_return, stats.mean_kl, rolling_sr, wall_ms);

      const bool last = it + 1 == cfg.train.iterations;
      if ((it + 1) % cfg.train.checkpoint_interval == 0 || last) {
        result.final_checkpoint_path = checkpoint_now(state.iteration);
      }
    }
  } catch (...) {
    // Flush whatever we have so the run can be inspected or resumed.
    checkpoint_now(state.iteration);
    std::string log_text;
    for (const std::string& line : result.log_lines) log_text += line + "\n";
    write_file(out_dir + "/training_log.txt", log_text);
    throw;
  }

  if (result.final_checkpoint_path.empty()) {
    result.final_checkpoint_path = checkpoint_now(state.iteration);
  }
  std::string log_text;
  for (const std::string& line : result.log_lines) log_text += line + "\n";
  write_file(out_dir + "/training_log.txt", log_text);
  return result;
}

std::string serialize_checkpoint(const Checkpoint& c) {
  std::string out;
  out += "format=aeronav-ckpt-v1\n";
  out += "iteration=" + fmt_int(c.iteration) + "\n";
  out += "encoder_seed=" + fmt_int(static_cast<long long>(c.encoder_seed)) + "\n";
  out += "d=" + fmt_int(c.d) + "\n";
  out += "config_hash=" + c.config_hash + "\n";
  auto sizes_csv = [](const std::vector<int>& sizes) {
    std::string s;
    for (size_t i = 0; i < sizes.size(); ++i) {
      if (i) s += ',';
      s += fmt_int(sizes[i]);
    }
    return s;
  };
  out += "policy_sizes=" + sizes_csv(c.policy.net.sizes()) + "\n";
  out += "policy_params=" + join_doubles(c.policy.net.params()) + "\n";
  out += "log_std=" +
         join_doubles({c.policy.log_std.begin(), c.policy.log_std.end()}) + "\n";
  out += "value_sizes=" + sizes_csv(c.value.net.sizes()) + "\n";
  out += "value_params=" + join_doubles(c.value.net.params()) + "\n";
  return out;
}

Checkpoint parse_checkpoint(const std::string& text) {
  Checkpoint c;
  std::vector<int> policy_sizes, value_sizes;
  std::vector<double> policy_params, value_params, log_std;
  bool have_format = false;

  for (const std::string& raw : split(text, '\n')) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    KeyValue kv = parse_kv(line);
    if (kv.key == "format") {
      if (kv.value != "aeronav-ckpt-v1") {
        throw FormatError("unsupported checkpoint format '" + kv.value + "'");
      }
      have_format = true;
    } else if (kv.key == "iteration") {
      c.iteration = static_cast<int>(parse_int(kv.value));
    } else if (kv.key == "encoder_seed") {
      c.encoder_seed = static_cast<uint64_t>(parse_int(kv.value));
    } else if (kv.key == "d") {
      c.d = static_cast<int>(parse_int(kv.value));
    } else if (kv.key == "config_hash") {
      c.config_hash = kv.value;
    } else if (kv.key == "policy_sizes" || kv.key == "value_sizes") {
      std::vector<int>& sizes = kv.key == "policy_sizes" ? policy_sizes : value_sizes;
      for (const std::string& tok : split(kv.value, ',')) {
        sizes.push_back(static_cast<int>(parse_int(tok)));
      }
    } else if (kv.key == "policy_params") {
      policy_params = split_doubles(kv.value);
    } else if (kv.key == "value_params") {
      value_params = split_doubles(kv.value);
    } else if (kv.key == "log_std") {
      log_std = split_doubles(kv.value);
    } else {
      throw FormatError("unknown checkpoint key '" + kv.key + "'");
    }
  }
  if (!have_format) throw FormatError("checkpoint missing format line");
  if (policy_sizes.empty() || value_sizes.empty()) {
    throw FormatError("checkpoint missing network sizes");
  }
  if (log_std.size() != kActionDim) throw FormatError("checkpoint log_std needs 6 values");

  c.policy.net = Mlp(policy_sizes);
  if (c.policy.net.param_count() != policy_params.size()) {
    throw FormatError("checkpoint policy parameter count mismatch");
  }
  c.policy.net.params() = policy_params;
  std::copy(log_std.begin(), log_std.end(), c.policy.log_std.begin());

  c.value.net = Mlp(value_sizes);
  if (c.value.net.param_count() != value_params.size()) {
    throw FormatError("checkpoint value parameter count mismatch");
  }
  c.value.net.params() = value_params;
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  write_file(path, serialize_checkpoint(c));
}

Checkpoint load_checkpoint(const std::string& path) {
  return parse_checkpoint(read_file(path));
}

EvalOutcome evaluate_suite(const Agent& agent, const ValueParams& value,
                           const std::vector<Scenario>& scenarios, Assistance assistance,
                           const RunConfig& cfg, const EncoderParams& enc, int jobs) {
  EvalOutcome out;
  out.episodes.resize(scenarios.size());
  if (jobs < 1) jobs = 1;
  jobs = std::min<int>(jobs, static_cast<int>(std::max<size_t>(scenarios.size(), 1)));

  auto work = [&](int worker) {
    for (size_t i = static_cast<size_t>(worker); i < scenarios.size();
         i += static_cast<size_t>(jobs)) {
      out.episodes[i] = run_episode(agent, value, scenarios[i], assistance, cfg.episode,
                                    cfg.reward, cfg.world, enc,
                                    derive_seed(cfg.episode.seed, streams::kEval, i));
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }

  std::vector<EpisodeResult> results;
  results.reserve(scenarios.size());
  for (size_t i = 0; i < scenarios.size(); ++i) {
    results.push_back(to_result(out.episodes[i], scenarios[i]));
  }
  out.report = aggregate(results, cfg.episode.success_radius, NeMode::kRaw);
  return out;
}

}  // namespace aeronav
