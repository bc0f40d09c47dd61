#include "aeronav/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

std::string to_string(ShapingMode m) {
  switch (m) {
    case ShapingMode::kValueDrop: return "value_drop";
    case ShapingMode::kPotential: return "potential";
  }
  throw ConfigError("unknown shaping mode");
}

ShapingMode shaping_mode_from_string(const std::string& s) {
  if (s == "value_drop") return ShapingMode::kValueDrop;
  if (s == "potential") return ShapingMode::kPotential;
  throw ConfigError("bad shaping_mode: '" + s + "' (expected value_drop|potential)");
}

std::string to_string(Assistance a) {
  switch (a) {
    case Assistance::kL1: return "L1";
    case Assistance::kL2: return "L2";
    case Assistance::kL3: return "L3";
  }
  throw ConfigError("unknown assistance level");
}

Assistance assistance_from_string(const std::string& s) {
  if (s == "L1") return Assistance::kL1;
  if (s == "L2") return Assistance::kL2;
  if (s == "L3") return Assistance::kL3;
  throw ConfigError("bad assistance: '" + s + "' (expected L1|L2|L3)");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  if (episode.max_steps < 1) fail("max_steps must be >= 1");
  if (!(episode.success_radius > 0.0)) fail("success_radius must be > 0");

  if (!(reward.gamma > 0.0 && reward.gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(reward.r_level > 0.0)) fail("r_level must be > 0 (or inf)");
  if (!std::isfinite(reward.r_max) || reward.r_max <= 0.0) fail("r_max must be finite and > 0");
  if (std::isfinite(reward.r_level) && reward.r_max < reward.r_level) {
    fail("r_max must be >= any finite r_level");
  }
  if (reward.margin < 0.0) fail("margin must be >= 0");

  if (!(optimizer.epsilon > 0.0 && optimizer.epsilon < 1.0)) fail("epsilon must be in (0, 1)");
  if (!(optimizer.beta >= 0.0)) fail("beta must be >= 0");
  if (!(optimizer.learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (optimizer.batch_size < 1) fail("batch_size must be >= 1");

  if (!(world.extent > 0.0)) fail("extent must be > 0");
  if (!(world.min_altitude < world.max_altitude)) fail("min_altitude must be < max_altitude");
  if (world.obstacle_count < 0) fail("obstacle_count must be >= 0");
  if (!(world.drone_radius > 0.0)) fail("drone_radius must be > 0");
  if (!(world.grid_resolution > 0.0)) fail("grid_resolution must be > 0");
  if (!(world.helper_threshold > 0.0)) fail("helper_threshold must be > 0");
  if (!(world.sensing_range > 0.0)) fail("sensing_range must be > 0");
  if (!(world.action_bounds.max_step_len > 0.0)) fail("max_step_len must be > 0");
  if (!(world.action_bounds.max_turn > 0.0)) fail("max_turn must be > 0");

  if (encoder.d < 1) fail("d must be >= 1");

  if (train.iterations < 0) fail("iterations must be >= 0");
  if (train.rollout_episodes < 1) fail("rollout_episodes must be >= 1");
  if (train.inner_epochs < 0) fail("inner_epochs must be >= 0");
  if (train.hidden_units < 1) fail("hidden_units must be >= 1");
  if (train.hidden_layers < 1) fail("hidden_layers must be >= 1");
  if (train.expert_episodes < 1) fail("expert_episodes must be >= 1");
  if (train.value_epochs < 0) fail("value_epochs must be >= 0");
  if (!(train.value_learning_rate > 0.0)) fail("value_learning_rate must be > 0");
  if (!(train.value_holdout > 0.0 && train.value_holdout < 1.0)) {
    fail("value_holdout must be in (0, 1)");
  }
  if (train.checkpoint_interval < 1) fail("checkpoint_interval must be >= 1");
}

namespace {

// Single registry drives parsing and serialization so the two can't drift.
struct FieldBinding {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::map<std::string, FieldBinding> make_bindings() {
  std::map<std::string, FieldBinding> b;

  auto add_d = [&](const std::string& key, auto accessor) {
    b[key] = FieldBinding{
        [accessor](RunConfig& c, const std::string& v) { accessor(c) = parse_double(v); },
        [accessor](const RunConfig& c) {
          return fmt_double(accessor(const_cast<RunConfig&>(c)));
        }};
  };
  auto add_i = [&](const std::string& key, auto accessor) {
    b[key] = FieldBinding{
        [accessor](RunConfig& c, const std::string& v) {
          accessor(c) = static_cast<int>(parse_int(v));
        },
        [accessor](const RunConfig& c) {
          return fmt_int(accessor(const_cast<RunConfig&>(c)));
        }};
  };
  auto add_u64 = [&](const std::string& key, auto accessor) {
    b[key] = FieldBinding{
        [accessor](RunConfig& c, const std::string& v) {
          accessor(c) = static_cast<uint64_t>(parse_int(v));
        },
        [accessor](const RunConfig& c) {
          return fmt_int(static_cast<long long>(accessor(const_cast<RunConfig&>(c))));
        }};
  };
  auto add_b = [&](const std::string& key, auto accessor) {
    b[key] = FieldBinding{
        [accessor](RunConfig& c, const std::string& v) { accessor(c) = parse_bool(v); },
        [accessor](const RunConfig& c) {
          return accessor(const_cast<RunConfig&>(c)) ? "true" : "false";
        }};
  };

  add_i("max_steps", [](RunConfig& c) -> int& { return c.episode.max_steps; });
  add_d("success_radius", [](RunConfig& c) -> double& { return c.episode.success_radius; });
  add_u64("seed", [](RunConfig& c) -> uint64_t& { return c.episode.seed; });

  add_d("gamma", [](RunConfig& c) -> double& { return c.reward.gamma; });
  add_d("r_level", [](RunConfig& c) -> double& { return c.reward.r_level; });
  add_d("r_max", [](RunConfig& c) -> double& { return c.reward.r_max; });
  add_d("margin", [](RunConfig& c) -> double& { return c.reward.margin; });
  add_d("w_dense", [](RunConfig& c) -> double& { return c.reward.w_dense; });
  add_d("w_verifiable", [](RunConfig& c) -> double& { return c.reward.w_verifiable; });
  b["shaping_mode"] = FieldBinding{
      [](RunConfig& c, const std::string& v) { c.reward.shaping_mode = shaping_mode_from_string(v); },
      [](const RunConfig& c) { return to_string(c.reward.shaping_mode); }};

  add_d("epsilon", [](RunConfig& c) -> double& { return c.optimizer.epsilon; });
  add_d("beta", [](RunConfig& c) -> double& { return c.optimizer.beta; });
  add_d("learning_rate", [](RunConfig& c) -> double& { return c.optimizer.learning_rate; });
  add_i("batch_size", [](RunConfig& c) -> int& { return c.optimizer.batch_size; });

  add_d("extent", [](RunConfig& c) -> double& { return c.world.extent; });
  add_d("min_altitude", [](RunConfig& c) -> double& { return c.world.min_altitude; });
  add_d("max_altitude", [](RunConfig& c) -> double& { return c.world.max_altitude; });
  add_i("obstacle_count", [](RunConfig& c) -> int& { return c.world.obstacle_count; });
  add_d("drone_radius", [](RunConfig& c) -> double& { return c.world.drone_radius; });
  add_d("grid_resolution", [](RunConfig& c) -> double& { return c.world.grid_resolution; });
  add_d("helper_threshold", [](RunConfig& c) -> double& { return c.world.helper_threshold; });
  add_d("sensing_range", [](RunConfig& c) -> double& { return c.world.sensing_range; });
  add_d("max_step_len",
        [](RunConfig& c) -> double& { return c.world.action_bounds.max_step_len; });
  add_d("max_turn", [](RunConfig& c) -> double& { return c.world.action_bounds.max_turn; });

  add_u64("encoder_seed", [](RunConfig& c) -> uint64_t& { return c.encoder.encoder_seed; });
  add_i("d", [](RunConfig& c) -> int& { return c.encoder.d; });

  add_i("iterations", [](RunConfig& c) -> int& { return c.train.iterations; });
  add_i("rollout_episodes", [](RunConfig& c) -> int& { return c.train.rollout_episodes; });
  add_i("inner_epochs", [](RunConfig& c) -> int& { return c.train.inner_epochs; });
  add_i("hidden_units", [](RunConfig& c) -> int& { return c.train.hidden_units; });
  add_i("hidden_layers", [](RunConfig& c) -> int& { return c.train.hidden_layers; });
  add_d("log_std_init", [](RunConfig& c) -> double& { return c.train.log_std_init; });
  add_b("baseline_subtract", [](RunConfig& c) -> bool& { return c.train.baseline_subtract; });
  add_i("expert_episodes", [](RunConfig& c) -> int& { return c.train.expert_episodes; });
  add_i("value_epochs", [](RunConfig& c) -> int& { return c.train.value_epochs; });
  add_d("value_learning_rate",
        [](RunConfig& c) -> double& { return c.train.value_learning_rate; });
  add_d("value_holdout", [](RunConfig& c) -> double& { return c.train.value_holdout; });
  add_i("checkpoint_interval",
        [](RunConfig& c) -> int& { return c.train.checkpoint_interval; });
  b["assistance"] = FieldBinding{
      [](RunConfig& c, const std::string& v) { c.train.assistance = assistance_from_string(v); },
      [](const RunConfig& c) { return to_string(c.train.assistance); }};

  return b;
}

const std::map<std::string, FieldBinding>& bindings() {
  static const std::map<std::string, FieldBinding> b = make_bindings();
  return b;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  const auto& binds = bindings();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    KeyValue kv = parse_kv(line);
    auto it = binds.find(kv.key);
    if (it == binds.end()) {
      throw ConfigError("unknown config key '" + kv.key + "' at line " + fmt_int(lineno));
    }
    try {
      it->second.set(cfg, kv.value);
    } catch (const FormatError& e) {
      throw ConfigError("bad value for '" + kv.key + "' at line " + fmt_int(lineno) + ": " +
                        e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_file(path));
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, bind] : bindings()) {  // std::map iterates sorted
    out += key;
    out += '=';
    out += bind.get(cfg);
    out += '\n';
  }
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  return fnv1a_hex(serialize_run_config(cfg));
}

}  // namespace aeronav
