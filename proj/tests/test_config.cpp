#include <doctest.h>

#include <cmath>

#include "aeronav/config.hpp"
#include "aeronav/errors.hpp"

using namespace aeronav;

TEST_CASE("defaults match the documented values") {
  RunConfig cfg;
  CHECK(cfg.episode.max_steps == 200);
  CHECK(cfg.episode.success_radius == 20.0);
  CHECK(cfg.optimizer.beta == 0.1);
  CHECK(cfg.optimizer.learning_rate == 1e-4);
  CHECK(cfg.reward.r_level == 5.0);
  CHECK(cfg.reward.shaping_mode == ShapingMode::kPotential);
  CHECK(cfg.world.action_bounds.max_step_len == 5.0);
  CHECK(cfg.encoder.d == 64);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parse overrides and round-trips") {
  RunConfig cfg = parse_run_config(
      "# comment line\n"
      "\n"
      "max_steps=150\n"
      "r_level=inf\n"
      "shaping_mode=value_drop\n"
      "beta=0.5\n"
      "seed=99\n");
  CHECK(cfg.episode.max_steps == 150);
  CHECK(std::isinf(cfg.reward.r_level));
  CHECK(cfg.reward.shaping_mode == ShapingMode::kValueDrop);
  CHECK(cfg.optimizer.beta == 0.5);
  CHECK(cfg.episode.seed == 99);

  // Canonical serialization parses back to the same canonical form.
  const std::string text = serialize_run_config(cfg);
  RunConfig again = parse_run_config(text);
  CHECK(serialize_run_config(again) == text);
}

TEST_CASE("unknown keys are an error") {
  CHECK_THROWS_AS(parse_run_config("max_stepz=10\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("max_steps=10\nwhatever=1\n"), ConfigError);
}

TEST_CASE("malformed values and lines are errors") {
  CHECK_THROWS_AS(parse_run_config("max_steps=abc\n"), ConfigError);
  CHECK_THROWS(parse_run_config("not a kv line\n"));
}

TEST_CASE("invariant violations are rejected") {
  CHECK_THROWS_AS(parse_run_config("gamma=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("gamma=1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("epsilon=1\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("beta=-0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("r_level=-5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("max_steps=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("success_radius=0\n"), ConfigError);
  // r_max below a finite r_level breaks the cap ordering.
  CHECK_THROWS_AS(parse_run_config("r_level=5\nr_max=2\n"), ConfigError);
}

TEST_CASE("config hash tracks content") {
  RunConfig a;
  RunConfig b;
  CHECK(config_hash(a) == config_hash(b));
  b.optimizer.beta = 0.2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("assistance and shaping tokens") {
  CHECK(assistance_from_string("L1") == Assistance::kL1);
  CHECK(assistance_from_string("L3") == Assistance::kL3);
  CHECK_THROWS_AS(assistance_from_string("L4"), ConfigError);
  CHECK(to_string(ShapingMode::kPotential) == "potential");
  CHECK(shaping_mode_from_string("value_drop") == ShapingMode::kValueDrop);
  CHECK_THROWS_AS(shaping_mode_from_string("other"), ConfigError);
}
