#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "aeronav/commands.hpp"
#include "aeronav/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"aeronav: RL fine-tuning for long-horizon aerial waypoint navigation"};
  app.require_subcommand(1);

  aeronav::GenerateOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("generate", "Generate a frozen scenario suite");
  cmd_gen->add_option("--seed", gen.seed, "Suite master seed")->required();
  cmd_gen->add_option("--easy", gen.easy, "Number of easy scenarios (oracle < 250 m)");
  cmd_gen->add_option("--hard", gen.hard, "Number of hard scenarios (oracle >= 250 m)");
  cmd_gen->add_option("--out", gen.out_dir, "Output suite directory")->required();
  cmd_gen->add_option("--config", gen.config_path, "Optional config file (world shape)");

  aeronav::TrainOptions train;
  CLI::App* cmd_tr = app.add_subcommand("train", "Train a policy on a scenario suite");
  cmd_tr->add_option("--suite", train.suite_dir, "Scenario suite directory")->required();
  cmd_tr->add_option("--fraction", train.fraction, "Fraction of the suite to train on");
  cmd_tr->add_option("--config", train.config_path, "Run config file")->required();
  cmd_tr->add_option("--out", train.out_dir, "Output directory")->required();

  aeronav::EvalOptions ev;
  CLI::App* cmd_ev = app.add_subcommand("eval", "Evaluate a checkpoint on a suite");
  cmd_ev->add_option("--suite", ev.suite_dir, "Scenario suite directory")->required();
  cmd_ev->add_option("--ckpt", ev.checkpoint,
                     "Checkpoint file, or built-in reference 'oracle'/'zero'")
      ->required();
  cmd_ev->add_option("--assistance", ev.assistance, "Assistance level: L1|L2|L3");
  cmd_ev->add_option("--out", ev.out_file, "Metrics CSV output path")->required();
  cmd_ev->add_option("--config", ev.config_path, "Optional config file");
  cmd_ev->add_option("--jobs", ev.jobs, "Concurrent evaluation workers");

  aeronav::AblateOptions ab;
  CLI::App* cmd_ab = app.add_subcommand("ablate", "Reward-threshold ablation sweep");
  cmd_ab->add_option("--suite", ab.suite_dir, "Scenario suite directory")->required();
  cmd_ab->add_option("--r-levels", ab.r_levels, "Comma-separated thresholds, e.g. 1.0,3.0,5.0,inf");
  cmd_ab->add_option("--config", ab.config_path, "Run config file")->required();
  cmd_ab->add_option("--out", ab.out_dir, "Output directory")->required();
  cmd_ab->add_option("--jobs", ab.jobs, "Concurrent evaluation workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_gen->parsed()) aeronav::cmd_generate(gen);
    if (cmd_tr->parsed()) aeronav::cmd_train(train);
    if (cmd_ev->parsed()) aeronav::cmd_eval(ev);
    if (cmd_ab->parsed()) aeronav::cmd_ablate(ab);
  } catch (const aeronav::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
