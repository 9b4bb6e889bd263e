#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "xrmarl/harness/experiment.hpp"
#include "xrmarl/harness/stats.hpp"
#include "xrmarl/rl/learner.hpp"

namespace {

using xrmarl::harness::ExperimentConfig;

struct CommonArgs {
  std::string config_path;
  std::string algo;
  int ring = 0;
  std::string seeds;
  std::string out;
  long steps = 0;
  long episodes = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value configuration file");
  cmd->add_option("--algo", args.algo, "oqmix | qmix | aps");
  cmd->add_option("--ring", args.ring, "distance ring 1..3");
  cmd->add_option("--seeds", args.seeds, "comma-separated seed list");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--steps", args.steps, "environment step budget");
  cmd->add_option("--episodes", args.episodes, "training episode budget");
}

ExperimentConfig build_config(const CommonArgs& args) {
  std::vector<std::pair<std::string, std::string>> overrides;
  if (!args.algo.empty()) overrides.emplace_back("algorithm", args.algo);
  if (args.ring > 0) overrides.emplace_back("ring", std::to_string(args.ring));
  if (!args.seeds.empty()) overrides.emplace_back("seeds", args.seeds);
  if (!args.out.empty()) overrides.emplace_back("out_dir", args.out);
  if (args.steps > 0) overrides.emplace_back("max_env_steps", std::to_string(args.steps));
  if (args.episodes > 0) overrides.emplace_back("max_episodes", std::to_string(args.episodes));
  return xrmarl::harness::load_config(args.config_path, overrides);
}

int cmd_train(const CommonArgs& args) {
  ExperimentConfig config = build_config(args);
  auto records = xrmarl::harness::run_experiment(config);
  xrmarl::harness::emit_outputs(records, config, config.out_dir);
  for (const auto& r : records) {
    std::cout << r.algorithm << " ring " << r.ring << " seed " << r.seed
              << ": success " << r.success_rate << ", reward " << r.reward_mean
              << ", plr " << r.plr_mean << "\n";
  }
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint) {
  ExperimentConfig config = build_config(args);
  if (config.algorithm == "aps") {
    auto records = xrmarl::harness::run_experiment(config);
    xrmarl::harness::emit_outputs(records, config, config.out_dir);
    return 0;
  }
  if (checkpoint.empty()) {
    throw std::invalid_argument("eval: --checkpoint is required for RL policies");
  }
  // Evaluation-only: restore the learner, run greedy episodes per seed.
  std::vector<xrmarl::harness::RunRecord> records;
  for (std::uint64_t seed : config.seeds) {
    ExperimentConfig one = config;
    one.seeds = {seed};
    one.max_episodes = 1;  // no training episodes
    xrmarl::rl::Hyperparams hp = one.hp;
    hp.mode = xrmarl::rl::mode_from_name(one.algorithm);
    xrmarl::rl::XrTeamEnv env(one.scenario, hp.action_levels, seed);
    xrmarl::rl::Learner learner(env, hp, seed);
    learner.load_checkpoint(checkpoint);

    xrmarl::harness::RunRecord rec;
    rec.algorithm = one.algorithm;
    rec.ring = one.ring;
    rec.seed = seed;
    std::vector<bool> ok;
    std::vector<double> rewards;
    for (int e = 0; e < one.eval_episodes; ++e) {
      auto result = learner.run_episode(
          env, xrmarl::mix_seed(seed, 100000 + static_cast<std::uint64_t>(e)),
          false);
      ok.push_back(result.success);
      rewards.push_back(result.return_sum /
                        std::max(1, result.steps));
    }
    rec.eval_episodes = one.eval_episodes;
    rec.success_rate = xrmarl::harness::success_rate(ok);
    rec.reward_mean = xrmarl::harness::mean(rewards);
    records.push_back(rec);
    std::cout << one.algorithm << " seed " << seed << ": success "
              << rec.success_rate << ", mean window reward " << rec.reward_mean
              << "\n";
  }
  xrmarl::harness::emit_outputs(records, config, config.out_dir);
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  ExperimentConfig base = build_config(args);
  std::vector<xrmarl::harness::RunRecord> all;
  for (const std::string& algo : {"oqmix", "qmix", "aps"}) {
    for (int ring = 1; ring <= 3; ++ring) {
      ExperimentConfig config = base;
      config.algorithm = algo;
      auto [inner, outer] = xrmarl::harness::ring_bounds(ring);
      config.ring = ring;
      config.scenario.ring_inner_m = inner;
      config.scenario.ring_outer_m = outer;
      config.validate();
      std::cout << "running " << algo << " at ring " << ring << "...\n";
      auto records = xrmarl::harness::run_experiment(config);
      all.insert(all.end(), records.begin(), records.end());
    }
  }
  xrmarl::harness::emit_outputs(all, base, base.out_dir);
  std::cout << "aggregate written to " << base.out_dir << "/aggregate.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XR codec adaptation: cooperative multi-agent training harness"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, compare_args;
  std::string checkpoint;

  CLI::App* train = app.add_subcommand("train", "train a policy across seeds");
  add_common(train, train_args);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint or the loopback baseline");
  add_common(eval, eval_args);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file for RL policies");

  CLI::App* compare = app.add_subcommand("compare",
                                         "sweep {oqmix, qmix, aps} x rings and aggregate");
  add_common(compare, compare_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (eval->parsed()) return cmd_eval(eval_args, checkpoint);
    if (compare->parsed()) return cmd_compare(compare_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
