#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xrmarl/harness/config.hpp"

namespace xrmarl::harness {

// Per-episode training log row (matches the training-log CSV schema).
struct EpisodeLog {
  long step = 0;  // cumulative environment steps after the episode
  int episode = 0;
  double epsilon = 0.0;
  double loss = 0.0;  // NaN until the buffer fills
  double reward = 0.0;
  bool success = false;
};

// One seeded run: training curve (empty for the loopback baseline) plus
// greedy-evaluation KPI aggregates.
struct RunRecord {
  std::string algorithm;
  int ring = 0;
  std::uint64_t seed = 0;

  std::vector<EpisodeLog> train_episodes;
  long env_steps = 0;

  int eval_episodes = 0;
  double success_rate = 0.0;
  double reward_mean = 0.0;
  double xqi_mean = 0.0;
  double jitter_ms_mean = 0.0;
  double delay_ms_mean = 0.0;
  double plr_mean = 0.0;
  double throughput_mbps_mean = 0.0;
  double goodput_mbps_mean = 0.0;
  // per traffic type (ar, vr, cg)
  std::array<double, 3> type_throughput_mbps{};
  std::array<double, 3> type_goodput_mbps{};
};

// Fraction of episodes that ran their full window budget without the done
// condition. Throws on empty input.
double success_rate(const std::vector<bool>& episode_ok);

// Executes one run per seed (training for the RL modes, evaluation only for
// aps), streaming per-window KPI and per-episode logs into out_dir.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

// runs.csv, aggregate.csv keyed by (algorithm, ring), metadata.json and the
// trend plots. Records may span several algorithm/ring combinations.
void emit_outputs(const std::vector<RunRecord>& records,
                  const ExperimentConfig& config, const std::string& out_dir);

// Documented output schemas (golden-tested).
std::string runs_csv_header();
std::string aggregate_csv_header();
std::string train_log_header();

// Helper shared by run_experiment and the acceptance suite: one full run.
RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed,
                     bool write_files);

}  // namespace xrmarl::harness
