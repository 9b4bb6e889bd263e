#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xrmarl/aps/aps.hpp"
#include "xrmarl/rl/hyperparams.hpp"
#include "xrmarl/sim/env.hpp"

namespace xrmarl::harness {

// Distance rings selectable as 1..3.
std::pair<double, double> ring_bounds(int ring);

struct ExperimentConfig {
  std::string algorithm = "oqmix";  // oqmix | qmix | aps
  int ring = 1;
  std::vector<std::uint64_t> seeds = {1};
  long max_episodes = 600;
  int eval_episodes = 50;
  std::string out_dir = "out";
  bool write_plots = true;

  rl::Hyperparams hp;
  sim::ScenarioConfig scenario;
  aps::ApsConfig aps;  // per-type rate bounds are filled from the flow specs

  void validate() const;
  // Every effective key/value, sorted; echoed into the metadata file.
  std::map<std::string, std::string> echo() const;
};

// "key = value" lines, '#' comments. Later assignments win.
std::map<std::string, std::string> parse_key_value_file(const std::string& path);

// Applies one assignment; throws std::invalid_argument on unknown keys or
// malformed values.
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);

// File (optional) first, then overrides in order.
ExperimentConfig load_config(
    const std::string& path_or_empty,
    const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace xrmarl::harness
