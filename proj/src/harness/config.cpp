#include "xrmarl/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace xrmarl::harness {

namespace {

double to_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + value);
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config: trailing junk in " + key + ": " + value);
  }
  return v;
}

long to_long(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v) {
    throw std::invalid_argument("config: integer expected for " + key + ": " + value);
  }
  return l;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw std::invalid_argument("config: boolean expected for " + key + ": " + value);
}

std::vector<std::uint64_t> to_seed_list(const std::string& key,
                                        const std::string& value) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(static_cast<std::uint64_t>(to_long(key, item)));
  }
  if (seeds.empty()) throw std::invalid_argument("config: empty seed list");
  return seeds;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

sim::FlowSpec& flow_of(sim::ScenarioConfig& scenario, sim::TrafficType type) {
  for (sim::FlowSpec& spec : scenario.flows) {
    if (spec.type == type) return spec;
  }
  throw std::logic_error("config: flow spec missing");
}

}  // namespace

std::pair<double, double> ring_bounds(int ring) {
  switch (ring) {
    case 1: return {100.0, 200.0};
    case 2: return {200.0, 300.0};
    case 3: return {300.0, 400.0};
  }
  throw std::invalid_argument("config: ring must be 1, 2 or 3");
}

void ExperimentConfig::validate() const {
  if (algorithm != "oqmix" && algorithm != "qmix" && algorithm != "aps") {
    throw std::invalid_argument("config: algorithm must be oqmix, qmix or aps");
  }
  ring_bounds(ring);
  if (seeds.empty()) throw std::invalid_argument("config: at least one seed");
  if (max_episodes < 1) throw std::invalid_argument("config: max_episodes must be >= 1");
  if (eval_episodes < 1) throw std::invalid_argument("config: eval_episodes must be >= 1");
  hp.validate();
  scenario.validate();
  aps.validate();
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno += 1;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not a key = value assignment");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config: empty key or value on line " +
                                  std::to_string(lineno));
    }
    kv[key] = value;
  }
  return kv;
}

void apply_setting(ExperimentConfig& c, const std::string& key,
                   const std::string& value) {
  using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                    const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"algorithm", [](ExperimentConfig& c, const std::string&, const std::string& v) {
         c.algorithm = v;
       }},
      {"ring", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.ring = static_cast<int>(to_long(k, v));
         auto [inner, outer] = ring_bounds(c.ring);
         c.scenario.ring_inner_m = inner;
         c.scenario.ring_outer_m = outer;
       }},
      {"seeds", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.seeds = to_seed_list(k, v);
       }},
      {"max_episodes", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.max_episodes = to_long(k, v);
       }},
      {"eval_episodes", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.eval_episodes = static_cast<int>(to_long(k, v));
       }},
      {"out_dir", [](ExperimentConfig& c, const std::string&, const std::string& v) {
         c.out_dir = v;
       }},
      {"write_plots", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.write_plots = to_bool(k, v);
       }},
      // reinforcement-learning settings
      {"max_env_steps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.max_env_steps = to_long(k, v);
       }},
      {"eps_start", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.eps_start = to_double(k, v);
       }},
      {"eps_min", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.eps_min = to_double(k, v);
       }},
      {"eps_decay_steps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.eps_decay_steps = to_long(k, v);
       }},
      {"buffer_size", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.buffer_capacity = static_cast<int>(to_long(k, v));
       }},
      {"batch_size", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.batch_size = static_cast<int>(to_long(k, v));
       }},
      {"learning_rate", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.learning_rate = to_double(k, v);
       }},
      {"discount_factor", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.gamma = to_double(k, v);
       }},
      {"rnn_hidden", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.rnn_hidden = static_cast<int>(to_long(k, v));
       }},
      {"mlp_hidden", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.mlp_hidden = static_cast<int>(to_long(k, v));
       }},
      {"mixer_embed", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.mixer_embed = static_cast<int>(to_long(k, v));
       }},
      {"hypernet_hidden", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.hypernet_hidden = static_cast<int>(to_long(k, v));
       }},
      {"hard_update_period", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.hard_update_period = static_cast<int>(to_long(k, v));
       }},
      {"action_levels", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.action_levels = static_cast<int>(to_long(k, v));
       }},
      {"optimistic_alpha", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.alpha = to_double(k, v);
       }},
      {"rms_decay", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.rms_decay = to_double(k, v);
       }},
      {"rms_epsilon", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hp.rms_epsilon = to_double(k, v);
       }},
      // network and scenario settings
      {"bandwidth_hz", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.bandwidth_hz = to_double(k, v);
       }},
      {"carrier_ghz", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.carrier_ghz = to_double(k, v);
       }},
      {"tx_power_dbm", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.tx_power_dbm = to_double(k, v);
       }},
      {"bs_noise_figure_db", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.bs_noise_figure_db = to_double(k, v);
       }},
      {"ue_noise_figure_db", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.ue_noise_figure_db = to_double(k, v);
       }},
      {"ue_speed_mps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.ue_speed_mps = to_double(k, v);
       }},
      {"antenna_gain_db", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.antenna_gain_db = to_double(k, v);
       }},
      {"se_cap_bps_hz", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.se_cap_bps_hz = to_double(k, v);
       }},
      {"shadowing_sigma_db", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.shadowing_sigma_db = to_double(k, v);
       }},
      {"shadowing_enabled", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.shadowing_enabled = to_bool(k, v);
       }},
      {"ue_height_m", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.link.ue_height_m = to_double(k, v);
       }},
      {"rlc_capacity_bytes", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.rlc_capacity_bytes = to_long(k, v);
       }},
      {"window_s", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.window_s = to_double(k, v);
       }},
      {"windows_per_episode", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.windows_per_episode = static_cast<int>(to_long(k, v));
       }},
      {"delay_budget_ms", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.delay_budget_ms = to_double(k, v);
       }},
      {"packet_mtu_bytes", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.packet_mtu_bytes = static_cast<int>(to_long(k, v));
       }},
      {"frame_size_sigma", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.frame_size_sigma = to_double(k, v);
       }},
      {"fps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const double fps = to_double(k, v);
         for (sim::FlowSpec& spec : c.scenario.flows) spec.fps = fps;
       }},
      {"ring_inner_m", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.ring_inner_m = to_double(k, v);
       }},
      {"ring_outer_m", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.ring_outer_m = to_double(k, v);
       }},
      // traffic mix
      {"ar_flows", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::AR).flows = static_cast<int>(to_long(k, v));
       }},
      {"ar_rate_min_mbps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::AR).min_rate_mbps = to_double(k, v);
       }},
      {"ar_rate_max_mbps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::AR).max_rate_mbps = to_double(k, v);
       }},
      {"vr_rate_min_mbps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::VR).min_rate_mbps = to_double(k, v);
       }},
      {"vr_rate_max_mbps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::VR).max_rate_mbps = to_double(k, v);
       }},
      {"cg_rate_min_mbps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::CG).min_rate_mbps = to_double(k, v);
       }},
      {"cg_rate_max_mbps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         flow_of(c.scenario, sim::TrafficType::CG).max_rate_mbps = to_double(k, v);
       }},
      // loopback baseline
      {"aps_l_inc", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.l_inc = to_double(k, v);
       }},
      {"aps_l_dec_soft", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.l_dec_soft = to_double(k, v);
       }},
      {"aps_l_dec_quick", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.l_dec_quick = to_double(k, v);
       }},
      {"aps_mult_dec_soft", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.mult_dec_soft = to_double(k, v);
       }},
      {"aps_mult_dec_quick", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.mult_dec_quick = to_double(k, v);
       }},
      {"aps_mult_inc", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.mult_inc = to_double(k, v);
       }},
      {"aps_observe_pdr_literal", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.observe_pdr_literal = to_bool(k, v);
       }},
      {"aps_initial_fraction", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.aps.initial_fraction = to_double(k, v);
       }},
  };

  const auto it = setters.find(key);
  if (it == setters.end()) {
    throw std::invalid_argument("config: unknown key: " + key);
  }
  it->second(c, key, value);
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> kv;
  kv["algorithm"] = algorithm;
  kv["ring"] = std::to_string(ring);
  {
    std::string s;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(seeds[i]);
    }
    kv["seeds"] = s;
  }
  kv["max_episodes"] = std::to_string(max_episodes);
  kv["eval_episodes"] = std::to_string(eval_episodes);
  kv["out_dir"] = out_dir;
  kv["write_plots"] = write_plots ? "1" : "0";
  kv["max_env_steps"] = std::to_string(hp.max_env_steps);
  kv["eps_start"] = fmt(hp.eps_start);
  kv["eps_min"] = fmt(hp.eps_min);
  kv["eps_decay_steps"] = std::to_string(hp.eps_decay_steps);
  kv["buffer_size"] = std::to_string(hp.buffer_capacity);
  kv["batch_size"] = std::to_string(hp.batch_size);
  kv["learning_rate"] = fmt(hp.learning_rate);
  kv["discount_factor"] = fmt(hp.gamma);
  kv["rnn_hidden"] = std::to_string(hp.rnn_hidden);
  kv["mlp_hidden"] = std::to_string(hp.mlp_hidden);
  kv["mixer_embed"] = std::to_string(hp.mixer_embed);
  kv["hypernet_hidden"] = std::to_string(hp.hypernet_hidden);
  kv["hard_update_period"] = std::to_string(hp.hard_update_period);
  kv["action_levels"] = std::to_string(hp.action_levels);
  kv["optimistic_alpha"] = fmt(hp.alpha);
  kv["rms_decay"] = fmt(hp.rms_decay);
  kv["rms_epsilon"] = fmt(hp.rms_epsilon);
  kv["bandwidth_hz"] = fmt(scenario.link.bandwidth_hz);
  kv["carrier_ghz"] = fmt(scenario.link.carrier_ghz);
  kv["tx_power_dbm"] = fmt(scenario.link.tx_power_dbm);
  kv["bs_noise_figure_db"] = fmt(scenario.link.bs_noise_figure_db);
  kv["ue_noise_figure_db"] = fmt(scenario.link.ue_noise_figure_db);
  kv["ue_speed_mps"] = fmt(scenario.link.ue_speed_mps);
  kv["antenna_gain_db"] = fmt(scenario.link.antenna_gain_db);
  kv["se_cap_bps_hz"] = fmt(scenario.link.se_cap_bps_hz);
  kv["shadowing_sigma_db"] = fmt(scenario.link.shadowing_sigma_db);
  kv["shadowing_enabled"] = scenario.shadowing_enabled ? "1" : "0";
  kv["ue_height_m"] = fmt(scenario.link.ue_height_m);
  kv["rlc_capacity_bytes"] = std::to_string(scenario.rlc_capacity_bytes);
  kv["window_s"] = fmt(scenario.window_s);
  kv["windows_per_episode"] = std::to_string(scenario.windows_per_episode);
  kv["delay_budget_ms"] = fmt(scenario.delay_budget_ms);
  kv["packet_mtu_bytes"] = std::to_string(scenario.packet_mtu_bytes);
  kv["frame_size_sigma"] = fmt(scenario.frame_size_sigma);
  kv["ring_inner_m"] = fmt(scenario.ring_inner_m);
  kv["ring_outer_m"] = fmt(scenario.ring_outer_m);
  for (const sim::FlowSpec& spec : scenario.flows) {
    const std::string name = sim::traffic_name(spec.type);
    kv[name + "_flows"] = std::to_string(spec.flows);
    kv[name + "_rate_min_mbps"] = fmt(spec.min_rate_mbps);
    kv[name + "_rate_max_mbps"] = fmt(spec.max_rate_mbps);
    kv["fps"] = fmt(spec.fps);
  }
  kv["aps_l_inc"] = fmt(aps.l_inc);
  kv["aps_l_dec_soft"] = fmt(aps.l_dec_soft);
  kv["aps_l_dec_quick"] = fmt(aps.l_dec_quick);
  kv["aps_mult_dec_soft"] = fmt(aps.mult_dec_soft);
  kv["aps_mult_dec_quick"] = fmt(aps.mult_dec_quick);
  kv["aps_mult_inc"] = fmt(aps.mult_inc);
  kv["aps_observe_pdr_literal"] = aps.observe_pdr_literal ? "1" : "0";
  kv["aps_initial_fraction"] = fmt(aps.initial_fraction);
  return kv;
}

ExperimentConfig load_config(
    const std::string& path_or_empty,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig config;
  if (!path_or_empty.empty()) {
    for (const auto& [key, value] : parse_key_value_file(path_or_empty)) {
      apply_setting(config, key, value);
    }
  }
  for (const auto& [key, value] : overrides) {
    apply_setting(config, key, value);
  }
  config.validate();
  return config;
}

}  // namespace xrmarl::harness
