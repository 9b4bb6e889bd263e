#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "xrmarl/sim/kpi.hpp"
#include "xrmarl/sim/link.hpp"
#include "xrmarl/sim/traffic.hpp"

namespace xrmarl::sim {

struct ScenarioConfig {
  double ring_inner_m = 100.0;
  double ring_outer_m = 200.0;
  double window_s = 0.5;
  int windows_per_episode = 20;
  double delay_budget_ms = 20.0;
  int packet_mtu_bytes = 1500;
  double frame_size_sigma = 0.105;  // fraction of mean, clamped at 2 sigma
  std::int64_t rlc_capacity_bytes = 60000;
  bool shadowing_enabled = true;
  LinkConfig link;
  std::vector<FlowSpec> flows = default_flow_specs();

  void validate() const;  // throws std::invalid_argument
};

struct StepResult {
  std::array<Vector, kNumTraffic> observations;  // 5 entries per agent
  Vector state;
  KpiWindow kpi;
  double team_reward = 0.0;
  bool done = false;
};

// Cumulative per-flow packet accounting; generated must always equal
// on_time + late + dropped + queued.
struct FlowAudit {
  std::int64_t generated = 0;
  std::int64_t on_time = 0;
  std::int64_t late = 0;
  std::int64_t dropped = 0;
  std::int64_t queued = 0;
};

// Desk-scale downlink simulator: three UEs (one per traffic type) at random
// positions in a ring around the BS, per-UE Shannon-capped service rate with
// log-normal shadowing per window, one shared FIFO RLC transmit buffer, and
// per-window KPI extraction feeding the quality-index reward.
class XrEnv {
 public:
  XrEnv(ScenarioConfig config, std::uint64_t seed);

  void reset(std::uint64_t episode_seed);
  // One observation window under the given per-agent codec rates (Mbps).
  // Rates are clamped to each type's bounds.
  StepResult step_window(const std::array<double, kNumTraffic>& rates_mbps);

  const ScenarioConfig& config() const { return config_; }
  int num_flows() const { return static_cast<int>(flows_.size()); }
  const std::array<Vector, kNumTraffic>& observations() const { return obs_; }
  const Vector& state() const { return state_; }
  double buffer_occupancy() const;
  int window_index() const { return window_index_; }
  bool done() const { return done_; }
  std::vector<FlowAudit> audit() const { return audit_; }
  std::vector<std::string> flow_names() const;
  // Distance of each UE from the BS at the start of the next window.
  std::array<double, kNumTraffic> ue_distances() const;

  static constexpr int kObsDim = kNumTraffic + 2;  // prev rates, buffer, pdr
  int state_dim() const { return kNumTraffic * kObsDim + num_flows(); }

 private:
  struct Flow {
    TrafficType type;
    int index_in_type;
    double share;  // fraction of the agent rate carried by this flow
    double phase_s;
  };

  struct QueuedPacket {
    Packet packet;
    double remaining_bits;
  };

  struct FrameState {
    int remaining;
    bool degraded;  // any segment late or dropped
    // On-time bits served in the current window; a frame completing cleanly
    // credits exactly these, so per-window goodput can never exceed
    // per-window throughput even when a frame straddles a boundary.
    double window_bits;
    int last_window;
  };

  void refresh_observation(const std::array<double, kNumTraffic>& rates,
                           const KpiWindow& kpi);
  void drain_until(double horizon, const std::array<double, kNumTraffic>& rates_bps,
                   std::vector<std::vector<double>>& delays,
                   std::vector<double>& served_bits,
                   std::vector<double>& ontime_bits,
                   std::vector<double>& goodput_bits, KpiWindow& kpi);
  void resolve_frame_segment(const Packet& packet, bool on_time,
                             std::vector<double>& goodput_bits);
  void check_conservation() const;

  ScenarioConfig config_;
  std::uint64_t run_seed_;

  std::vector<Flow> flows_;
  std::array<Eigen::Vector2d, kNumTraffic> positions_;
  std::array<Eigen::Vector2d, kNumTraffic> waypoints_;

  std::deque<QueuedPacket> queue_;
  double queued_bits_ = 0.0;
  double server_time_ = 0.0;

  std::map<std::pair<int, std::int64_t>, FrameState> open_frames_;

  Rng rng_traffic_;
  Rng rng_shadow_;
  Rng rng_mobility_;

  int window_index_ = 0;
  bool done_ = false;
  std::array<Vector, kNumTraffic> obs_;
  Vector state_;
  std::vector<FlowAudit> audit_;
};

}  // namespace xrmarl::sim
