#include "xrmarl/sim/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "xrmarl/sim/xqi.hpp"

namespace xrmarl::sim {

namespace {

constexpr double kMsPerS = 1e3;

double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (ring_inner_m <= 0.0 || ring_outer_m <= ring_inner_m) {
    throw std::invalid_argument("scenario: ring must satisfy 0 < inner < outer");
  }
  if (window_s <= 0.0) throw std::invalid_argument("scenario: window must be > 0");
  if (windows_per_episode < 1) {
    throw std::invalid_argument("scenario: need at least one window per episode");
  }
  if (rlc_capacity_bytes <= 0) {
    throw std::invalid_argument("scenario: RLC capacity must be positive");
  }
  if (packet_mtu_bytes <= 0) {
    throw std::invalid_argument("scenario: packet MTU must be positive");
  }
  if (link.bandwidth_hz <= 0.0) {
    throw std::invalid_argument("scenario: bandwidth must be positive");
  }
  if (flows.size() != kNumTraffic) {
    throw std::invalid_argument("scenario: exactly one FlowSpec per traffic type");
  }
  for (const FlowSpec& spec : flows) {
    if (spec.flows < 1 || spec.fps <= 0.0 ||
        spec.min_rate_mbps > spec.max_rate_mbps || spec.min_rate_mbps <= 0.0) {
      throw std::invalid_argument("scenario: malformed flow spec");
    }
  }
}

XrEnv::XrEnv(ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), run_seed_(seed) {
  config_.validate();
  flows_.clear();
  for (const FlowSpec& spec : config_.flows) {
    for (int i = 0; i < spec.flows; ++i) {
      flows_.push_back(Flow{spec.type, i, 1.0 / spec.flows, 0.0});
    }
  }
  reset(seed);
}

std::vector<std::string> XrEnv::flow_names() const {
  std::vector<std::string> names;
  names.reserve(flows_.size());
  for (const Flow& f : flows_) {
    names.push_back(std::string(traffic_name(f.type)) +
                    std::to_string(f.index_in_type));
  }
  return names;
}

void XrEnv::reset(std::uint64_t episode_seed) {
  rng_traffic_ = make_rng(episode_seed, 101);
  rng_shadow_ = make_rng(episode_seed, 202);
  rng_mobility_ = make_rng(episode_seed, 303);

  queue_.clear();
  queued_bits_ = 0.0;
  server_time_ = 0.0;
  open_frames_.clear();
  window_index_ = 0;
  done_ = false;
  audit_.assign(flows_.size(), FlowAudit{});

  // Uniform placement over the ring annulus.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_point = [&]() {
    const double r2_lo = config_.ring_inner_m * config_.ring_inner_m;
    const double r2_hi = config_.ring_outer_m * config_.ring_outer_m;
    const double r = std::sqrt(r2_lo + (r2_hi - r2_lo) * unit(rng_mobility_));
    const double theta = 2.0 * M_PI * unit(rng_mobility_);
    return Eigen::Vector2d(r * std::cos(theta), r * std::sin(theta));
  };
  for (int u = 0; u < kNumTraffic; ++u) {
    positions_[u] = draw_point();
    waypoints_[u] = draw_point();
  }
  for (Flow& f : flows_) {
    const double fps = config_.flows[static_cast<std::size_t>(f.type)].fps;
    f.phase_s = unit(rng_traffic_) / fps;
  }

  KpiWindow blank;
  blank.flows.assign(flows_.size(), FlowKpi{});
  blank.flow_throughput_mbps.assign(flows_.size(), 0.0);
  refresh_observation({0.0, 0.0, 0.0}, blank);
}

double XrEnv::buffer_occupancy() const {
  return clamp(queued_bits_ / (8.0 * static_cast<double>(config_.rlc_capacity_bytes)),
               0.0, 1.0);
}

std::array<double, kNumTraffic> XrEnv::ue_distances() const {
  std::array<double, kNumTraffic> d{};
  for (int u = 0; u < kNumTraffic; ++u) d[u] = positions_[u].norm();
  return d;
}

void XrEnv::resolve_frame_segment(const Packet& packet, bool on_time,
                                  std::vector<double>& goodput_bits) {
  auto key = std::make_pair(packet.flow, packet.frame);
  auto it = open_frames_.find(key);
  if (it == open_frames_.end()) {
    it = open_frames_
             .emplace(key,
                      FrameState{packet.packets_in_frame, false, 0.0,
                                 window_index_})
             .first;
  }
  FrameState& frame = it->second;
  frame.remaining -= 1;
  if (frame.last_window != window_index_) {
    frame.window_bits = 0.0;
    frame.last_window = window_index_;
  }
  if (on_time) {
    frame.window_bits += packet.bits;
  } else {
    frame.degraded = true;
  }
  if (frame.remaining == 0) {
    if (!frame.degraded) {
      goodput_bits[static_cast<std::size_t>(packet.flow)] += frame.window_bits;
    }
    open_frames_.erase(it);
  }
}

void XrEnv::drain_until(double horizon,
                        const std::array<double, kNumTraffic>& rates_bps,
                        std::vector<std::vector<double>>& delays,
                        std::vector<double>& served_bits,
                        std::vector<double>& ontime_bits,
                        std::vector<double>& goodput_bits, KpiWindow& kpi) {
  const double budget_s = config_.delay_budget_ms / kMsPerS;
  while (!queue_.empty()) {
    QueuedPacket& head = queue_.front();
    const auto type =
        static_cast<std::size_t>(flows_[static_cast<std::size_t>(head.packet.flow)].type);
    const double rate = rates_bps[type];
    if (rate <= 0.0) break;  // no service possible this window
    const double finish = server_time_ + head.remaining_bits / rate;
    if (finish > horizon) {
      head.remaining_bits -= rate * (horizon - server_time_);
      server_time_ = horizon;
      return;
    }
    server_time_ = finish;
    const Packet packet = head.packet;
    queued_bits_ -= packet.bits;
    queue_.pop_front();

    const double delay = finish - packet.arrival_s;
    const bool on_time = delay <= budget_s;
    const auto flow = static_cast<std::size_t>(packet.flow);
    served_bits[flow] += packet.bits;
    delays[flow].push_back(delay);
    if (on_time) {
      ontime_bits[flow] += packet.bits;
      kpi.flows[flow].delivered_on_time += 1;
      audit_[flow].on_time += 1;
    } else {
      kpi.flows[flow].delivered_late += 1;
      audit_[flow].late += 1;
    }
    audit_[flow].queued -= 1;
    resolve_frame_segment(packet, on_time, goodput_bits);
  }
  server_time_ = horizon;
}

StepResult XrEnv::step_window(const std::array<double, kNumTraffic>& rates_mbps) {
  if (done_) {
    throw std::logic_error("step_window: episode already terminated");
  }
  const double window_start = window_index_ * config_.window_s;
  const double window_end = window_start + config_.window_s;
  const int n_flows = num_flows();

  // Clamp degenerate inputs to the per-type bounds.
  std::array<double, kNumTraffic> rates = rates_mbps;
  for (int t = 0; t < kNumTraffic; ++t) {
    const FlowSpec& spec = config_.flows[static_cast<std::size_t>(t)];
    rates[static_cast<std::size_t>(t)] =
        clamp(rates[static_cast<std::size_t>(t)], spec.min_rate_mbps,
              spec.max_rate_mbps);
  }

  // Per-UE service rate for this window.
  std::array<double, kNumTraffic> service_bps{};
  for (int u = 0; u < kNumTraffic; ++u) {
    const double distance = positions_[u].norm();
    double shadow = 0.0;
    if (config_.shadowing_enabled && config_.link.shadowing_sigma_db > 0.0) {
      std::normal_distribution<double> dist(0.0, config_.link.shadowing_sigma_db);
      shadow = dist(rng_shadow_);
    }
    const double bits =
        capacity_bits(config_.link, snr_db(config_.link, distance, shadow),
                      config_.window_s);
    service_bps[u] = bits / config_.window_s;
  }

  // Generate this window's packets for every flow.
  std::vector<Packet> arrivals;
  for (int f = 0; f < n_flows; ++f) {
    const Flow& flow = flows_[static_cast<std::size_t>(f)];
    const FlowSpec& spec = config_.flows[static_cast<std::size_t>(flow.type)];
    const double flow_rate = rates[static_cast<std::size_t>(flow.type)] * flow.share;
    std::vector<Packet> pkts = generate_frames(
        flow_rate, spec.min_rate_mbps * flow.share,
        spec.max_rate_mbps * flow.share, spec.fps, flow.phase_s, window_start,
        config_.window_s, config_.frame_size_sigma, config_.packet_mtu_bytes,
        f, rng_traffic_);
    arrivals.insert(arrivals.end(), pkts.begin(), pkts.end());
  }
  std::stable_sort(arrivals.begin(), arrivals.end(),
                   [](const Packet& a, const Packet& b) {
                     if (a.arrival_s != b.arrival_s) return a.arrival_s < b.arrival_s;
                     if (a.flow != b.flow) return a.flow < b.flow;
                     return a.frame < b.frame;
                   });

  KpiWindow kpi;
  kpi.flows.assign(static_cast<std::size_t>(n_flows), FlowKpi{});
  kpi.flow_throughput_mbps.assign(static_cast<std::size_t>(n_flows), 0.0);
  std::vector<std::vector<double>> delays(static_cast<std::size_t>(n_flows));
  std::vector<double> served_bits(static_cast<std::size_t>(n_flows), 0.0);
  std::vector<double> ontime_bits(static_cast<std::size_t>(n_flows), 0.0);
  std::vector<double> goodput_bits(static_cast<std::size_t>(n_flows), 0.0);

  const double cap_bits = 8.0 * static_cast<double>(config_.rlc_capacity_bytes);
  server_time_ = std::max(server_time_, window_start);
  for (const Packet& p : arrivals) {
    drain_until(p.arrival_s, service_bps, delays, served_bits, ontime_bits,
                goodput_bits, kpi);
    const auto flow = static_cast<std::size_t>(p.flow);
    kpi.flows[flow].generated += 1;
    audit_[flow].generated += 1;
    if (queued_bits_ + p.bits > cap_bits) {
      kpi.flows[flow].dropped += 1;
      audit_[flow].dropped += 1;
      resolve_frame_segment(p, false, goodput_bits);
    } else {
      queue_.push_back(QueuedPacket{p, p.bits});
      queued_bits_ += p.bits;
      audit_[flow].queued += 1;
    }
  }
  drain_until(window_end, service_bps, delays, served_bits, ontime_bits,
              goodput_bits, kpi);

  // Per-flow KPI.
  for (int f = 0; f < n_flows; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    FlowKpi& k = kpi.flows[fi];
    k.throughput_mbps = served_bits[fi] / config_.window_s / 1e6;
    k.goodput_mbps = goodput_bits[fi] / config_.window_s / 1e6;
    const std::int64_t resolved = k.delivered_on_time + k.delivered_late + k.dropped;
    k.pdr = resolved > 0
                ? static_cast<double>(k.delivered_on_time) / static_cast<double>(resolved)
                : 1.0;
    if (!delays[fi].empty()) {
      const double n = static_cast<double>(delays[fi].size());
      const double mean =
          std::accumulate(delays[fi].begin(), delays[fi].end(), 0.0) / n;
      double var = 0.0;
      for (double d : delays[fi]) var += (d - mean) * (d - mean);
      k.mean_delay_ms = mean * kMsPerS;
      k.jitter_ms = std::sqrt(var / n) * kMsPerS;
    }
    k.queued_end = audit_[fi].queued;
    kpi.flow_throughput_mbps[fi] = k.throughput_mbps;
    if (served_bits[fi] <= 0.0) kpi.any_zero_throughput = true;
  }

  // Per-type aggregation and rewards.
  std::vector<double> agent_rewards;
  for (int t = 0; t < kNumTraffic; ++t) {
    TypeKpi& tk = kpi.types[static_cast<std::size_t>(t)];
    std::int64_t on_time = 0, resolved = 0;
    double sum_delay = 0.0, sum_sq = 0.0;
    std::int64_t n_delay = 0;
    for (int f = 0; f < n_flows; ++f) {
      if (flows_[static_cast<std::size_t>(f)].type != static_cast<TrafficType>(t))
        continue;
      const auto fi = static_cast<std::size_t>(f);
      const FlowKpi& k = kpi.flows[fi];
      on_time += k.delivered_on_time;
      resolved += k.delivered_on_time + k.delivered_late + k.dropped;
      tk.throughput_mbps += k.throughput_mbps;
      tk.goodput_mbps += k.goodput_mbps;
      for (double d : delays[fi]) {
        sum_delay += d;
        sum_sq += d * d;
        n_delay += 1;
      }
    }
    tk.pdr = resolved > 0 ? static_cast<double>(on_time) / static_cast<double>(resolved)
                          : 1.0;
    if (n_delay > 0) {
      const double mean = sum_delay / static_cast<double>(n_delay);
      tk.mean_delay_ms = mean * kMsPerS;
      tk.jitter_ms =
          std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n_delay) - mean * mean)) *
          kMsPerS;
    }
    const double pdr_percent = 100.0 * tk.pdr;
    tk.xqi = xqi_level(pdr_percent, tk.mean_delay_ms);
    tk.reward = reward_xqi(pdr_percent, tk.mean_delay_ms);
    agent_rewards.push_back(tk.reward);
  }

  const bool done = kpi.any_zero_throughput;
  if (done) {
    for (int t = 0; t < kNumTraffic; ++t) {
      kpi.types[static_cast<std::size_t>(t)].reward = -1.0;
    }
    agent_rewards.assign(kNumTraffic, -1.0);
  }
  kpi.buffer_occupancy = buffer_occupancy();

  check_conservation();

  // Mobility: random waypoint inside the annulus at the configured speed.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double step_m = config_.link.ue_speed_mps * config_.window_s;
  for (int u = 0; u < kNumTraffic; ++u) {
    Eigen::Vector2d to_target = waypoints_[u] - positions_[u];
    double dist = to_target.norm();
    if (dist <= step_m) {
      positions_[u] = waypoints_[u];
      const double r2_lo = config_.ring_inner_m * config_.ring_inner_m;
      const double r2_hi = config_.ring_outer_m * config_.ring_outer_m;
      const double r = std::sqrt(r2_lo + (r2_hi - r2_lo) * unit(rng_mobility_));
      const double theta = 2.0 * M_PI * unit(rng_mobility_);
      waypoints_[u] = Eigen::Vector2d(r * std::cos(theta), r * std::sin(theta));
    } else {
      positions_[u] += to_target * (step_m / dist);
    }
  }

  window_index_ += 1;
  done_ = done || window_index_ >= config_.windows_per_episode;

  refresh_observation(rates, kpi);

  StepResult result;
  result.observations = obs_;
  result.state = state_;
  result.kpi = std::move(kpi);
  result.team_reward = done ? -1.0 : team_reward(agent_rewards);
  result.done = done;
  return result;
}

void XrEnv::refresh_observation(const std::array<double, kNumTraffic>& rates,
                                const KpiWindow& kpi) {
  Vector prev_rates(kNumTraffic);
  for (int t = 0; t < kNumTraffic; ++t) {
    const FlowSpec& spec = config_.flows[static_cast<std::size_t>(t)];
    const double span = spec.max_rate_mbps - spec.min_rate_mbps;
    const double r = rates[static_cast<std::size_t>(t)];
    prev_rates(t) =
        r <= 0.0 ? 0.0 : clamp((r - spec.min_rate_mbps) / (span > 0.0 ? span : 1.0), 0.0, 1.0);
  }
  const double occupancy = buffer_occupancy();
  for (int t = 0; t < kNumTraffic; ++t) {
    Vector o(kObsDim);
    o.head(kNumTraffic) = prev_rates;
    o(kNumTraffic) = occupancy;
    o(kNumTraffic + 1) = kpi.types[static_cast<std::size_t>(t)].pdr;
    obs_[static_cast<std::size_t>(t)] = o;
  }

  state_.resize(state_dim());
  for (int t = 0; t < kNumTraffic; ++t) {
    state_.segment(t * kObsDim, kObsDim) = obs_[static_cast<std::size_t>(t)];
  }
  for (int f = 0; f < num_flows(); ++f) {
    const Flow& flow = flows_[static_cast<std::size_t>(f)];
    const FlowSpec& spec = config_.flows[static_cast<std::size_t>(flow.type)];
    const double norm = spec.max_rate_mbps * flow.share;
    state_(kNumTraffic * kObsDim + f) =
        clamp(kpi.flow_throughput_mbps.empty()
                  ? 0.0
                  : kpi.flow_throughput_mbps[static_cast<std::size_t>(f)] / norm,
              0.0, 1.0);
  }
}

void XrEnv::check_conservation() const {
  for (const FlowAudit& a : audit_) {
    if (a.generated != a.on_time + a.late + a.dropped + a.queued || a.queued < 0) {
      throw std::logic_error("XrEnv: packet conservation violated");
    }
  }
}

}  // namespace xrmarl::sim
