#include "xrmarl/sim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xrmarl::sim {

const char* traffic_name(TrafficType type) {
  switch (type) {
    case TrafficType::AR: return "ar";
    case TrafficType::VR: return "vr";
    case TrafficType::CG: return "cg";
  }
  return "??";
}

std::vector<FlowSpec> default_flow_specs() {
  return {
      {TrafficType::AR, 3, 60.0, 0.5, 10.0},
      {TrafficType::VR, 1, 60.0, 10.0, 30.0},
      {TrafficType::CG, 1, 60.0, 10.0, 30.0},
  };
}

std::vector<Packet> generate_frames(double rate_mbps, double min_rate_mbps,
                                    double max_rate_mbps, double fps,
                                    double phase_s, double window_start_s,
                                    double window_s, double size_sigma,
                                    int mtu_bytes, int flow_index, Rng& rng) {
  if (rate_mbps < min_rate_mbps || rate_mbps > max_rate_mbps) {
    throw std::invalid_argument("generate_frames: rate outside flow bounds");
  }
  if (mtu_bytes <= 0) {
    throw std::invalid_argument("generate_frames: mtu must be positive");
  }
  const double mean_bits = rate_mbps * 1e6 / fps;
  const double window_end = window_start_s + window_s;
  // First frame index whose arrival falls inside the window.
  const auto first = static_cast<std::int64_t>(
      std::ceil((window_start_s - phase_s) * fps - 1e-9));
  std::normal_distribution<double> jitter(0.0, size_sigma);

  std::vector<Packet> packets;
  for (std::int64_t k = std::max<std::int64_t>(first, 0);; ++k) {
    const double arrival = phase_s + static_cast<double>(k) / fps;
    if (arrival >= window_end) break;
    if (arrival < window_start_s) continue;
    double factor = 1.0;
    if (size_sigma > 0.0) {
      factor += std::clamp(jitter(rng), -2.0 * size_sigma, 2.0 * size_sigma);
    }
    const double frame_bits = mean_bits * factor;
    const int segments = std::max(
        1, static_cast<int>(std::ceil(frame_bits / (8.0 * mtu_bytes))));
    for (int s = 0; s < segments; ++s) {
      Packet p;
      p.flow = flow_index;
      p.frame = k;
      p.packets_in_frame = segments;
      p.bits = frame_bits / segments;
      p.arrival_s = arrival;
      packets.push_back(p);
    }
  }
  return packets;
}

}  // namespace xrmarl::sim
