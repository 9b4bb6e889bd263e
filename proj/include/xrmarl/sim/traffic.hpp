#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xrmarl/common.hpp"

namespace xrmarl::sim {

enum class TrafficType { AR = 0, VR = 1, CG = 2 };
constexpr int kNumTraffic = 3;

const char* traffic_name(TrafficType type);

// Per-traffic-type description: how many parallel flows it spawns and the
// codec rate bounds the controlling agent may choose from. The selected rate
// is split evenly across the flows of the type.
struct FlowSpec {
  TrafficType type = TrafficType::AR;
  int flows = 1;
  double fps = 60.0;
  double min_rate_mbps = 0.5;
  double max_rate_mbps = 10.0;
};

// AR (3 flows, 0.5-10 Mbps), VR (1 flow, 10-30), CG (1 flow, 10-30).
std::vector<FlowSpec> default_flow_specs();

struct Packet {
  int flow = 0;             // global flow index
  std::int64_t frame = 0;   // per-flow frame counter
  int packets_in_frame = 1; // segments of the owning frame
  double bits = 0.0;
  double arrival_s = 0.0;
};

// Frames for one flow inside [window_start, window_start + window): periodic
// at 1/fps from the flow's phase offset, mean size rate/(8 fps) bytes, with a
// multiplicative Gaussian size jitter clamped at +/-2 sigma, each frame
// segmented into packets of at most mtu_bytes.
std::vector<Packet> generate_frames(double rate_mbps, double min_rate_mbps,
                                    double max_rate_mbps, double fps,
                                    double phase_s, double window_start_s,
                                    double window_s, double size_sigma,
                                    int mtu_bytes, int flow_index, Rng& rng);

}  // namespace xrmarl::sim
