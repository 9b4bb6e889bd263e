#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "xrmarl/sim/traffic.hpp"

namespace xrmarl::sim {

// Per-flow counters and rates over one observation window. "Resolved" means
// the packet reached a disposition this window: served on time, served past
// the delay budget (still transport throughput), or dropped on buffer
// overflow.
struct FlowKpi {
  std::int64_t generated = 0;
  std::int64_t delivered_on_time = 0;
  std::int64_t delivered_late = 0;
  std::int64_t dropped = 0;
  std::int64_t queued_end = 0;

  double throughput_mbps = 0.0;  // transport level, late packets included
  double goodput_mbps = 0.0;     // frames fully delivered within budget
  double mean_delay_ms = 0.0;    // over packets served this window
  double jitter_ms = 0.0;        // std dev of those delays
  double pdr = 1.0;              // on-time / resolved; 1 when nothing resolved
};

// Aggregation over the flows of one traffic type, plus the derived quality
// level and per-agent reward.
struct TypeKpi {
  double pdr = 1.0;  // fraction
  double mean_delay_ms = 0.0;
  double jitter_ms = 0.0;
  double throughput_mbps = 0.0;
  double goodput_mbps = 0.0;
  int xqi = 5;
  double reward = 1.0;
};

struct KpiWindow {
  std::vector<FlowKpi> flows;
  std::array<TypeKpi, kNumTraffic> types;
  std::vector<double> flow_throughput_mbps;  // the observable throughput vector
  double buffer_occupancy = 0.0;             // RLC ratio at window end
  bool any_zero_throughput = false;
};

}  // namespace xrmarl::sim
