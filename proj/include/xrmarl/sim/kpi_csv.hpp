#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "xrmarl/sim/kpi.hpp"

namespace xrmarl::sim {

// One row per observation window:
//   episode,window,
//   <flow>_throughput_mbps,<flow>_goodput_mbps,<flow>_delay_ms,
//   <flow>_jitter_ms,<flow>_pdr   (for every flow, in flow order)
//   xqi_ar,xqi_vr,xqi_cg,reward,done
std::string kpi_csv_header(const std::vector<std::string>& flow_names);

std::string kpi_csv_row(int episode, int window, const KpiWindow& kpi,
                        double team_reward, bool done);

}  // namespace xrmarl::sim
