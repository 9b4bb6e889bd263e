#include "xrmarl/sim/kpi_csv.hpp"

#include <cstdio>

namespace xrmarl::sim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string kpi_csv_header(const std::vector<std::string>& flow_names) {
  std::string header = "episode,window";
  for (const std::string& f : flow_names) {
    header += "," + f + "_throughput_mbps," + f + "_goodput_mbps," + f +
              "_delay_ms," + f + "_jitter_ms," + f + "_pdr";
  }
  header += ",xqi_ar,xqi_vr,xqi_cg,reward,done";
  return header;
}

std::string kpi_csv_row(int episode, int window, const KpiWindow& kpi,
                        double team_reward, bool done) {
  std::string row = std::to_string(episode) + "," + std::to_string(window);
  for (const FlowKpi& f : kpi.flows) {
    row += "," + fmt(f.throughput_mbps) + "," + fmt(f.goodput_mbps) + "," +
           fmt(f.mean_delay_ms) + "," + fmt(f.jitter_ms) + "," + fmt(f.pdr);
  }
  for (const TypeKpi& t : kpi.types) {
    row += "," + std::to_string(t.xqi);
  }
  row += "," + fmt(team_reward) + "," + (done ? std::string("1") : std::string("0"));
  return row;
}

}  // namespace xrmarl::sim
