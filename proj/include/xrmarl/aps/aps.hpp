#pragma once

#include <array>

#include "xrmarl/sim/kpi.hpp"

namespace xrmarl::aps {

// Threshold-based multiplicative rate controller. p is a loss-ratio
// observation by default (the decrease-on-growth threshold structure only
// makes sense for a loss metric); observe_pdr_literal flips the input to the
// raw delivery ratio for comparison runs.
struct ApsConfig {
  double l_inc = 0.01;        // increase below this
  double l_dec_soft = 0.05;   // soft decrease above this
  double l_dec_quick = 0.20;  // quick decrease at or above this
  double mult_dec_soft = 0.9;
  double mult_dec_quick = 0.5;
  double mult_inc = 1.1;
  double a_min = 0.0;
  double a_max = 0.0;
  bool observe_pdr_literal = false;
  double initial_fraction = 0.5;  // starting rate position inside [a_min, a_max]

  void validate() const;  // throws std::invalid_argument
};

// One control decision:
//   l_dec_soft < p < l_dec_quick -> max(a_prev * mult_dec_soft, a_min)
//   p >= l_dec_quick             -> max(a_prev * mult_dec_quick, a_min)
//   p < l_inc                    -> min(a_prev * mult_inc, a_max)
//   otherwise                    -> a_prev
// The output is continuous, not snapped to the RL action grid.
double aps_step(double p, double a_prev, const ApsConfig& cfg);

// Per-traffic-type controller over the simulator KPI stream.
class ApsController {
 public:
  ApsController(const std::array<ApsConfig, sim::kNumTraffic>& configs);

  // Rates for the first window, before any KPI exists.
  std::array<double, sim::kNumTraffic> initial_rates() const;
  // Consumes the last window's KPI, emits the next rates.
  std::array<double, sim::kNumTraffic> act(const sim::KpiWindow& kpi);

  void reset();

 private:
  std::array<ApsConfig, sim::kNumTraffic> configs_;
  std::array<double, sim::kNumTraffic> rates_;
};

}  // namespace xrmarl::aps
