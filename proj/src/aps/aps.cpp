#include "xrmarl/aps/aps.hpp"

#include <algorithm>
#include <stdexcept>

namespace xrmarl::aps {

void ApsConfig::validate() const {
  if (!(0.0 <= l_inc && l_inc <= l_dec_soft && l_dec_soft < l_dec_quick &&
        l_dec_quick <= 1.0)) {
    throw std::invalid_argument("aps: thresholds must satisfy 0 <= l_inc <= l_dec_soft < l_dec_quick <= 1");
  }
  if (!(mult_dec_quick <= mult_dec_soft && mult_dec_soft <= 1.0 &&
        1.0 <= mult_inc)) {
    throw std::invalid_argument("aps: multipliers must satisfy quick <= soft <= 1 <= inc");
  }
  if (a_min > a_max) {
    throw std::invalid_argument("aps: a_min must not exceed a_max");
  }
  if (initial_fraction < 0.0 || initial_fraction > 1.0) {
    throw std::invalid_argument("aps: initial fraction must be in [0, 1]");
  }
}

double aps_step(double p, double a_prev, const ApsConfig& cfg) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("aps_step: p must be in [0, 1]");
  }
  cfg.validate();
  if (p > cfg.l_dec_soft && p < cfg.l_dec_quick) {
    return std::max(a_prev * cfg.mult_dec_soft, cfg.a_min);
  }
  if (p >= cfg.l_dec_quick) {
    return std::max(a_prev * cfg.mult_dec_quick, cfg.a_min);
  }
  if (p < cfg.l_inc) {
    return std::min(a_prev * cfg.mult_inc, cfg.a_max);
  }
  return a_prev;
}

ApsController::ApsController(const std::array<ApsConfig, sim::kNumTraffic>& configs)
    : configs_(configs) {
  for (const ApsConfig& cfg : configs_) cfg.validate();
  reset();
}

void ApsController::reset() {
  for (int t = 0; t < sim::kNumTraffic; ++t) {
    const ApsConfig& cfg = configs_[static_cast<std::size_t>(t)];
    rates_[static_cast<std::size_t>(t)] =
        cfg.a_min + cfg.initial_fraction * (cfg.a_max - cfg.a_min);
  }
}

std::array<double, sim::kNumTraffic> ApsController::initial_rates() const {
  return rates_;
}

std::array<double, sim::kNumTraffic> ApsController::act(const sim::KpiWindow& kpi) {
  for (int t = 0; t < sim::kNumTraffic; ++t) {
    const ApsConfig& cfg = configs_[static_cast<std::size_t>(t)];
    const double pdr = kpi.types[static_cast<std::size_t>(t)].pdr;
    const double p = cfg.observe_pdr_literal ? pdr : 1.0 - pdr;
    rates_[static_cast<std::size_t>(t)] =
        aps_step(std::clamp(p, 0.0, 1.0), rates_[static_cast<std::size_t>(t)], cfg);
  }
  return rates_;
}

}  // namespace xrmarl::aps
