#include "xrmarl/sim/link.hpp"

#include <cmath>
#include <stdexcept>

namespace xrmarl::sim {

double pathloss_uma_nlos(double distance_m, double fc_ghz, double ue_height_m) {
  if (distance_m <= 0.0) {
    throw std::invalid_argument("pathloss_uma_nlos: distance must be > 0");
  }
  return 13.54 + 39.08 * std::log10(distance_m) + 20.0 * std::log10(fc_ghz) -
         0.6 * (ue_height_m - 1.5);
}

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double snr_db(const LinkConfig& link, double distance_m, double shadowing_db) {
  const double pl = pathloss_uma_nlos(distance_m, link.carrier_ghz, link.ue_height_m);
  const double noise = noise_floor_dbm(link.bandwidth_hz, link.ue_noise_figure_db);
  return link.tx_power_dbm + link.antenna_gain_db - pl - shadowing_db - noise;
}

double capacity_bits(const LinkConfig& link, double snr_decibel,
                     double window_s) {
  const double snr_linear = std::pow(10.0, snr_decibel / 10.0);
  const double se = std::min(std::log2(1.0 + snr_linear), link.se_cap_bps_hz);
  return link.bandwidth_hz * se * window_s;
}

double window_capacity(const LinkConfig& link, double distance_m,
                       double window_s, Rng& rng) {
  std::normal_distribution<double> shadow(0.0, link.shadowing_sigma_db);
  return capacity_bits(link, snr_db(link, distance_m, shadow(rng)), window_s);
}

}  // namespace xrmarl::sim
