#pragma once

#include "xrmarl/common.hpp"

namespace xrmarl::sim {

// Urban-macro non-line-of-sight pathloss, dominant distance/frequency term:
//   PL = 13.54 + 39.08 log10(d) + 20 log10(fc) - 0.6 (h_ut - 1.5)  [dB]
// d in meters, fc in GHz. Monotone increasing in d.
double pathloss_uma_nlos(double distance_m, double fc_ghz,
                         double ue_height_m = 1.5);

struct LinkConfig {
  double carrier_ghz = 4.0;
  double bandwidth_hz = 40e6;
  double tx_power_dbm = 43.0;
  double bs_noise_figure_db = 5.0;  // uplink figure; unused on the downlink
  double ue_noise_figure_db = 7.0;
  double ue_speed_mps = 3.0;
  double antenna_gain_db = 0.0;
  double se_cap_bps_hz = 8.0;       // spectral-efficiency ceiling
  double shadowing_sigma_db = 7.8;  // log-normal, redrawn per window
  double ue_height_m = 1.5;
};

// Thermal noise floor: -174 dBm/Hz + 10 log10(BW) + NF.
double noise_floor_dbm(double bandwidth_hz, double noise_figure_db);

// Downlink SNR in dB for a given pathloss and shadowing realization.
double snr_db(const LinkConfig& link, double distance_m, double shadowing_db);

// Shannon capacity with the SE cap, integrated over one window: bits.
double capacity_bits(const LinkConfig& link, double snr_decibel,
                     double window_s);

// Draws the per-window shadowing realization and composes the above.
double window_capacity(const LinkConfig& link, double distance_m,
                       double window_s, Rng& rng);

}  // namespace xrmarl::sim
