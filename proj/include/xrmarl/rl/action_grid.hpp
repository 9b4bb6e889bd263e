#pragma once

#include <vector>

#include "xrmarl/common.hpp"

namespace xrmarl::rl {

// Evenly spaced codec data-rate levels between the per-traffic bounds:
//   rate(k) = d_min + k * (d_max - d_min) / (levels - 1)
class CodecActionGrid {
 public:
  CodecActionGrid(double min_rate_mbps, double max_rate_mbps, int levels);

  double rate(int level) const;
  int size() const { return levels_; }
  double min_rate() const { return min_; }
  double max_rate() const { return max_; }
  std::vector<double> grid() const;

 private:
  double min_;
  double max_;
  int levels_;
};

}  // namespace xrmarl::rl
