#pragma once

#include <string>
#include <vector>

namespace xrmarl::harness {

// One polyline with an optional symmetric confidence band (half-widths).
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // empty or same length as y
};

// Static vector-graphic line chart; axes, ticks, legend, shaded bands.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add(Series series);
  // Renders to an .svg file; throws std::runtime_error on I/O failure.
  void write(const std::string& path) const;
  std::string render() const;

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
};

}  // namespace xrmarl::harness
