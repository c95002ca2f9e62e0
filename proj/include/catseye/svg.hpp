#pragma once

#include <string>
#include <vector>

// Minimal native SVG line plots (fixed 800x600 viewBox, no timestamps, so
// output bytes depend only on the data).

namespace catseye {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series);

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series);

}  // namespace catseye
