#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tiltsim/linalg.hpp"

namespace tiltsim {

struct PlotSeries {
  std::string label;
  std::vector<Vec2> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool equal_aspect = false;
  std::vector<PlotSeries> series;
};

/// Renders a static line chart. Long series are decimated to keep files small;
/// these plots are presentation only.
std::string render_line_chart(const PlotSpec& spec);
void write_line_chart(const std::filesystem::path& path, const PlotSpec& spec);

}  // namespace tiltsim
