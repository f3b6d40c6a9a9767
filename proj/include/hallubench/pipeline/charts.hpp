#pragma once

#include <string>
#include <vector>

namespace hallubench::pipeline {

struct BarSeries {
  std::string name;
  std::vector<double> values;  // one per category
};

// Grouped bars around a zero line; negative values hang below it.
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series, const std::string& y_label);

struct PieSlice {
  std::string label;
  double value = 0.0;
};

std::string pie_chart_svg(const std::string& title, const std::vector<PieSlice>& slices);

std::string xml_escape(std::string_view text);

}  // namespace hallubench::pipeline
