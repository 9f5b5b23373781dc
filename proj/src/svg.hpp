#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dates.hpp"

namespace stocksel::svg {

struct Series {
  std::string name;
  std::string color;  // css color
  std::vector<double> values;
};

/// Minimal line chart: axes, y-ticks, legend, one polyline per series.
std::string line_chart(const std::string& title, const std::vector<Date>& dates,
                       const std::vector<Series>& series);

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::vector<Date>& dates, const std::vector<Series>& series);

}  // namespace stocksel::svg
