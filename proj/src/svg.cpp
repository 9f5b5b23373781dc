#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "error.hpp"

namespace stocksel::svg {

namespace {
constexpr double kWidth = 900, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

std::string line_chart(const std::string& title, const std::vector<Date>& dates,
                       const std::vector<Series>& series) {
  if (dates.empty() || series.empty()) {
    throw Error(ErrorKind::EmptyCurve, "nothing to plot");
  }
  double lo = series[0].values.at(0), hi = lo;
  for (const auto& s : series) {
    if (s.values.size() != dates.size())
      throw Error(ErrorKind::MisalignedDates, "series length differs from dates");
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == lo) {
    hi += 0.5;
    lo -= 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_at = [&](std::size_t i) {
    return dates.size() == 1
               ? kLeft + plot_w / 2
               : kLeft + plot_w * static_cast<double>(i) / static_cast<double>(dates.size() - 1);
  };
  auto y_at = [&](double v) { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

  // y grid and labels
  for (int k = 0; k <= 5; ++k) {
    const double v = lo + (hi - lo) * k / 5.0;
    const double y = y_at(v);
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) +
           "</text>\n";
  }
  // x labels: first, middle, last dates
  for (std::size_t i : {std::size_t{0}, dates.size() / 2, dates.size() - 1}) {
    out += "<text x=\"" + num(x_at(i)) + "\" y=\"" + num(kHeight - kBottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           dates[i].iso() + "</text>\n";
  }
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) +
         "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"#333333\"/>\n";

  double legend_y = kTop + 16;
  for (const auto& s : series) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) out += ' ';
      out += num(x_at(i)) + "," + num(y_at(s.values[i]));
    }
    out += "\"/>\n";
    out += "<line x1=\"" + num(kLeft + 10) + "\" y1=\"" + num(legend_y) + "\" x2=\"" +
           num(kLeft + 34) + "\" y2=\"" + num(legend_y) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(kLeft + 40) + "\" y=\"" + num(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.name + "</text>\n";
    legend_y += 18;
  }
  out += "</svg>\n";
  return out;
}

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::vector<Date>& dates, const std::vector<Series>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << line_chart(title, dates, series);
}

}  // namespace stocksel::svg
