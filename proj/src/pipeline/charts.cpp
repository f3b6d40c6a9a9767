#include "hallubench/pipeline/charts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hallubench/util/io.hpp"

namespace hallubench::pipeline {

namespace {

constexpr std::array kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                 "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series, const std::string& y_label) {
  constexpr double left = 70, top = 40, plot_h = 260, group_w = 90, bar_gap = 4;
  const double plot_w = std::max(1.0, static_cast<double>(categories.size())) * group_w;
  const double width = left + plot_w + 160, height = top + plot_h + 70;

  double lo = 0.0, hi = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-9) hi = lo + 1.0;
  auto y = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      num(width), num(height), num(width), num(height));
  out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                     num(left + plot_w / 2), xml_escape(title));
  out += fmt::format("<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">{}</text>\n",
                     num(top + plot_h / 2), num(top + plot_h / 2), xml_escape(y_label));
  for (double v : {lo, (lo + hi) / 2, hi}) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 6), num(y(v) + 4),
                       num(v));
  }
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#333\"/>\n", num(left), num(y(0.0)),
                     num(left + plot_w));

  const double bar_w =
      series.empty() ? 0.0 : (group_w - 2 * bar_gap * 2) / static_cast<double>(series.size()) - bar_gap;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = left + static_cast<double>(c) * group_w + bar_gap * 2;
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (c >= series[s].values.size()) continue;
      const double v = series[s].values[c];
      const double x = gx + static_cast<double>(s) * (bar_w + bar_gap);
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"><title>{}: {}</title></rect>\n",
                         num(x), num(std::min(y(v), y(0.0))), num(bar_w), num(std::abs(y(v) - y(0.0))),
                         kPalette[s % kPalette.size()], xml_escape(series[s].name), num(v));
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(gx + group_w / 2 - bar_gap * 2),
                       num(top + plot_h + 18), xml_escape(categories[c]));
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = top + 14.0 * static_cast<double>(s);
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", num(left + plot_w + 20),
                       num(ly), kPalette[s % kPalette.size()]);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(left + plot_w + 36), num(ly + 9),
                       xml_escape(series[s].name));
  }
  out += "</svg>\n";
  return out;
}

std::string pie_chart_svg(const std::string& title, const std::vector<PieSlice>& slices) {
  constexpr double cx = 150, cy = 170, r = 110;
  double total = 0.0;
  for (const auto& s : slices) total += std::max(0.0, s.value);
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"320\" viewBox=\"0 0 520 320\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n";
  out += fmt::format("<text x=\"260\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n", xml_escape(title));
  double angle = -std::numbers::pi / 2;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const double share = total > 0 ? std::max(0.0, slices[i].value) / total : 0.0;
    const char* color = kPalette[i % kPalette.size()];
    if (share >= 1.0 - 1e-12) {
      out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n", num(cx), num(cy), num(r), color);
    } else if (share > 0) {
      const double end = angle + share * 2 * std::numbers::pi;
      out += fmt::format("<path d=\"M {} {} L {} {} A {} {} 0 {} 1 {} {} Z\" fill=\"{}\"/>\n", num(cx), num(cy),
                         num(cx + r * std::cos(angle)), num(cy + r * std::sin(angle)), num(r), num(r),
                         share > 0.5 ? 1 : 0, num(cx + r * std::cos(end)), num(cy + r * std::sin(end)), color);
      angle = end;
    }
    const double ly = 70.0 + 18.0 * static_cast<double>(i);
    out += fmt::format("<rect x=\"300\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", num(ly), color);
    out += fmt::format("<text x=\"318\" y=\"{}\">{} ({}%)</text>\n", num(ly + 10), xml_escape(slices[i].label),
                       format_fixed(100.0 * share, 1));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hallubench::pipeline
