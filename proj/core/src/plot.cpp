#include "smr/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace smr {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

void header(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
}

void axes(std::ostream& out, double y_max, const std::string& x_label, const std::string& y_label, bool x_ticks) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double f = k / 5.0;
    const double y = y0 - f * (y0 - y1);
    out << "<text x=\"" << x0 - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(f * y_max) << "</text>\n";
    if (x_ticks) {
      const double x = x0 + f * (x1 - x0);
      out << "<text x=\"" << num(x) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << num(f) << "</text>\n";
    }
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 14 << "\" text-anchor=\"middle\">" << escape(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (y0 + y1) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

void write_pr_svg(const std::vector<CurveSeries>& series, const std::string& title, std::ostream& out) {
  header(out, title);
  axes(out, 1.0, "Recall", "Precision", true);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : series[s].curve.points) {
      out << num(x0 + p.recall * (x1 - x0)) << ',' << num(y0 - p.precision * (y0 - y1)) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(s) + 8.0;
    out << "<line x1=\"" << x1 - 170 << "\" y1=\"" << ly << "\" x2=\"" << x1 - 150 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << x1 - 145 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_delta_bars_svg(const std::vector<BarItem>& bars, const std::string& title, const std::string& y_label,
                          std::ostream& out) {
  header(out, title);
  double y_max = 0.0;
  for (const auto& b : bars) y_max = std::max({y_max, b.base, b.top});
  if (y_max <= 0.0) y_max = 1.0;
  axes(out, y_max, "", y_label, false);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double slot = (x1 - x0) / static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  const auto to_y = [&](double v) { return y0 - std::max(v, 0.0) / y_max * (y0 - y1); };
  for (std::size_t k = 0; k < bars.size(); ++k) {
    const auto& b = bars[k];
    const double x = x0 + slot * static_cast<double>(k) + slot * 0.2;
    const double w = slot * 0.6;
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(to_y(b.base)) << "\" width=\"" << num(w) << "\" height=\""
        << num(y0 - to_y(b.base)) << "\" fill=\"#c8c8c8\"/>\n";
    const double lo = std::min(b.base, b.top);
    const double hi = std::max(b.base, b.top);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(to_y(hi)) << "\" width=\"" << num(w) << "\" height=\""
        << num(to_y(lo) - to_y(hi)) << "\" fill=\"" << (b.top >= b.base ? "#2ca02c" : "#d62728") << "\"/>\n";
    out << "<text x=\"" << num(x + w / 2) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << escape(b.category)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace smr
