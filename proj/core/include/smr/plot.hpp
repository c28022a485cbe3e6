#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "smr/eval.hpp"

namespace smr {

struct CurveSeries {
  std::string name;
  PrCurve curve;
};

/// Precision (y) over recall (x) line plot, both axes [0, 1].
void write_pr_svg(const std::vector<CurveSeries>& series, const std::string& title, std::ostream& out);

/// Per-category bars rising from `base` to `top`: green when top >= base,
/// red otherwise.
struct BarItem {
  std::string category;
  double base = 0.0;
  double top = 0.0;
};

void write_delta_bars_svg(const std::vector<BarItem>& bars, const std::string& title, const std::string& y_label,
                          std::ostream& out);

}  // namespace smr
