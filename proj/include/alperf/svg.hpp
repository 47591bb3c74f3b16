#pragma once

#include <string>
#include <vector>

#include "alperf/records_io.hpp"

namespace alperf {

struct SvgLayout {
  double box_width = 18.0;
  double box_gap = 8.0;
  double budget_gap = 26.0;
  double panel_height = 320.0;
  int columns = 1;
};

/// Boxplot figure: one panel per (scenario, sampler), one box per
/// (budget, estimator). The y axis spans accuracy [0, 1] with ticks every 0.1.
/// Median lines are red, means green diamonds, and the mean true baseline of
/// each budget a black dashed line. Throws std::invalid_argument on no groups.
std::string render_boxplots_svg(const std::vector<GroupSummary>& groups, const SvgLayout& layout = {});

}  // namespace alperf
