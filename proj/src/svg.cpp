#include "alperf/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace alperf {

namespace {

constexpr double kMarginLeft = 56.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 118.0;

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct BudgetBlock {
  std::size_t budget = 0;
  std::vector<const GroupSummary*> boxes;
};

struct Panel {
  std::string title;
  std::vector<BudgetBlock> blocks;
};

std::vector<Panel> arrange(const std::vector<GroupSummary>& groups) {
  std::vector<Panel> panels;
  std::map<std::pair<std::string, std::string>, std::size_t> panel_slot;
  for (const auto& g : groups) {
    auto [it, inserted] = panel_slot.try_emplace({g.scenario, g.sampler}, panels.size());
    if (inserted) panels.push_back({g.scenario + " / " + g.sampler, {}});
    auto& blocks = panels[it->second].blocks;
    auto block = std::find_if(blocks.begin(), blocks.end(), [&](const BudgetBlock& b) { return b.budget == g.budget; });
    if (block == blocks.end()) {
      blocks.push_back({g.budget, {}});
      block = std::prev(blocks.end());
    }
    block->boxes.push_back(&g);
  }
  return panels;
}

double panel_inner_width(const Panel& panel, const SvgLayout& layout) {
  double width = 0.0;
  for (const auto& block : panel.blocks)
    width += static_cast<double>(block.boxes.size()) * (layout.box_width + layout.box_gap) + layout.budget_gap;
  return width;
}

}  // namespace

std::string render_boxplots_svg(const std::vector<GroupSummary>& groups, const SvgLayout& layout) {
  if (groups.empty()) throw std::invalid_argument("render_boxplots_svg: no groups to draw");
  if (layout.columns < 1) throw std::invalid_argument("render_boxplots_svg: columns must be >= 1");

  const auto panels = arrange(groups);
  double cell_width = 0.0;
  for (const auto& p : panels) cell_width = std::max(cell_width, panel_inner_width(p, layout));
  cell_width += kMarginLeft + kMarginRight;
  const double plot_height = layout.panel_height;
  const double cell_height = plot_height + kMarginTop + kMarginBottom;
  const auto columns = static_cast<std::size_t>(layout.columns);
  const std::size_t rows = (panels.size() + columns - 1) / columns;
  const double total_width = cell_width * static_cast<double>(std::min(columns, panels.size()));
  const double total_height = cell_height * static_cast<double>(rows);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total_width) << "\" height=\""
      << num(total_height) << "\" viewBox=\"0 0 " << num(total_width) << ' ' << num(total_height)
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << num(total_width) << "\" height=\"" << num(total_height)
      << "\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    const double ox = cell_width * static_cast<double>(p % columns) + kMarginLeft;
    const double oy = cell_height * static_cast<double>(p / columns) + kMarginTop;
    auto y_of = [&](double accuracy) { return oy + plot_height * (1.0 - std::clamp(accuracy, 0.0, 1.0)); };
    const double inner = panel_inner_width(panel, layout);

    svg << "<g class=\"panel\">\n";
    svg << "<text x=\"" << num(ox) << "\" y=\"" << num(oy - 14.0) << "\" font-size=\"12\" font-weight=\"bold\">"
        << escape(panel.title) << "</text>\n";
    for (int tick = 0; tick <= 10; ++tick) {
      const double value = tick / 10.0;
      const double y = y_of(value);
      svg << "<line x1=\"" << num(ox - 4.0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ox + inner) << "\" y2=\""
          << num(y) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
      svg << "<text x=\"" << num(ox - 6.0) << "\" y=\"" << num(y + 3.0) << "\" text-anchor=\"end\">"
          << num(value).substr(0, 3) << "</text>\n";
    }
    svg << "<line x1=\"" << num(ox) << "\" y1=\"" << num(oy) << "\" x2=\"" << num(ox) << "\" y2=\""
        << num(oy + plot_height) << "\" stroke=\"black\"/>\n";
    svg << "<text transform=\"translate(" << num(ox - 40.0) << ',' << num(oy + plot_height / 2.0)
        << ") rotate(-90)\" text-anchor=\"middle\">accuracy</text>\n";

    double x = ox + layout.budget_gap / 2.0;
    for (const auto& block : panel.blocks) {
      const double block_start = x;
      double baseline_sum = 0.0;
      for (const GroupSummary* g : block.boxes) {
        const auto& s = g->estimate;
        const double left = x + layout.box_gap / 2.0;
        const double mid = left + layout.box_width / 2.0;
        const double right = left + layout.box_width;
        svg << "<line x1=\"" << num(mid) << "\" y1=\"" << num(y_of(s.whisker_low)) << "\" x2=\"" << num(mid)
            << "\" y2=\"" << num(y_of(s.whisker_high)) << "\" stroke=\"black\"/>\n";
        svg << "<rect x=\"" << num(left) << "\" y=\"" << num(y_of(s.q75)) << "\" width=\"" << num(layout.box_width)
            << "\" height=\"" << num(std::max(0.0, y_of(s.q25) - y_of(s.q75)))
            << "\" fill=\"#cfe2f3\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y_of(s.median)) << "\" x2=\"" << num(right)
            << "\" y2=\"" << num(y_of(s.median)) << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
        const double my = y_of(s.mean);
        svg << "<polygon points=\"" << num(mid) << ',' << num(my - 4.0) << ' ' << num(mid + 4.0) << ',' << num(my)
            << ' ' << num(mid) << ',' << num(my + 4.0) << ' ' << num(mid - 4.0) << ',' << num(my)
            << "\" fill=\"green\"/>\n";
        svg << "<text transform=\"translate(" << num(mid + 3.0) << ',' << num(oy + plot_height + 6.0)
            << ") rotate(60)\">" << escape(g->estimator) << "</text>\n";
        baseline_sum += g->true_baseline.mean;
        x += layout.box_width + layout.box_gap;
      }
      const double baseline = baseline_sum / static_cast<double>(block.boxes.size());
      svg << "<line x1=\"" << num(block_start) << "\" y1=\"" << num(y_of(baseline)) << "\" x2=\"" << num(x)
          << "\" y2=\"" << num(y_of(baseline)) << "\" stroke=\"black\" stroke-dasharray=\"5,3\"/>\n";
      svg << "<text x=\"" << num((block_start + x) / 2.0) << "\" y=\"" << num(oy + plot_height + 110.0)
          << "\" text-anchor=\"middle\">B=" << block.budget << "</text>\n";
      x += layout.budget_gap;
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace alperf
