#include "alperf/summary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace alperf {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double position = p * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  if (fraction == 0.0) return sorted[lower];
  return sorted[lower] + fraction * (sorted[upper] - sorted[lower]);
}

BoxplotStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  BoxplotStats stats;
  stats.n = sorted.size();
  // Summing in sorted order keeps the mean independent of input order.
  stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  stats.median = quantile_sorted(sorted, 0.5);
  stats.q25 = quantile_sorted(sorted, 0.25);
  stats.q75 = quantile_sorted(sorted, 0.75);

  const double reach = 1.5 * (stats.q75 - stats.q25);
  const auto low = std::lower_bound(sorted.begin(), sorted.end(), stats.q25 - reach);
  const auto high = std::upper_bound(sorted.begin(), sorted.end(), stats.q75 + reach);
  stats.whisker_low = std::min(*low, stats.q25);
  stats.whisker_high = std::max(*std::prev(high), stats.q75);
  return stats;
}

}  // namespace alperf
