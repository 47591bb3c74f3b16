#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alperf {

/// Boxplot statistics. Quartiles use linear interpolation between order
/// statistics at position p * (n - 1) (Hyndman-Fan type 7). Whiskers sit at the
/// most extreme observation within 1.5 IQR of the box.
struct BoxplotStats {
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::size_t n = 0;

  bool operator==(const BoxplotStats&) const = default;
};

/// Type-7 quantile of an ascending range.
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws std::invalid_argument on empty input.
BoxplotStats summarize(std::span<const double> values);

}  // namespace alperf
