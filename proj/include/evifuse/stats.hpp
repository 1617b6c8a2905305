#pragma once

#include <cstddef>
#include <span>

namespace evifuse::stats {

/// Boxplot summary of a sample.
struct BoxStats {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;

  bool operator==(const BoxStats&) const = default;
};

/// Quantile with linear interpolation between closest ranks: position
/// p * (n - 1) in the sorted sample.
double quantile(std::span<const double> sorted, double p);

BoxStats summarize(std::span<const double> values);

}  // namespace evifuse::stats
