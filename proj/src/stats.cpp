#include "evifuse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "evifuse/error.hpp"

namespace evifuse::stats {

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats summarize(std::span<const double> values) {
  if (values.empty()) return {};
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats s;
  s.count = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  return s;
}

}  // namespace evifuse::stats
