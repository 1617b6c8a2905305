#pragma once

// Plug-in information measures over discrete label vectors, in bits.

#include <cstddef>
#include <span>
#include <vector>

#include "evifuse/metrics.hpp"

namespace evifuse::infotheory {

/// Empirical joint counts over (x, z) label pairs.
struct JointDistribution {
  std::size_t x_levels = 0;
  std::size_t z_levels = 0;
  std::vector<std::size_t> counts;  ///< row-major x_levels x z_levels
  std::size_t total = 0;

  static JointDistribution from(std::span<const Label> x, std::span<const Label> z);
  std::size_t count(std::size_t x, std::size_t z) const { return counts[x * z_levels + z]; }
};

double entropy(std::span<const Label> labels);

/// H(Z | X).
double conditional_entropy(std::span<const Label> z, std::span<const Label> x);

/// MI(pred; target) = H(target) - H(target | pred).
double mutual_information(std::span<const Label> predicted, std::span<const Label> target);

/// Rank 1 for the largest value; ties keep the original order.
std::vector<std::size_t> rank_by_relevancy(std::span<const double> mi_values);

}  // namespace evifuse::infotheory
