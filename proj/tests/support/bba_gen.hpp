#pragma once

#include <vector>

#include "evifuse/evidence.hpp"
#include "evifuse/random.hpp"

namespace evifuse::fixtures {

/// Restricted BBA with random masses; ignorance is kept away from 0 so that
/// random triples are rarely near total conflict.
inline evidence::Bba random_bba(Rng& rng, std::size_t k, double min_ignorance = 0.01) {
  std::vector<double> raw(k + 1);
  double sum = 0.0;
  for (auto& v : raw) {
    v = rng.uniform();
    sum += v;
  }
  evidence::Bba b;
  const double free = 1.0 - min_ignorance;
  for (std::size_t i = 0; i < k; ++i) b.singletons.push_back(free * raw[i] / sum);
  b.ignorance = min_ignorance + free * raw[k] / sum;
  return b;
}

}  // namespace evifuse::fixtures
