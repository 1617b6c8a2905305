#include "evifuse/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evifuse/error.hpp"

namespace evifuse::infotheory {

namespace {

void require_nonempty(std::span<const Label> labels) {
  if (labels.empty()) throw Error(ErrorKind::EmptyInput, "empty label vector");
}

void require_pair(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " labels");
  }
  require_nonempty(a);
}

std::size_t levels(std::span<const Label> labels) {
  return labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

double entropy_of_counts(std::span<const std::size_t> counts, double total) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

JointDistribution JointDistribution::from(std::span<const Label> x, std::span<const Label> z) {
  require_pair(x, z);
  JointDistribution joint;
  joint.x_levels = levels(x);
  joint.z_levels = levels(z);
  joint.counts.assign(joint.x_levels * joint.z_levels, 0);
  for (std::size_t i = 0; i < x.size(); ++i) ++joint.counts[x[i] * joint.z_levels + z[i]];
  joint.total = x.size();
  return joint;
}

double entropy(std::span<const Label> labels) {
  require_nonempty(labels);
  std::vector<std::size_t> counts(levels(labels), 0);
  for (Label l : labels) ++counts[l];
  return entropy_of_counts(counts, static_cast<double>(labels.size()));
}

double conditional_entropy(std::span<const Label> z, std::span<const Label> x) {
  const auto joint = JointDistribution::from(x, z);
  const double total = static_cast<double>(joint.total);
  double h = 0.0;
  for (std::size_t i = 0; i < joint.x_levels; ++i) {
    std::size_t x_count = 0;
    for (std::size_t j = 0; j < joint.z_levels; ++j) x_count += joint.count(i, j);
    if (x_count == 0) continue;
    for (std::size_t j = 0; j < joint.z_levels; ++j) {
      const std::size_t c = joint.count(i, j);
      if (c == 0) continue;
      const double p_joint = static_cast<double>(c) / total;
      const double p_cond = static_cast<double>(c) / static_cast<double>(x_count);
      h -= p_joint * std::log2(p_cond);
    }
  }
  return h;
}

double mutual_information(std::span<const Label> predicted, std::span<const Label> target) {
  require_pair(predicted, target);
  return entropy(target) - conditional_entropy(target, predicted);
}

std::vector<std::size_t> rank_by_relevancy(std::span<const double> mi_values) {
  std::vector<std::size_t> order(mi_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mi_values[a] > mi_values[b]; });
  std::vector<std::size_t> ranks(mi_values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

}  // namespace evifuse::infotheory
