#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evifuse/matrix.hpp"
#include "evifuse/metrics.hpp"

namespace evifuse::data {

struct Dataset {
  std::string name;
  std::vector<std::string> feature_names;
  Matrix features;  ///< n_s x n_f
  LabelVector labels;
  std::size_t class_count = 2;
  std::size_t rejected_rows = 0;  ///< rows dropped on load (blank or non-numeric)

  std::size_t samples() const noexcept { return features.rows(); }
  std::size_t feature_count() const noexcept { return features.cols(); }
  Dataset subset(std::span<const std::size_t> rows) const;

  bool operator==(const Dataset&) const = default;
};

/// Reads a headered CSV. The label column is mapped to class 0 when it
/// equals `positive_label` and class 1 otherwise; when no positive label is
/// given the first label value seen is positive. Rows with a blank or
/// non-numeric feature cell are dropped and counted.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 std::optional<std::string> positive_label = std::nullopt);

/// Majority class count over minority class count.
double imbalance_ratio(const Dataset& ds);

struct SplitFractions {
  double train = 0.5;
  double valid = 0.25;
  double test = 0.25;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;

  bool operator==(const SplitIndices&) const = default;
};

/// Per class: floor(n * valid) validation samples, ceil(n * train) training
/// samples and the remainder for test. Indices within each split are sorted.
SplitIndices stratified_split(std::span<const Label> labels, std::size_t class_count,
                              const SplitFractions& fractions, std::uint64_t seed);
SplitIndices stratified_split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed);

/// Adds N(0, (nsr * rms_f)^2) noise to every feature column f, where rms_f
/// is taken over the whole column before pollution. When `rows` is given
/// only those rows are polluted.
Dataset add_noise(const Dataset& ds, double nsr, std::uint64_t seed,
                  std::optional<std::span<const std::size_t>> rows = std::nullopt);

/// Root-mean-square of each feature column.
std::vector<double> column_rms(const Matrix& features);

}  // namespace evifuse::data
