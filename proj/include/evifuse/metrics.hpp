#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evifuse {

using Label = std::uint32_t;
using LabelVector = std::vector<Label>;

/// Class 0 is the positive ("Good") class unless stated otherwise.
inline constexpr Label kPositiveClass = 0;

}  // namespace evifuse

namespace evifuse::metrics {

/// Binary confusion matrix; rows are the predicted condition.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> truth,
                          Label positive_class = kPositiveClass);

// Each rate throws UndefinedRate when its denominator is zero.
double accuracy(const ConfusionMatrix& cm);
double sensitivity(const ConfusionMatrix& cm);
double specificity(const ConfusionMatrix& cm);
double ppv(const ConfusionMatrix& cm);
double npv(const ConfusionMatrix& cm);

/// Fraction of matching labels; works for any number of classes.
double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

}  // namespace evifuse::metrics
