#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; both compute each output row with the same arithmetic so
// their results are bit-identical.

#include <cstddef>
#include <limits>
#include <span>

#include "evifuse/matrix.hpp"
#include "evifuse/metrics.hpp"

namespace evifuse::kernels {

enum class Execution { Serial, Parallel };

enum class ProximityMode {
  /// d[s,k] = exp(-(r_k - w_k * y[s,k])^2)
  Elementwise,
  /// d[s,k] = exp(-||r^(k) - w (.) y[s,:]||^2), one reference row per class
  RowNorm,
};

/// Reference length for a member: K (elementwise) or K*K (row-norm).
constexpr std::size_t reference_size(ProximityMode mode, std::size_t class_count) noexcept {
  return mode == ProximityMode::Elementwise ? class_count : class_count * class_count;
}

/// One ensemble member as seen by the fusion kernel.
struct MemberView {
  std::span<const double> weighted_scores;  ///< n x K, row-major, w_k * y[s,k]
  std::span<const double> reference;
  double epsilon = 0.0;
};

inline constexpr std::size_t kNoFailure = std::numeric_limits<std::size_t>::max();

/// Distance row for one sample of one member.
void proximity_row(ProximityMode mode, std::span<const double> weighted_row,
                   std::span<const double> reference, std::span<double> out) noexcept;

/// Builds every member's BBA per sample and folds them with Dempster's rule.
/// `masses` is n x K, `ignorance` has n entries. Samples whose pairwise fold
/// underflows are redone in the log domain. Returns the lowest sample index
/// whose fusion still has no finite result (non-finite inputs), or
/// kNoFailure.
std::size_t fuse_serial(std::span<const MemberView> members, std::size_t samples,
                        std::size_t class_count, ProximityMode mode, std::span<double> masses,
                        std::span<double> ignorance);
std::size_t fuse_parallel(std::span<const MemberView> members, std::size_t samples,
                          std::size_t class_count, ProximityMode mode,
                          std::span<double> masses, std::span<double> ignorance);

inline std::size_t fuse(Execution exec, std::span<const MemberView> members, std::size_t samples,
                        std::size_t class_count, ProximityMode mode, std::span<double> masses,
                        std::span<double> ignorance) {
  return exec == Execution::Serial
             ? fuse_serial(members, samples, class_count, mode, masses, ignorance)
             : fuse_parallel(members, samples, class_count, mode, masses, ignorance);
}

/// Neighbor class fractions for each query row. Distance ties are broken by
/// the lower training index. k is clamped to the training size.
Matrix knn_scores_serial(const Matrix& train, std::span<const Label> labels,
                         std::size_t class_count, const Matrix& queries, std::size_t k);
Matrix knn_scores_parallel(const Matrix& train, std::span<const Label> labels,
                           std::size_t class_count, const Matrix& queries, std::size_t k);

inline Matrix knn_scores(Execution exec, const Matrix& train, std::span<const Label> labels,
                         std::size_t class_count, const Matrix& queries, std::size_t k) {
  return exec == Execution::Serial ? knn_scores_serial(train, labels, class_count, queries, k)
                                   : knn_scores_parallel(train, labels, class_count, queries, k);
}

}  // namespace evifuse::kernels
