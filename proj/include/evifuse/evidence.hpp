#pragma once

// Dempster-Shafer algebra on mass functions that place mass only on the
// singleton hypotheses and on the whole frame (ignorance).

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace evifuse::evidence {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kTotalConflictThreshold = 1.0 - 1e-12;
/// combine_pair reports TotalConflict when the non-conflicting mass is at or below this.
inline constexpr double kMinNormalizer = 1.0 - kTotalConflictThreshold;

/// Mass function over {theta_1..theta_K} plus the full frame.
struct Bba {
  std::vector<double> singletons;  ///< m(theta_k)
  double ignorance = 0.0;          ///< m(Theta)

  std::size_t class_count() const noexcept { return singletons.size(); }
  double total() const noexcept;

  static Bba vacuous(std::size_t class_count);
  static Bba certain(std::size_t class_count, std::size_t hypothesis);

  bool operator==(const Bba&) const = default;
};

/// Throws NegativeMass or MassSumViolation.
void validate(const Bba& b);

/// Mass landing on the empty set when b1 and b2 are conjunctively combined.
double conflict(const Bba& b1, const Bba& b2);

/// Dempster's rule. Throws TotalConflict when the conflict reaches 1.
Bba combine_pair(const Bba& b1, const Bba& b2);

/// Left fold of combine_pair. A TotalConflict carries the index of the
/// right-hand operand that failed.
Bba combine_sequence(std::span<const Bba> bbas);

/// In-place combination: (acc, acc_ignorance) is replaced by
/// acc (+) (other, other_ignorance). Returns false when the non-conflicting
/// mass is not above `min_normalizer`, leaving acc unspecified. The
/// normalizer is summed from products rather than taken as 1 - conflict, so
/// callers that need tiny normalizers may pass a smaller bound. No allocation.
bool combine_into(std::span<double> acc, double& acc_ignorance,
                  std::span<const double> other, double other_ignorance,
                  double min_normalizer = kMinNormalizer) noexcept;

/// Arbitrary mass function over the power set; focal sets are bitmasks.
struct GeneralBba {
  std::size_t class_count = 0;
  std::map<std::uint32_t, double> masses;

  static GeneralBba from(const Bba& b);
  std::uint32_t frame_mask() const noexcept {
    return static_cast<std::uint32_t>((1u << class_count) - 1u);
  }
};

inline constexpr std::size_t kOracleMaxClasses = 6;

/// Exact Dempster combination by enumerating all focal-set intersections.
/// Reference implementation for tests; K <= 6.
GeneralBba combine_powerset_oracle(std::span<const GeneralBba> bbas);

}  // namespace evifuse::evidence
