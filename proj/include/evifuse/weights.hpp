#pragma once

// Per-class weighting factors derived from a classifier's confusion matrix.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evifuse/metrics.hpp"

namespace evifuse::weights {

enum class Scheme {
  W0,  ///< unweighted
  W1,  ///< [Acc, Acc]
  W2,  ///< [Sns, Spc]
  W3,  ///< [PPV, NPV]
  W4,  ///< W2 (+) W3
  W5,  ///< W1 (+) W2
};

inline constexpr std::array<Scheme, 6> kAllSchemes = {Scheme::W0, Scheme::W1, Scheme::W2,
                                                      Scheme::W3, Scheme::W4, Scheme::W5};

std::string_view to_string(Scheme scheme) noexcept;
std::optional<Scheme> parse_scheme(std::string_view name);
inline int index_of(Scheme scheme) noexcept { return static_cast<int>(scheme); }

/// Smallest weight entry; zero rates are lifted to this floor.
inline constexpr double kWeightFloor = 1e-6;

struct WeightVector {
  std::vector<double> values;
  Scheme scheme = Scheme::W0;

  bool operator==(const WeightVector&) const = default;
};

/// Confusion-matrix rates with undefined entries already replaced by 1.
struct Rates {
  double accuracy = 1.0;
  double sensitivity = 1.0;
  double specificity = 1.0;
  double ppv = 1.0;
  double npv = 1.0;

  static Rates from(const metrics::ConfusionMatrix& cm);
};

WeightVector build_weight(const metrics::ConfusionMatrix& cm, Scheme scheme);
WeightVector build_weight(const Rates& rates, Scheme scheme);

/// Normalizes both vectors to singleton-only mass functions, fuses them with
/// Dempster's rule and returns the fused masses. The result carries a.scheme.
WeightVector dempster_weight_combine(const WeightVector& a, const WeightVector& b);

}  // namespace evifuse::weights
