#include "evifuse/weights.hpp"

#include <algorithm>
#include <numeric>

#include "evifuse/error.hpp"
#include "evifuse/evidence.hpp"

namespace evifuse::weights {

namespace {

double rate_or_one(double (*rate)(const metrics::ConfusionMatrix&),
                   const metrics::ConfusionMatrix& cm) {
  try {
    return rate(cm);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UndefinedRate) throw;
    return 1.0;
  }
}

WeightVector make(Scheme scheme, double first, double second) {
  return WeightVector{{std::max(first, kWeightFloor), std::max(second, kWeightFloor)}, scheme};
}

evidence::Bba as_singleton_bba(const WeightVector& w) {
  const double total = std::accumulate(w.values.begin(), w.values.end(), 0.0);
  evidence::Bba b{w.values, 0.0};
  for (double& m : b.singletons) m /= total;
  return b;
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::W0: return "w0";
    case Scheme::W1: return "w1";
    case Scheme::W2: return "w2";
    case Scheme::W3: return "w3";
    case Scheme::W4: return "w4";
    case Scheme::W5: return "w5";
  }
  return "w?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (name == to_string(s)) return s;
  }
  if (name.size() == 2 && (name[0] == 'W') && name[1] >= '0' && name[1] <= '5') {
    return kAllSchemes[static_cast<std::size_t>(name[1] - '0')];
  }
  return std::nullopt;
}

Rates Rates::from(const metrics::ConfusionMatrix& cm) {
  return Rates{rate_or_one(&metrics::accuracy, cm), rate_or_one(&metrics::sensitivity, cm),
               rate_or_one(&metrics::specificity, cm), rate_or_one(&metrics::ppv, cm),
               rate_or_one(&metrics::npv, cm)};
}

WeightVector build_weight(const metrics::ConfusionMatrix& cm, Scheme scheme) {
  return build_weight(Rates::from(cm), scheme);
}

WeightVector build_weight(const Rates& r, Scheme scheme) {
  switch (scheme) {
    case Scheme::W0: return make(scheme, 1.0, 1.0);
    case Scheme::W1: return make(scheme, r.accuracy, r.accuracy);
    case Scheme::W2: return make(scheme, r.sensitivity, r.specificity);
    case Scheme::W3: return make(scheme, r.ppv, r.npv);
    case Scheme::W4: {
      auto w = dempster_weight_combine(build_weight(r, Scheme::W2), build_weight(r, Scheme::W3));
      w.scheme = scheme;
      return w;
    }
    case Scheme::W5: {
      auto w = dempster_weight_combine(build_weight(r, Scheme::W1), build_weight(r, Scheme::W2));
      w.scheme = scheme;
      return w;
    }
  }
  throw Error(ErrorKind::InvalidConfig, "unknown weighting scheme");
}

WeightVector dempster_weight_combine(const WeightVector& a, const WeightVector& b) {
  if (a.values.size() != b.values.size() || a.values.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "weight vectors of different length");
  }
  const auto fused = evidence::combine_pair(as_singleton_bba(a), as_singleton_bba(b));
  return WeightVector{fused.singletons, a.scheme};
}

}  // namespace evifuse::weights
