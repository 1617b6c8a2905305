#include "evifuse/evidence.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "evifuse/error.hpp"

namespace evifuse::evidence {

namespace {

void require_same_frame(const Bba& b1, const Bba& b2) {
  if (b1.class_count() != b2.class_count()) {
    throw Error(ErrorKind::FrameMismatch,
                "frames of size " + std::to_string(b1.class_count()) + " and " +
                    std::to_string(b2.class_count()));
  }
}

enum class CombineStatus { Ok, TotalConflict, Drift };

CombineStatus combine_raw(std::span<double> acc, double& acc_ignorance,
                          std::span<const double> other, double other_ignorance,
                          double min_normalizer) noexcept {
  // The normalizer is the non-conflicting mass, i.e. 1 - m12(empty).
  double normalizer = acc_ignorance * other_ignorance;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    const double joint = acc[k] * other[k] + acc[k] * other_ignorance +
                         acc_ignorance * other[k];
    acc[k] = joint;
    normalizer += joint;
  }
  if (!(normalizer > min_normalizer)) return CombineStatus::TotalConflict;

  double total = 0.0;
  for (double& m : acc) {
    m /= normalizer;
    total += m;
  }
  acc_ignorance = acc_ignorance * other_ignorance / normalizer;
  total += acc_ignorance;

  const double drift = std::abs(total - 1.0);
  if (drift > kMassTolerance) return CombineStatus::Drift;
  if (drift > 1e-12) {
    for (double& m : acc) m /= total;
    acc_ignorance /= total;
  }
  return CombineStatus::Ok;
}

}  // namespace

double Bba::total() const noexcept {
  return std::accumulate(singletons.begin(), singletons.end(), ignorance);
}

Bba Bba::vacuous(std::size_t class_count) {
  return Bba{std::vector<double>(class_count, 0.0), 1.0};
}

Bba Bba::certain(std::size_t class_count, std::size_t hypothesis) {
  Bba b{std::vector<double>(class_count, 0.0), 0.0};
  b.singletons.at(hypothesis) = 1.0;
  return b;
}

void validate(const Bba& b) {
  for (std::size_t k = 0; k < b.singletons.size(); ++k) {
    if (!(b.singletons[k] >= 0.0)) {
      throw Error(ErrorKind::NegativeMass,
                  "m(theta_" + std::to_string(k + 1) + ") = " + std::to_string(b.singletons[k]), k);
    }
  }
  if (!(b.ignorance >= 0.0)) {
    throw Error(ErrorKind::NegativeMass, "m(Theta) = " + std::to_string(b.ignorance));
  }
  const double total = b.total();
  if (!(std::abs(total - 1.0) <= kMassTolerance)) {
    throw Error(ErrorKind::MassSumViolation, "masses sum to " + std::to_string(total));
  }
}

double conflict(const Bba& b1, const Bba& b2) {
  require_same_frame(b1, b2);
  double total = 0.0;
  for (std::size_t j = 0; j < b1.class_count(); ++j) {
    for (std::size_t k = 0; k < b2.class_count(); ++k) {
      if (j != k) total += b1.singletons[j] * b2.singletons[k];
    }
  }
  return total;
}

bool combine_into(std::span<double> acc, double& acc_ignorance,
                  std::span<const double> other, double other_ignorance,
                  double min_normalizer) noexcept {
  return combine_raw(acc, acc_ignorance, other, other_ignorance, min_normalizer) == CombineStatus::Ok;
}

Bba combine_pair(const Bba& b1, const Bba& b2) {
  require_same_frame(b1, b2);
  Bba out = b1;
  switch (combine_raw(out.singletons, out.ignorance, b2.singletons, b2.ignorance,
                      kMinNormalizer)) {
    case CombineStatus::Ok:
      return out;
    case CombineStatus::TotalConflict:
      throw Error(ErrorKind::TotalConflict, "conflict " + std::to_string(conflict(b1, b2)));
    case CombineStatus::Drift:
      break;
  }
  throw std::logic_error("combine_pair: combined masses drifted beyond tolerance");
}

Bba combine_sequence(std::span<const Bba> bbas) {
  if (bbas.empty()) throw Error(ErrorKind::EmptyInput, "no BBAs to combine");
  Bba acc = bbas.front();
  for (std::size_t i = 1; i < bbas.size(); ++i) {
    try {
      acc = combine_pair(acc, bbas[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TotalConflict) throw;
      throw Error(ErrorKind::TotalConflict,
                  "total conflict combining BBA " + std::to_string(i), i);
    }
  }
  return acc;
}

GeneralBba GeneralBba::from(const Bba& b) {
  GeneralBba g;
  g.class_count = b.class_count();
  for (std::size_t k = 0; k < b.class_count(); ++k) {
    if (b.singletons[k] != 0.0) g.masses[1u << k] = b.singletons[k];
  }
  if (b.ignorance != 0.0) g.masses[g.frame_mask()] = b.ignorance;
  return g;
}

GeneralBba combine_powerset_oracle(std::span<const GeneralBba> bbas) {
  if (bbas.empty()) throw Error(ErrorKind::EmptyInput, "no BBAs to combine");
  const std::size_t k = bbas.front().class_count;
  if (k > kOracleMaxClasses) {
    throw Error(ErrorKind::FrameTooLarge, std::to_string(k) + " hypotheses");
  }
  for (const auto& b : bbas) {
    if (b.class_count != k) throw Error(ErrorKind::FrameMismatch, "oracle inputs");
  }

  std::vector<double> acc(std::size_t{1} << k, 0.0);
  for (const auto& [set, mass] : bbas.front().masses) acc[set] += mass;

  for (std::size_t i = 1; i < bbas.size(); ++i) {
    std::vector<double> next(acc.size(), 0.0);
    for (std::uint32_t a = 1; a < acc.size(); ++a) {
      if (acc[a] == 0.0) continue;
      for (const auto& [b, mass] : bbas[i].masses) next[a & b] += acc[a] * mass;
    }
    const double normalizer = 1.0 - next[0];
    if (!(normalizer > 1.0 - kTotalConflictThreshold)) {
      throw Error(ErrorKind::TotalConflict, "oracle combination", i);
    }
    next[0] = 0.0;
    for (double& m : next) m /= normalizer;
    acc = std::move(next);
  }

  GeneralBba out;
  out.class_count = k;
  for (std::uint32_t set = 1; set < acc.size(); ++set) {
    if (acc[set] != 0.0) out.masses[set] = acc[set];
  }
  return out;
}

}  // namespace evifuse::evidence
