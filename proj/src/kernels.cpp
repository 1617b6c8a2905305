#include "evifuse/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "evifuse/evidence.hpp"

namespace evifuse::kernels {

namespace {

// Every proximity is strictly positive, so the Dempster normalizer of two
// member BBAs is too; it only vanishes once products underflow. The fast path
// therefore accepts any normal normalizer instead of the 1e-12 threshold.
constexpr double kMinFusedNormalizer = std::numeric_limits<double>::min();

double log_add_exp(double a, double b) noexcept {
  const double hi = std::max(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

// -(squared distance) per class, i.e. the log of the proximity row.
void log_proximity_row(ProximityMode mode, std::span<const double> weighted_row,
                       std::span<const double> reference, std::span<double> out) noexcept {
  const std::size_t k_count = weighted_row.size();
  if (mode == ProximityMode::Elementwise) {
    for (std::size_t k = 0; k < k_count; ++k) {
      const double diff = reference[k] - weighted_row[k];
      out[k] = -diff * diff;
    }
    return;
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    double sq = 0.0;
    for (std::size_t j = 0; j < k_count; ++j) {
      const double diff = reference[k * k_count + j] - weighted_row[j];
      sq += diff * diff;
    }
    out[k] = -sq;
  }
}

// Pairwise folding underflows when members are nearly certain of different
// classes. For singleton-plus-frame BBAs the fold has a closed form in the
// commonalities: m(theta_k) ~ prod(d_ik + eps_i) - prod(eps_i), m(Theta) ~
// prod(eps_i), the per-member normalizers cancelling. Evaluated in logs it
// only fails on non-finite input.
bool fuse_sample_log(std::span<const MemberView> members, std::size_t s, std::size_t k_count,
                     ProximityMode mode, std::span<double> scratch, std::span<double> out_masses,
                     double& out_ignorance) noexcept {
  std::fill(out_masses.begin(), out_masses.end(), 0.0);
  double log_theta = 0.0;
  for (const auto& member : members) {
    log_proximity_row(mode, member.weighted_scores.subspan(s * k_count, k_count), member.reference,
                      scratch);
    const double log_eps = std::log(member.epsilon);
    for (std::size_t k = 0; k < k_count; ++k) out_masses[k] += log_add_exp(scratch[k], log_eps);
    log_theta += log_eps;
  }
  const double top = *std::max_element(out_masses.begin(), out_masses.end());
  if (!std::isfinite(top)) return false;
  out_ignorance = std::exp(log_theta - top);
  double total = out_ignorance;
  for (double& m : out_masses) {
    m = std::max(0.0, std::exp(m - top) - out_ignorance);
    total += m;
  }
  if (!(total > 0.0) || !std::isfinite(total)) return false;
  for (double& m : out_masses) m /= total;
  out_ignorance /= total;
  return true;
}

// Fuses one sample; `scratch` holds K doubles.
bool fuse_sample(std::span<const MemberView> members, std::size_t s, std::size_t k_count,
                 ProximityMode mode, std::span<double> scratch, std::span<double> out_masses,
                 double& out_ignorance) noexcept {
  bool first = true;
  for (const auto& member : members) {
    proximity_row(mode, member.weighted_scores.subspan(s * k_count, k_count), member.reference,
                  scratch);
    double denom = member.epsilon;
    for (double d : scratch) denom += d;
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      return fuse_sample_log(members, s, k_count, mode, scratch, out_masses, out_ignorance);
    }
    const double ignorance = member.epsilon / denom;
    for (double& d : scratch) d /= denom;

    if (first) {
      std::copy(scratch.begin(), scratch.end(), out_masses.begin());
      out_ignorance = ignorance;
      first = false;
    } else if (!evidence::combine_into(out_masses, out_ignorance, scratch, ignorance,
                                       kMinFusedNormalizer)) {
      return fuse_sample_log(members, s, k_count, mode, scratch, out_masses, out_ignorance);
    }
  }
  bool finite = std::isfinite(out_ignorance);
  for (double m : out_masses) finite = finite && std::isfinite(m);
  return finite || fuse_sample_log(members, s, k_count, mode, scratch, out_masses, out_ignorance);
}

void knn_row(const Matrix& train, std::span<const Label> labels, std::size_t class_count,
             std::span<const double> query, std::size_t k,
             std::vector<std::pair<double, std::size_t>>& neighbors, std::span<double> out) {
  neighbors.clear();
  for (std::size_t i = 0; i < train.rows(); ++i) {
    const auto x = train.row(i);
    double dist = 0.0;
    for (std::size_t f = 0; f < query.size(); ++f) {
      const double diff = x[f] - query[f];
      dist += diff * diff;
    }
    neighbors.emplace_back(dist, i);
  }
  const std::size_t kk = std::min(k, neighbors.size());
  std::partial_sort(neighbors.begin(), neighbors.begin() + static_cast<std::ptrdiff_t>(kk),
                    neighbors.end());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < kk; ++j) out[labels[neighbors[j].second]] += 1.0;
  for (std::size_t c = 0; c < class_count; ++c) out[c] /= static_cast<double>(kk);
}

}  // namespace

void proximity_row(ProximityMode mode, std::span<const double> weighted_row,
                   std::span<const double> reference, std::span<double> out) noexcept {
  log_proximity_row(mode, weighted_row, reference, out);
  for (double& d : out) d = std::exp(d);
}

std::size_t fuse_serial(std::span<const MemberView> members, std::size_t samples,
                        std::size_t class_count, ProximityMode mode, std::span<double> masses,
                        std::span<double> ignorance) {
  std::vector<double> scratch(class_count);
  for (std::size_t s = 0; s < samples; ++s) {
    if (!fuse_sample(members, s, class_count, mode, scratch,
                     masses.subspan(s * class_count, class_count), ignorance[s])) {
      return s;
    }
  }
  return kNoFailure;
}

std::size_t fuse_parallel(std::span<const MemberView> members, std::size_t samples,
                          std::size_t class_count, ProximityMode mode,
                          std::span<double> masses, std::span<double> ignorance) {
  std::size_t failure = kNoFailure;
  const auto n = static_cast<std::ptrdiff_t>(samples);
#pragma omp parallel reduction(min : failure)
  {
    std::vector<double> scratch(class_count);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      if (!fuse_sample(members, s, class_count, mode, scratch,
                       masses.subspan(s * class_count, class_count), ignorance[s])) {
        failure = std::min(failure, s);
      }
    }
  }
  return failure;
}

Matrix knn_scores_serial(const Matrix& train, std::span<const Label> labels,
                         std::size_t class_count, const Matrix& queries, std::size_t k) {
  Matrix out(queries.rows(), class_count);
  std::vector<std::pair<double, std::size_t>> neighbors;
  neighbors.reserve(train.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    knn_row(train, labels, class_count, queries.row(q), k, neighbors, out.row(q));
  }
  return out;
}

Matrix knn_scores_parallel(const Matrix& train, std::span<const Label> labels,
                           std::size_t class_count, const Matrix& queries, std::size_t k) {
  Matrix out(queries.rows(), class_count);
  const auto n = static_cast<std::ptrdiff_t>(queries.rows());
#pragma omp parallel
  {
    std::vector<std::pair<double, std::size_t>> neighbors;
    neighbors.reserve(train.rows());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto q = static_cast<std::size_t>(i);
      knn_row(train, labels, class_count, queries.row(q), k, neighbors, out.row(q));
    }
  }
  return out;
}

}  // namespace evifuse::kernels
