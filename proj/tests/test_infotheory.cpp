#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "evifuse/infotheory.hpp"
#include "evifuse/random.hpp"

using namespace evifuse;
namespace it = evifuse::infotheory;

namespace {

// Direct plug-in entropies from counts, independent of the library.
double h_of(const std::map<std::pair<Label, Label>, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [key, c] : counts) {
    const double p = c / n;
    h -= p * std::log2(p);
  }
  return h;
}

double joint_entropy(const LabelVector& x, const LabelVector& z) {
  std::map<std::pair<Label, Label>, double> c;
  for (std::size_t i = 0; i < x.size(); ++i) c[{x[i], z[i]}] += 1.0;
  return h_of(c, static_cast<double>(x.size()));
}

double marginal_entropy(const LabelVector& x) {
  std::map<std::pair<Label, Label>, double> c;
  for (Label v : x) c[{v, 0}] += 1.0;
  return h_of(c, static_cast<double>(x.size()));
}

LabelVector random_labels(Rng& rng, std::size_t n, std::size_t levels) {
  LabelVector v(n);
  for (auto& x : v) x = static_cast<Label>(rng.below(levels));
  return v;
}

}  // namespace

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(it::entropy(LabelVector{0, 0, 0, 0}), 0.0);
  EXPECT_NEAR(it::entropy(LabelVector{0, 0, 1, 1}), 1.0, 1e-15);
  EXPECT_NEAR(it::entropy(LabelVector{0, 0, 0, 1}), -0.75 * std::log2(0.75) - 0.25 * std::log2(0.25), 1e-15);
  EXPECT_NEAR(it::entropy(LabelVector{0, 0, 0, 1}), 0.8113, 1e-4);
}

TEST(ConditionalEntropy, Examples) {
  const LabelVector z{0, 0, 1, 1};
  EXPECT_NEAR(it::conditional_entropy(z, z), 0.0, 1e-15);
  EXPECT_NEAR(it::conditional_entropy(z, LabelVector{0, 0, 0, 0}), 1.0, 1e-15);
  EXPECT_NEAR(it::conditional_entropy(z, LabelVector{0, 1, 0, 1}), 1.0, 1e-15);
}

TEST(MutualInformation, Examples) {
  const LabelVector target{0, 0, 1, 1};
  EXPECT_NEAR(it::mutual_information(target, target), it::entropy(target), 1e-15);
  EXPECT_NEAR(it::mutual_information(LabelVector{1, 1, 1, 1}, target), 0.0, 1e-15);
  const LabelVector pred{0, 0, 0, 1};
  const double expected = 1.0 - (joint_entropy(pred, target) - marginal_entropy(pred));
  EXPECT_NEAR(it::mutual_information(pred, target), expected, 1e-12);
  EXPECT_NEAR(it::mutual_information(pred, target), 0.3113, 1e-4);
}

TEST(MutualInformation, RandomizedIdentities) {
  Rng rng(99);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(60);
    const std::size_t kx = 2 + rng.below(3);
    const std::size_t kz = 2 + rng.below(3);
    const auto x = random_labels(rng, n, kx);
    const auto z = random_labels(rng, n, kz);
    const double mi = it::mutual_information(x, z);
    const double hx = marginal_entropy(x);
    const double hz = marginal_entropy(z);
    EXPECT_NEAR(mi, it::mutual_information(z, x), 1e-12);
    EXPECT_NEAR(mi, hx + hz - joint_entropy(x, z), 1e-12);
    EXPECT_GE(mi, -1e-12);
    EXPECT_LE(mi, std::min(hx, hz) + 1e-12);

    std::vector<Label> perm(kx);
    std::iota(perm.begin(), perm.end(), 0);
    std::span<Label> ps(perm);
    rng.shuffle(ps);
    LabelVector relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = perm[x[i]];
    EXPECT_NEAR(it::mutual_information(relabeled, z), mi, 1e-12);
  }
}

TEST(RankByRelevancy, TableExample) {
  const std::vector<double> mi{0.44, 0.28, 0.53, 0.22, 0.52, 0.48, 0.48, 0.25, 0.45, 0.56, 0.65};
  EXPECT_EQ(it::rank_by_relevancy(mi), (std::vector<std::size_t>{8, 9, 3, 11, 4, 5, 6, 10, 7, 2, 1}));
}

TEST(RankByRelevancy, SmallCases) {
  EXPECT_EQ(it::rank_by_relevancy(std::vector<double>{0.5}), (std::vector<std::size_t>{1}));
  EXPECT_EQ(it::rank_by_relevancy(std::vector<double>{0.2, 0.2}), (std::vector<std::size_t>{1, 2}));
}

TEST(RankByRelevancy, IsPermutation) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> mi(1 + rng.below(20));
    for (auto& v : mi) v = static_cast<double>(rng.below(5)) / 10.0;
    auto ranks = it::rank_by_relevancy(mi);
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < ranks.size(); ++i) EXPECT_EQ(ranks[i], i + 1);
  }
}
