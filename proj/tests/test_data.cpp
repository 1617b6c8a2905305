#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "evifuse/data.hpp"
#include "evifuse/error.hpp"
#include "synthetic.hpp"

using namespace evifuse;
using namespace evifuse::data;

namespace {

std::filesystem::path temp_csv(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "evifuse_data_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

LabelVector labels_with(std::size_t zeros, std::size_t ones) {
  LabelVector l;
  for (std::size_t i = 0; i < zeros + ones; ++i) l.push_back(i < zeros ? 0 : 1);
  return l;
}

std::size_t count_class(const SplitIndices& s, const std::vector<std::size_t>& part, const LabelVector& l,
                        Label c) {
  (void)s;
  return static_cast<std::size_t>(std::count_if(part.begin(), part.end(), [&](auto i) { return l[i] == c; }));
}

}  // namespace

TEST(LoadCsv, SmallFile) {
  const auto path = temp_csv("four.csv", "a,b,quality\n1,2,g\n3,4,g\n5,6,b\n7,8,b\n");
  const auto ds = load_csv(path, "quality", "g");
  EXPECT_EQ(ds.samples(), 4u);
  EXPECT_EQ(ds.feature_count(), 2u);
  EXPECT_EQ(ds.labels, (LabelVector{0, 0, 1, 1}));
  EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.features(2, 1), 6.0);
}

TEST(LoadCsv, LabelColumnAnywhere) {
  const auto path = temp_csv("mid.csv", "a,y,b\n1,b,2\n3,g,4\n");
  const auto ds = load_csv(path, "y", "g");
  EXPECT_EQ(ds.labels, (LabelVector{1, 0}));
  EXPECT_EQ(ds.features(1, 1), 4.0);
}

TEST(LoadCsv, FirstLabelIsPositiveByDefault) {
  const auto path = temp_csv("default.csv", "x,y\n1,b\n2,g\n3,b\n");
  EXPECT_EQ(load_csv(path, "y").labels, (LabelVector{0, 1, 0}));
}

TEST(LoadCsv, SingleClass) {
  const auto path = temp_csv("single.csv", "x,y\n1,g\n2,g\n");
  EXPECT_EQ(kind_of([&] { load_csv(path, "y", "g"); }), ErrorKind::SingleClass);
}

TEST(LoadCsv, BlankCellDropsRow) {
  const auto path = temp_csv("blank.csv", "x,z,y\n1,2,g\n3,,b\n5,6,b\n7,8,g\n");
  const auto ds = load_csv(path, "y", "g");
  EXPECT_EQ(ds.samples(), 3u);
  EXPECT_EQ(ds.rejected_rows, 1u);
  EXPECT_EQ(ds.features(1, 0), 5.0);
}

TEST(LoadCsv, MissingFileAndColumn) {
  EXPECT_EQ(kind_of([] { load_csv("/nonexistent/data.csv", "y"); }), ErrorKind::IoError);
  const auto path = temp_csv("nocol.csv", "x,y\n1,g\n2,b\n");
  EXPECT_EQ(kind_of([&] { load_csv(path, "label"); }), ErrorKind::ParseError);
}

TEST(ImbalanceRatio, Examples) {
  Dataset ds;
  ds.labels = labels_with(100, 100);
  EXPECT_DOUBLE_EQ(imbalance_ratio(ds), 1.0);
  ds.labels = labels_with(444, 239);
  EXPECT_NEAR(imbalance_ratio(ds), 1.86, 5e-3);
  ds.labels = labels_with(5, 10);
  EXPECT_DOUBLE_EQ(imbalance_ratio(ds), 2.0);
}

TEST(StratifiedSplit, ExactDivision) {
  const auto labels = labels_with(100, 100);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto s = stratified_split(labels, 2, {}, seed);
    for (Label c : {0u, 1u}) {
      EXPECT_EQ(count_class(s, s.train, labels, c), 50u);
      EXPECT_EQ(count_class(s, s.valid, labels, c), 25u);
      EXPECT_EQ(count_class(s, s.test, labels, c), 25u);
    }
  }
}

TEST(StratifiedSplit, Deterministic) {
  const auto labels = labels_with(37, 21);
  EXPECT_EQ(stratified_split(labels, 2, {}, 5), stratified_split(labels, 2, {}, 5));
  EXPECT_NE(stratified_split(labels, 2, {}, 5), stratified_split(labels, 2, {}, 6));
}

TEST(StratifiedSplit, MinorityRounding) {
  const auto labels = labels_with(7, 3);
  const auto s = stratified_split(labels, 2, {}, 3);
  EXPECT_EQ(count_class(s, s.train, labels, 1), 2u);
  EXPECT_EQ(count_class(s, s.valid, labels, 1), 0u);
  EXPECT_EQ(count_class(s, s.test, labels, 1), 1u);
  EXPECT_EQ(count_class(s, s.train, labels, 0), 4u);
  EXPECT_EQ(count_class(s, s.valid, labels, 0), 1u);
  EXPECT_EQ(count_class(s, s.test, labels, 0), 2u);
}

TEST(StratifiedSplit, EmptyClassIsTooSmall) {
  EXPECT_EQ(kind_of([] { stratified_split(labels_with(5, 0), 2, {}, 1); }), ErrorKind::ClassTooSmall);
}

TEST(StratifiedSplit, InvalidFractions) {
  EXPECT_EQ(kind_of([] { stratified_split(labels_with(5, 5), 2, {0.5, 0.5, 0.5}, 1); }),
            ErrorKind::InvalidFractions);
  EXPECT_EQ(kind_of([] { stratified_split(labels_with(5, 5), 2, {1.0, 0.0, 0.0}, 1); }),
            ErrorKind::InvalidFractions);
}

TEST(StratifiedSplit, PartitionAndProportions) {
  Rng rng(12);
  const std::vector<SplitFractions> configs{{0.5, 0.25, 0.25}, {0.6, 0.2, 0.2}, {0.34, 0.33, 0.33},
                                            {0.7, 0.1, 0.2}};
  for (int t = 0; t < 200; ++t) {
    const std::size_t n0 = 3 + rng.below(80);
    const std::size_t n1 = 3 + rng.below(80);
    LabelVector labels = labels_with(n0, n1);
    std::span<Label> view(labels);
    rng.shuffle(view);
    const auto& fr = configs[t % configs.size()];
    const auto s = stratified_split(labels, 2, fr, rng.next());
    std::vector<std::size_t> all;
    for (const auto* part : {&s.train, &s.valid, &s.test}) {
      EXPECT_TRUE(std::is_sorted(part->begin(), part->end()));
      all.insert(all.end(), part->begin(), part->end());
    }
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
    for (Label c : {0u, 1u}) {
      const double nc = static_cast<double>(c == 0 ? n0 : n1);
      EXPECT_LE(std::abs(static_cast<double>(count_class(s, s.train, labels, c)) - nc * fr.train), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(count_class(s, s.valid, labels, c)) - nc * fr.valid), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(count_class(s, s.test, labels, c)) - nc * fr.test), 1.0 + 1e-9);
    }
  }
}

TEST(AddNoise, ZeroRatioIsIdentity) {
  const auto ds = fixtures::two_gaussians(50, 1.0, 1.0, 4);
  const auto out = add_noise(ds, 0.0, 123);
  EXPECT_EQ(std::memcmp(out.features.data().data(), ds.features.data().data(),
                        ds.features.data().size() * sizeof(double)),
            0);
}

TEST(AddNoise, ZeroColumnUnchanged) {
  Dataset ds;
  ds.features = Matrix(10, 2, 0.0);
  for (std::size_t i = 0; i < 10; ++i) ds.features(i, 1) = static_cast<double>(i);
  ds.labels = labels_with(5, 5);
  const auto out = add_noise(ds, 0.5, 9);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(out.features(i, 0), 0.0);
}

TEST(AddNoise, StdFollowsRms) {
  const std::size_t n = 100000;
  Dataset ds;
  ds.features = Matrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) ds.features(i, 0) = i % 2 ? 4.0 : 3.0;
  ds.labels = labels_with(n / 2, n / 2);
  const double expected = 0.01 * std::sqrt(12.5);
  EXPECT_NEAR(column_rms(ds.features)[0], std::sqrt(12.5), 1e-12);
  EXPECT_NEAR(expected, 0.03536, 1e-5);
  const auto out = add_noise(ds, 0.01, 2);
  double mean = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += out.features(i, 0) - ds.features(i, 0);
  mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = out.features(i, 0) - ds.features(i, 0) - mean;
    sq += e * e;
  }
  const double sd = std::sqrt(sq / static_cast<double>(n - 1));
  EXPECT_LT(std::abs(sd - expected) / expected, 0.02);
}

TEST(AddNoise, RowsSubsetOnly) {
  const auto ds = fixtures::two_gaussians(20, 1.0, 1.0, 4);
  const std::vector<std::size_t> rows{2, 7};
  const auto out = add_noise(ds, 0.1, 5, std::span<const std::size_t>(rows));
  for (std::size_t i = 0; i < 20; ++i) {
    const bool polluted = i == 2 || i == 7;
    EXPECT_EQ(out.features(i, 0) != ds.features(i, 0), polluted);
  }
}

TEST(AddNoise, NegativeRatioRejected) {
  const auto ds = fixtures::two_gaussians(20, 1.0, 1.0, 4);
  EXPECT_EQ(kind_of([&] { add_noise(ds, -0.1, 1); }), ErrorKind::InvalidConfig);
}
