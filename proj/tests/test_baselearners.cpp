#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "evifuse/baselearners.hpp"
#include "evifuse/error.hpp"
#include "synthetic.hpp"

using namespace evifuse;
using namespace evifuse::learners;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "evifuse_learner_tests";
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

Matrix column(std::initializer_list<double> values) {
  Matrix m;
  for (double v : values) m.append_row(std::vector<double>{v});
  return m;
}

const std::vector<LearnerConfig> kBuiltins{LearnerConfig::tree(), LearnerConfig::naive_bayes(),
                                           LearnerConfig::lda(), LearnerConfig::knn(1),
                                           LearnerConfig::knn(5)};

}  // namespace

TEST(Learners, OneNearestNeighborMemorizesTraining) {
  const auto ds = fixtures::two_gaussians(60, 0.5, 1.0, 8);
  const auto model = fit_model(LearnerConfig::knn(1), ds.features, ds.labels, 2);
  ScoreMatrix sm{model->scores(ds.features), "1NN"};
  EXPECT_DOUBLE_EQ(metrics::accuracy(sm.hard_labels(), ds.labels), 1.0);
}

TEST(Learners, ConstantLabelsPredictThatLabel) {
  auto ds = fixtures::two_gaussians(30, 1.0, 1.0, 2);
  LabelVector ones(ds.labels.size(), 1);
  const auto queries = fixtures::two_gaussians(20, 3.0, 2.0, 3).features;
  for (const auto& cfg : kBuiltins) {
    const auto model = fit_model(cfg, ds.features, ones, 2);
    ScoreMatrix sm{model->scores(queries), cfg.name};
    for (Label l : sm.hard_labels()) EXPECT_EQ(l, 1u) << cfg.name;
  }
}

TEST(Learners, TwoPointNearestNeighbor) {
  const auto model = fit_model(LearnerConfig::knn(1), column({0.0, 1.0}), LabelVector{0, 1}, 2);
  const auto s = model->scores(column({0.1}));
  EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s(0, 1), 0.0);
}

TEST(Learners, NaiveBayesSymmetricClasses) {
  const auto model = fit_model(LearnerConfig::naive_bayes(), column({0.5, 1.5, -0.5, -1.5}),
                               LabelVector{0, 0, 1, 1}, 2);
  const auto s = model->scores(column({0.0}));
  EXPECT_NEAR(s(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(s(0, 1), 0.5, 1e-12);
}

TEST(Learners, KnnClassFractions) {
  const auto train = column({0.1, 0.2, 0.3, 0.4, 0.5, 10.0, 11.0, 12.0});
  const LabelVector labels{0, 0, 0, 1, 1, 1, 1, 1};
  for (auto exec : {kernels::Execution::Serial, kernels::Execution::Parallel}) {
    const auto s = kernels::knn_scores(exec, train, labels, 2, column({0.0}), 5);
    EXPECT_DOUBLE_EQ(s(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(s(0, 1), 0.4);
  }
}

TEST(Learners, TreePureLeaf) {
  const auto train = column({0, 1, 2, 3, 4, 10, 11, 12, 13, 14});
  const LabelVector labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const auto model = fit_model(LearnerConfig::tree(), train, labels, 2);
  const auto s = model->scores(column({12.5}));
  EXPECT_DOUBLE_EQ(s(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(s(0, 1), 1.0);
}

TEST(Learners, ScoreRowsAreStochastic) {
  const auto ds = fixtures::two_gaussians(80, 0.7, 1.0, 13, 3);
  FitOptions opt;
  opt.seed = 4;
  const auto pool = fit(PoolSpec::builtin(), ds.features, ds.labels, 2, opt);
  ASSERT_EQ(pool.size(), 6u);
  for (const auto& c : pool) {
    EXPECT_NO_THROW(c.cv_scores.validate());
    EXPECT_NO_THROW(predict_scores(c, ds.features).validate());
    EXPECT_EQ(c.cv_confusion.total(), ds.labels.size());
  }
}

TEST(Learners, FitIsDeterministic) {
  const auto ds = fixtures::two_gaussians(80, 0.7, 1.0, 13, 3);
  FitOptions opt;
  opt.seed = 21;
  const auto a = fit(PoolSpec::builtin(), ds.features, ds.labels, 2, opt);
  const auto b = fit(PoolSpec::builtin(), ds.features, ds.labels, 2, opt);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].cv_scores, b[i].cv_scores);
    EXPECT_EQ(predict_scores(a[i], ds.features), predict_scores(b[i], ds.features));
  }
}

TEST(Learners, SerialAndParallelPoolsAgree) {
  const auto ds = fixtures::two_gaussians(120, 0.7, 1.0, 5, 4);
  FitOptions serial;
  serial.execution = kernels::Execution::Serial;
  FitOptions parallel;
  parallel.execution = kernels::Execution::Parallel;
  const auto a = fit(PoolSpec::builtin(), ds.features, ds.labels, 2, serial);
  const auto b = fit(PoolSpec::builtin(), ds.features, ds.labels, 2, parallel);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].cv_scores, b[i].cv_scores);
}

TEST(Learners, StandardizedModelsIgnoreAffineRescaling) {
  const auto ds = fixtures::two_gaussians(100, 0.6, 1.0, 31, 3);
  Matrix scaled = ds.features;
  for (std::size_t s = 0; s < scaled.rows(); ++s) scaled(s, 1) = 250.0 * scaled(s, 1) - 40.0;
  for (const auto& cfg : {LearnerConfig::naive_bayes(), LearnerConfig::lda()}) {
    const auto a = fit_model(cfg, ds.features, ds.labels, 2)->scores(ds.features);
    const auto b = fit_model(cfg, scaled, ds.labels, 2)->scores(scaled);
    for (std::size_t i = 0; i < a.data().size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-9) << cfg.name;
  }
}

TEST(Learners, TooFewSamples) {
  const auto ds = fixtures::two_gaussians(8, 1.0, 1.0, 1);
  EXPECT_EQ(kind_of([&] { fit(PoolSpec::builtin(), ds.features, ds.labels, 2, {}); }),
            ErrorKind::TooFewSamples);
}

TEST(Learners, WidthMismatch) {
  const auto ds = fixtures::two_gaussians(40, 1.0, 1.0, 1);
  const auto pool = fit(PoolSpec::builtin(), ds.features, ds.labels, 2, {});
  EXPECT_EQ(kind_of([&] { predict_scores(pool[0], column({1.0})); }), ErrorKind::WidthMismatch);
}

TEST(StratifiedFolds, BalancedAndDeterministic) {
  LabelVector labels;
  for (int i = 0; i < 47; ++i) labels.push_back(i % 3 == 0 ? 1 : 0);
  const auto folds = stratified_folds(labels, 10, 3);
  EXPECT_EQ(folds, stratified_folds(labels, 10, 3));
  std::vector<std::size_t> per_fold(10, 0);
  for (auto f : folds) ++per_fold[f];
  for (auto c : per_fold) {
    EXPECT_GE(c, 4u);
    EXPECT_LE(c, 6u);
  }
}

TEST(ExternalScores, WellFormedFile) {
  const auto path = temp_file("svm.csv",
                              "split,row,score_0,score_1\n"
                              "train,0,0.9,0.1\ntrain,1,0.2,0.8\n"
                              "valid,0,0.6,0.4\n"
                              "test,0,0.69999,0.30002\n");
  const auto ext = load_external_scores(path, {2, 1, 1});
  EXPECT_EQ(ext.train.rows(), 2u);
  EXPECT_EQ(ext.valid.rows(), 1u);
  EXPECT_EQ(ext.test.rows(), 1u);
  EXPECT_NEAR(ext.test.scores(0, 0) + ext.test.scores(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(ext.test.scores(0, 0), 0.69999 / 1.00001, 1e-15);
}

TEST(ExternalScores, BadFiles) {
  const auto bad_row = temp_file("bad_row.csv", "split,row,score_0,score_1\ntrain,0,0.7,0.7\n");
  EXPECT_EQ(kind_of([&] { load_external_scores(bad_row, {1, 0, 0}); }), ErrorKind::NonStochasticRow);
  const auto short_file = temp_file("short.csv", "split,row,score_0,score_1\ntrain,0,0.5,0.5\n");
  EXPECT_EQ(kind_of([&] { load_external_scores(short_file, {2, 0, 0}); }), ErrorKind::RowCountMismatch);
  EXPECT_EQ(kind_of([&] { load_external_scores("/nonexistent/x.csv", {1, 0, 0}); }),
            ErrorKind::ExternalScoresMissing);
}

TEST(ExternalScores, PoolSlotHasNoFeaturePrediction) {
  const auto ds = fixtures::two_gaussians(20, 1.0, 1.0, 1);
  std::string body = "split,row,score_0,score_1\n";
  for (std::size_t i = 0; i < 20; ++i) body += "train," + std::to_string(i) + ",0.5,0.5\n";
  const auto path = temp_file("ext.csv", body);
  PoolSpec spec{{LearnerConfig::external("EXT", path)}};
  FitOptions opt;
  opt.split_sizes = SplitSizes{20, 0, 0};
  const auto pool = fit(spec, ds.features, ds.labels, 2, opt);
  ASSERT_EQ(pool.size(), 1u);
  EXPECT_TRUE(pool[0].is_external());
  EXPECT_EQ(pool[0].cv_scores.rows(), 20u);
  EXPECT_EQ(kind_of([&] { predict_scores(pool[0], ds.features); }), ErrorKind::ExternalScoresMissing);
}
