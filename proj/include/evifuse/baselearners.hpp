#pragma once

// The classifier pool: built-in DT / Gaussian NB / LDA / kNN learners plus
// externally produced score files standing in for other methods.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evifuse/kernels.hpp"
#include "evifuse/matrix.hpp"
#include "evifuse/metrics.hpp"

namespace evifuse::learners {

inline constexpr double kRowSumTolerance = 1e-6;
/// Rows of an external score file may miss 1 by up to this much; they are
/// renormalized on load.
inline constexpr double kExternalRowTolerance = 1e-3;
inline constexpr std::size_t kCvFolds = 10;

/// Row-stochastic class-membership scores of one classifier.
struct ScoreMatrix {
  Matrix scores;
  std::string classifier_id;

  std::size_t rows() const noexcept { return scores.rows(); }
  std::size_t class_count() const noexcept { return scores.cols(); }

  /// Throws NonStochasticRow if any row is non-finite, outside [0,1] or does
  /// not sum to 1 within kRowSumTolerance.
  void validate() const;

  /// Argmax per row; ties go to the lower class index.
  LabelVector hard_labels() const;

  bool operator==(const ScoreMatrix&) const = default;
};

enum class LearnerKind { DecisionTree, GaussianNB, LDA, KNN, External };

struct LearnerConfig {
  LearnerKind kind = LearnerKind::DecisionTree;
  std::string name;
  std::size_t k = 0;                  ///< neighbors, KNN only
  std::filesystem::path scores_path;  ///< External only

  static LearnerConfig tree() { return {LearnerKind::DecisionTree, "DT", 0, {}}; }
  static LearnerConfig naive_bayes() { return {LearnerKind::GaussianNB, "NB", 0, {}}; }
  static LearnerConfig lda() { return {LearnerKind::LDA, "LDA", 0, {}}; }
  static LearnerConfig knn(std::size_t k) {
    return {LearnerKind::KNN, std::to_string(k) + "NN", k, {}};
  }
  static LearnerConfig external(std::string name, std::filesystem::path path) {
    return {LearnerKind::External, std::move(name), 0, std::move(path)};
  }
};

struct PoolSpec {
  std::vector<LearnerConfig> learners;

  /// DT, NB, LDA, 5NN, 10NN, 15NN.
  static PoolSpec builtin();
  /// The eleven-slot layout DT, NB, LDA, MCS, 5NN, 10NN, 15NN, SVD1, SVD5,
  /// SVM, NN with the non-built-in slots read from score files, given in
  /// that order.
  static PoolSpec eleven_slot(const std::vector<std::filesystem::path>& external_scores);
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};

struct ExternalScores {
  ScoreMatrix train;
  ScoreMatrix valid;
  ScoreMatrix test;
};

/// Parses a `split,row,score_0,...` file. Rows must be contiguous from 0
/// within each split and match the split sizes.
ExternalScores load_external_scores(const std::filesystem::path& path, const SplitSizes& sizes,
                                    std::size_t class_count = 2);

/// Per-feature standardization fitted on training rows.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  ///< 1 for zero-variance features

  static Standardizer fit(const Matrix& features);
  Matrix apply(const Matrix& features) const;
};

/// A fitted built-in model.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::size_t feature_count() const = 0;
  /// n x K posterior-like scores for already-checked features.
  virtual Matrix scores(const Matrix& features) const = 0;
};

std::unique_ptr<Model> fit_model(const LearnerConfig& config, const Matrix& features,
                                 std::span<const Label> labels, std::size_t class_count,
                                 kernels::Execution exec = kernels::Execution::Parallel);

struct TrainedClassifier {
  LearnerConfig config;
  std::size_t class_count = 2;
  std::shared_ptr<const Model> model;       ///< null for External
  std::optional<ExternalScores> external;   ///< External only
  ScoreMatrix cv_scores;                    ///< out-of-fold scores on the training split
  metrics::ConfusionMatrix cv_confusion;    ///< from cv_scores

  const std::string& name() const noexcept { return config.name; }
  bool is_external() const noexcept { return config.kind == LearnerKind::External; }
};

struct FitOptions {
  std::uint64_t seed = 0;
  kernels::Execution execution = kernels::Execution::Parallel;
  /// Needed to load External slots.
  std::optional<SplitSizes> split_sizes;
};

/// Fits each built-in learner on the full training split and fills the
/// out-of-fold scores from stratified 10-fold cross-validation. External
/// slots are loaded from their score files.
std::vector<TrainedClassifier> fit(const PoolSpec& pool, const Matrix& train_features,
                                   std::span<const Label> train_labels, std::size_t class_count,
                                   const FitOptions& options);

/// Throws WidthMismatch, or ExternalScoresMissing for External slots (their
/// scores exist only for the splits in the score file).
ScoreMatrix predict_scores(const TrainedClassifier& classifier, const Matrix& features);

/// Stratified fold assignment (fold index per sample).
std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t folds,
                                          std::uint64_t seed);

}  // namespace evifuse::learners
