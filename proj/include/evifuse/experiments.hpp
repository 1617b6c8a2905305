#pragma once

// End-to-end runs: split, fit the pool, rank by relevancy, select the
// ensemble, train the fusion and evaluate on the test split; plus repeated
// runs over noise levels with boxplot summaries.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evifuse/baselearners.hpp"
#include "evifuse/data.hpp"
#include "evifuse/fusion.hpp"
#include "evifuse/stats.hpp"
#include "evifuse/weights.hpp"

namespace evifuse::experiments {

enum class Pollution { AllSplits, TestOnly };

struct ExperimentConfig {
  std::filesystem::path data;
  std::string label_column = "label";
  std::optional<std::string> positive_label;
  data::SplitFractions fractions;
  learners::PoolSpec pool = learners::PoolSpec::builtin();
  std::vector<weights::Scheme> schemes{weights::kAllSchemes.begin(), weights::kAllSchemes.end()};
  std::vector<double> noise_levels{0.0};
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  Pollution pollution = Pollution::AllSplits;
  /// Also fit every scheme at every candidate ensemble size (6x the cost).
  bool scheme_table_all_sizes = false;
  fusion::FusionOptions fusion;

  /// Throws InvalidConfig / InvalidFractions.
  void validate() const;
};

struct ClassifierRow {
  std::string name;
  double train_accuracy = 0.0;  ///< resubstitution on the training split
  double cv_accuracy = 0.0;     ///< out-of-fold on the training split
  double valid_accuracy = 0.0;
  double test_accuracy = 0.0;
  double mutual_information = 0.0;  ///< bits, validation split
  std::size_t rank = 0;
  metrics::ConfusionMatrix cv_confusion;

  bool operator==(const ClassifierRow&) const = default;
};

struct SelectionRow {
  std::size_t size = 0;
  std::vector<std::string> members;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;
  double mean_accuracy = 0.0;

  bool operator==(const SelectionRow&) const = default;
};

struct SchemeRow {
  std::size_t size = 0;
  std::string scheme;
  double objective = 0.0;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;
  double test_accuracy = 0.0;

  bool operator==(const SchemeRow&) const = default;
};

struct RunReport {
  std::string dataset;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::size_t train_size = 0;
  std::size_t valid_size = 0;
  std::size_t test_size = 0;
  double imbalance_ratio = 1.0;

  std::vector<ClassifierRow> classifiers;
  std::vector<SelectionRow> selection;
  std::size_t selected_size = 0;
  std::string selection_rule;     ///< cascade rule that decided the size
  std::string tie_break_cascade;  ///< cascade order, for auditing
  std::vector<std::string> ensemble;
  std::vector<SchemeRow> schemes;  ///< at the selected size
  std::vector<SchemeRow> scheme_table;  ///< every size, when requested

  std::string bim;
  double bim_test_accuracy = 0.0;
  std::string bem_scheme;
  double bem_valid_accuracy = 0.0;
  double bem_test_accuracy = 0.0;
  double majority_vote_test_accuracy = 0.0;

  LabelVector test_labels;
  LabelVector bem_test_predictions;
  fusion::FusionModel model;

  bool operator==(const RunReport&) const = default;
};

struct RepetitionRecord {
  double noise = 0.0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::string bim;
  std::string bem_scheme;
  std::size_t ensemble_size = 0;
  double bim_test_accuracy = 0.0;
  double bem_test_accuracy = 0.0;
  double majority_vote_test_accuracy = 0.0;
  std::vector<double> scheme_test_accuracy;  ///< aligned with SweepReport::schemes

  bool operator==(const RepetitionRecord&) const = default;
};

struct MethodSummary {
  std::string method;
  stats::BoxStats stats;

  bool operator==(const MethodSummary&) const = default;
};

struct NoiseSummary {
  double noise = 0.0;
  std::size_t failures = 0;
  std::vector<MethodSummary> methods;

  bool operator==(const NoiseSummary&) const = default;
};

struct SweepReport {
  std::string dataset;
  std::uint64_t master_seed = 0;
  std::size_t repetitions = 0;
  std::vector<std::string> schemes;
  std::vector<RepetitionRecord> runs;
  std::vector<NoiseSummary> summaries;

  bool operator==(const SweepReport&) const = default;
};

/// Intermediate products of the first pipeline stages, shared by the CLI
/// verbs that stop early.
struct PoolStage {
  data::Dataset dataset;  ///< after pollution
  data::SplitIndices split;
  LabelVector train_labels;
  LabelVector valid_labels;
  LabelVector test_labels;
  std::vector<learners::TrainedClassifier> pool;
  fusion::EnsembleScores scores;               ///< train (out-of-fold) and validation
  std::vector<learners::ScoreMatrix> test_scores;
  std::vector<ClassifierRow> rows;             ///< accuracies, MI and ranks
  std::vector<std::size_t> ranks;
};

/// Seeds consumed by one pipeline run.
struct StageSeeds {
  std::uint64_t split;
  std::uint64_t noise;
  std::uint64_t fit;
  std::uint64_t fusion;

  static StageSeeds from(std::uint64_t seed);
};

PoolStage build_pool(const data::Dataset& dataset, const ExperimentConfig& cfg, std::uint64_t seed,
                     double noise = 0.0);

/// Seed for (noise level, repetition) of a sweep.
std::uint64_t child_seed(std::uint64_t master_seed, std::size_t level, std::size_t repetition,
                         std::size_t repetitions);

/// Majority vote of the members' hard labels, ties to the lower class.
LabelVector majority_vote(std::span<const learners::ScoreMatrix> member_scores);

RunReport run_pipeline(const data::Dataset& dataset, const ExperimentConfig& cfg, std::uint64_t seed,
                       double noise = 0.0);

/// Repetitions run in parallel; a failed repetition is recorded with
/// ok = false and left out of the summaries.
SweepReport noise_sweep(const data::Dataset& dataset, const ExperimentConfig& cfg);

/// Recomputes the summaries of a sweep from its raw records.
std::vector<NoiseSummary> summarize_runs(const std::vector<RepetitionRecord>& runs,
                                         const std::vector<double>& noise_levels,
                                         const std::vector<std::string>& schemes);

}  // namespace evifuse::experiments
