#pragma once

// Evidential fusion of an ensemble of classifiers.
//
// Each member's scores are weighted per class, compared with a learned
// reference through exp(-x^2), and turned into a mass function whose
// ignorance is controlled by a learned epsilon. Members are fused with
// Dempster's rule; references and epsilons are fitted by minimizing the
// Frobenius distance between the fused singleton masses and the one-hot
// training targets.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evifuse/baselearners.hpp"
#include "evifuse/evidence.hpp"
#include "evifuse/kernels.hpp"
#include "evifuse/matrix.hpp"
#include "evifuse/weights.hpp"

namespace evifuse::fusion {

using kernels::Execution;
using kernels::ProximityMode;
using learners::ScoreMatrix;

struct MemberParams {
  std::vector<double> reference;  ///< K entries, or K*K for ProximityMode::RowNorm
  double epsilon = 0.0;
  weights::WeightVector weight;

  bool operator==(const MemberParams&) const = default;
};

struct FusionModel {
  std::size_t class_count = 2;
  std::vector<std::size_t> member_ids;  ///< indices into the classifier pool
  std::vector<std::string> member_names;
  weights::Scheme scheme = weights::Scheme::W0;
  ProximityMode proximity = ProximityMode::Elementwise;
  std::vector<MemberParams> params;  ///< one per member

  bool operator==(const FusionModel&) const = default;
};

std::string to_json(const FusionModel& model);
FusionModel model_from_json(const std::string& text);

/// n x K matrix with entries in (0, 1].
Matrix proximity(std::span<const double> reference, const weights::WeightVector& weight,
                 const ScoreMatrix& scores, ProximityMode mode = ProximityMode::Elementwise);

/// m(theta_k) = d_k / (sum d + eps), m(Theta) = eps / (sum d + eps).
evidence::Bba bba_from_row(std::span<const double> distances, double epsilon);

struct FusedOutput {
  Matrix masses;                 ///< n x K fused singleton masses
  std::vector<double> ignorance; ///< fused m(Theta) per sample

  /// Argmax of the fused singleton masses, ties to the lower class.
  LabelVector labels() const;
};

/// Throws TotalConflict (with the sample index) or DimensionMismatch.
FusedOutput fused_scores(std::span<const MemberParams> params, std::span<const ScoreMatrix> scores,
                         ProximityMode mode = ProximityMode::Elementwise,
                         Execution exec = Execution::Parallel);

Matrix one_hot(std::span<const Label> labels, std::size_t class_count);

/// Frobenius norm of (fused singleton masses - targets); ignorance excluded.
double objective(std::span<const MemberParams> params, std::span<const ScoreMatrix> scores,
                 const Matrix& targets, ProximityMode mode = ProximityMode::Elementwise,
                 Execution exec = Execution::Parallel);

enum class OptimizationMode {
  Joint,       ///< all members' parameters in one simplex
  Coordinate,  ///< one member at a time, others held fixed
};

struct OptimizerOptions {
  std::size_t restarts = 3;
  std::size_t evaluations_per_dimension = 400;
  double x_tolerance = 1e-6;
  double f_tolerance = 1e-9;
  double initial_epsilon = 0.1;
  double restart_jitter = 0.2;  ///< multiplicative, uniform in [-j, j]
  double reference_step = 0.1;  ///< initial simplex edge for reference entries
  double log_epsilon_step = 0.5;
  OptimizationMode mode = OptimizationMode::Joint;
  std::size_t coordinate_sweeps = 2;
};

struct FusionOptions {
  ProximityMode proximity = ProximityMode::Elementwise;
  Execution execution = Execution::Parallel;
  OptimizerOptions optimizer;
};

struct OptimizationResult {
  std::vector<MemberParams> params;
  double objective = 0.0;
  double initial_objective = 0.0;
  std::size_t evaluations = 0;
};

/// Starting point: each reference entry is the mean weighted score of the
/// training samples of the matching class; epsilon starts at
/// options.initial_epsilon.
std::vector<MemberParams> initial_params(std::span<const ScoreMatrix> scores,
                                         std::span<const Label> targets,
                                         std::span<const weights::WeightVector> member_weights,
                                         const FusionOptions& options);

/// Fits every member's reference and epsilon on the training split. Epsilon
/// is optimized as exp(u). Trial points that hit total conflict score +inf.
OptimizationResult optimize_references(std::span<const ScoreMatrix> scores,
                                       std::span<const Label> targets,
                                       std::span<const weights::WeightVector> member_weights,
                                       std::uint64_t seed, const FusionOptions& options = {});

/// Scores of one ensemble on the training (out-of-fold) and validation splits.
struct EnsembleScores {
  std::vector<ScoreMatrix> train;
  std::vector<ScoreMatrix> valid;
  std::vector<metrics::ConfusionMatrix> cv_confusion;  ///< drives the weights
};

struct SchemeOutcome {
  weights::Scheme scheme = weights::Scheme::W0;
  std::vector<MemberParams> params;
  double objective = 0.0;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;
};

/// Fits one weighting scheme and scores it on both splits.
SchemeOutcome fit_scheme(const EnsembleScores& ensemble, std::span<const Label> train_labels,
                         std::span<const Label> valid_labels, weights::Scheme scheme,
                         std::uint64_t seed, const FusionOptions& options);

struct FusionTraining {
  FusionModel model;
  std::vector<SchemeOutcome> outcomes;  ///< one per scheme, in the order tried
  std::size_t best = 0;                 ///< index into outcomes
};

/// Tries each scheme (W0 is always added) and keeps the one with the best
/// validation accuracy; ties go to the lowest scheme index. `member_ids`
/// and `member_names` are copied into the model. A precomputed W0 outcome
/// for the same ensemble and seed may be passed to skip refitting it.
FusionTraining train_fusion(const EnsembleScores& ensemble, std::span<const Label> train_labels,
                            std::span<const Label> valid_labels,
                            std::span<const weights::Scheme> schemes, std::uint64_t seed,
                            const FusionOptions& options = {},
                            std::vector<std::size_t> member_ids = {},
                            std::vector<std::string> member_names = {},
                            const SchemeOutcome* known_w0 = nullptr);

/// Validation and training accuracy of the ensemble built from the top
/// `size` ranked classifiers.
struct SizeScore {
  std::size_t size = 0;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;

  double mean_accuracy() const noexcept { return 0.5 * (train_accuracy + valid_accuracy); }
};

enum class TieRule {
  ValidationAccuracy,  ///< unique maximum validation accuracy
  MeanAccuracy,        ///< mean of training and validation accuracy
  SizePreference,      ///< preferred sizes 4, then 5, then 6
  SmallerSize,
};

std::string_view to_string(TieRule rule) noexcept;

struct SizeChoice {
  std::size_t index = 0;  ///< into the candidate list
  TieRule decided_by = TieRule::ValidationAccuracy;
};

SizeChoice choose_ensemble_size(std::span<const SizeScore> candidates);

struct SelectionResult {
  std::vector<std::size_t> members;  ///< pool indices in rank order
  std::vector<SizeScore> candidates;
  SizeChoice choice;
  SchemeOutcome chosen;  ///< W0 fit of the selected ensemble
};

/// Greedy growth over the relevancy ranking (rank 1 first), sizes 1..pool,
/// each fitted with W0 and scored on the validation split.
SelectionResult select_ensemble(const EnsembleScores& pool, std::span<const std::size_t> ranks,
                                std::span<const Label> train_labels,
                                std::span<const Label> valid_labels, std::uint64_t seed,
                                const FusionOptions& options = {});

EnsembleScores subset(const EnsembleScores& pool, std::span<const std::size_t> members);

struct Prediction {
  LabelVector labels;
  Matrix masses;
  std::vector<double> ignorance;
};

/// Fuses already computed member scores (one matrix per model member).
Prediction predict_from_scores(const FusionModel& model, std::span<const ScoreMatrix> member_scores,
                               Execution exec = Execution::Parallel);

/// Scores `features` with the model's members and fuses them.
Prediction predict(const FusionModel& model, std::span<const learners::TrainedClassifier> pool,
                   const Matrix& features, Execution exec = Execution::Parallel);

}  // namespace evifuse::fusion
