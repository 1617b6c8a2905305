#include "evifuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include <json.hpp>

#include "evifuse/error.hpp"
#include "evifuse/nelder_mead.hpp"
#include "evifuse/random.hpp"

namespace evifuse::fusion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAccuracyTie = 1e-12;

void check_inputs(std::span<const MemberParams> params, std::span<const ScoreMatrix> scores,
                  ProximityMode mode) {
  if (scores.empty()) throw Error(ErrorKind::DimensionMismatch, "no ensemble members");
  if (params.size() != scores.size()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(params.size()) + " parameter sets for " +
                                                  std::to_string(scores.size()) + " members");
  }
  const std::size_t n = scores.front().rows();
  const std::size_t k = scores.front().class_count();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].rows() != n || scores[i].class_count() != k) {
      throw Error(ErrorKind::DimensionMismatch, "member score matrices differ in shape", i);
    }
    if (params[i].reference.size() != kernels::reference_size(mode, k) ||
        params[i].weight.values.size() != k) {
      throw Error(ErrorKind::DimensionMismatch, "member parameters do not match the frame", i);
    }
  }
}

std::vector<double> weighted_scores(const ScoreMatrix& scores, std::span<const double> weight) {
  const std::size_t k = scores.class_count();
  std::vector<double> out(scores.rows() * k);
  for (std::size_t s = 0; s < scores.rows(); ++s) {
    for (std::size_t c = 0; c < k; ++c) out[s * k + c] = weight[c] * scores.scores(s, c);
  }
  return out;
}

/// Precomputed inputs for repeated objective evaluations.
class Problem {
 public:
  Problem(std::span<const ScoreMatrix> scores, const Matrix& targets,
          std::span<const weights::WeightVector> member_weights, const FusionOptions& options)
      : samples_(targets.rows()),
        classes_(targets.cols()),
        ref_size_(kernels::reference_size(options.proximity, targets.cols())),
        mode_(options.proximity),
        exec_(options.execution),
        targets_(targets),
        views_(scores.size()),
        masses_(samples_ * classes_),
        ignorance_(samples_) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      weighted_.push_back(weighted_scores(scores[i], member_weights[i].values));
    }
    for (std::size_t i = 0; i < scores.size(); ++i) views_[i].weighted_scores = weighted_[i];
  }

  std::size_t members() const noexcept { return views_.size(); }
  std::size_t block() const noexcept { return ref_size_ + 1; }
  std::size_t dimension() const noexcept { return members() * block(); }

  /// x holds [reference..., log epsilon] per member.
  double evaluate(std::span<const double> x) {
    for (std::size_t i = 0; i < members(); ++i) {
      views_[i].reference = x.subspan(i * block(), ref_size_);
      views_[i].epsilon = std::exp(x[i * block() + ref_size_]);
    }
    const auto failure = kernels::fuse(exec_, views_, samples_, classes_, mode_, masses_, ignorance_);
    if (failure != kernels::kNoFailure) return kInf;
    double sq = 0.0;
    for (std::size_t s = 0; s < samples_; ++s) {
      for (std::size_t c = 0; c < classes_; ++c) {
        const double diff = masses_[s * classes_ + c] - targets_(s, c);
        sq += diff * diff;
      }
    }
    return std::sqrt(sq);
  }

 private:
  std::size_t samples_;
  std::size_t classes_;
  std::size_t ref_size_;
  ProximityMode mode_;
  Execution exec_;
  const Matrix& targets_;
  std::vector<std::vector<double>> weighted_;
  std::vector<kernels::MemberView> views_;
  std::vector<double> masses_;
  std::vector<double> ignorance_;
};

struct Minimum {
  std::vector<double> x;
  double value = kInf;
  double initial_value = kInf;
  std::size_t evaluations = 0;
};

// Nelder-Mead from `start`, then restarts from jittered copies of the best
// point. `is_log` marks log-epsilon coordinates.
Minimum minimize_with_restarts(const optim::Objective& f, std::span<const double> start,
                               std::span<const double> steps, const std::vector<bool>& is_log,
                               Rng& rng, const OptimizerOptions& opts) {
  optim::NelderMeadOptions nm{opts.evaluations_per_dimension * std::max<std::size_t>(start.size(), 1),
                              opts.x_tolerance, opts.f_tolerance};
  auto first = optim::nelder_mead(f, start, steps, nm);
  Minimum best{first.x, first.value, first.initial_value, first.evaluations};
  for (std::size_t r = 1; r < opts.restarts; ++r) {
    std::vector<double> jittered = best.x;
    for (std::size_t j = 0; j < jittered.size(); ++j) {
      const double factor = 1.0 + rng.uniform(-opts.restart_jitter, opts.restart_jitter);
      jittered[j] = is_log[j] ? jittered[j] + std::log(factor) : jittered[j] * factor;
    }
    auto run = optim::nelder_mead(f, jittered, steps, nm);
    best.evaluations += run.evaluations;
    if (run.value < best.value) {
      best.x = std::move(run.x);
      best.value = run.value;
    }
  }
  return best;
}

std::vector<double> pack(std::span<const MemberParams> params) {
  std::vector<double> x;
  for (const auto& p : params) {
    x.insert(x.end(), p.reference.begin(), p.reference.end());
    x.push_back(std::log(p.epsilon));
  }
  return x;
}

void unpack(std::span<const double> x, std::vector<MemberParams>& params) {
  std::size_t pos = 0;
  for (auto& p : params) {
    for (double& r : p.reference) r = x[pos++];
    p.epsilon = std::exp(x[pos++]);
  }
}

double accuracy_of(const FusedOutput& fused, std::span<const Label> truth) {
  return metrics::accuracy(fused.labels(), truth);
}

template <class Fn>
void parallel_for_each(std::size_t count, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string proximity_name(ProximityMode mode) {
  return mode == ProximityMode::Elementwise ? "elementwise" : "row-norm";
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_json(const FusionModel& model) {
  nlohmann::ordered_json j;
  j["frame"] = model.class_count;
  j["member_ids"] = model.member_ids;
  j["member_names"] = model.member_names;
  j["scheme"] = std::string(weights::to_string(model.scheme));
  j["proximity"] = proximity_name(model.proximity);
  j["members"] = nlohmann::ordered_json::array();
  for (const auto& p : model.params) {
    j["members"].push_back({{"r", p.reference}, {"epsilon", p.epsilon}, {"w", p.weight.values}});
  }
  return j.dump(2);
}

FusionModel model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    FusionModel m;
    m.class_count = j.at("frame").get<std::size_t>();
    m.member_ids = j.at("member_ids").get<std::vector<std::size_t>>();
    if (j.contains("member_names")) m.member_names = j["member_names"].get<std::vector<std::string>>();
    const auto scheme = weights::parse_scheme(j.at("scheme").get<std::string>());
    if (!scheme) throw Error(ErrorKind::ParseError, "unknown weighting scheme in model");
    m.scheme = *scheme;
    const auto prox = j.value("proximity", std::string("elementwise"));
    if (prox == "elementwise") m.proximity = ProximityMode::Elementwise;
    else if (prox == "row-norm") m.proximity = ProximityMode::RowNorm;
    else throw Error(ErrorKind::ParseError, "unknown proximity mode '" + prox + "'");
    for (const auto& member : j.at("members")) {
      MemberParams p;
      p.reference = member.at("r").get<std::vector<double>>();
      p.epsilon = member.at("epsilon").get<double>();
      p.weight = {member.at("w").get<std::vector<double>>(), m.scheme};
      m.params.push_back(std::move(p));
    }
    if (m.params.size() != m.member_ids.size()) {
      throw Error(ErrorKind::ParseError, "one parameter set per member expected");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model JSON: ") + e.what());
  }
}

Matrix proximity(std::span<const double> reference, const weights::WeightVector& weight,
                 const ScoreMatrix& scores, ProximityMode mode) {
  const std::size_t k = scores.class_count();
  if (weight.values.size() != k || reference.size() != kernels::reference_size(mode, k)) {
    throw Error(ErrorKind::DimensionMismatch, "reference/weight length does not match the scores");
  }
  const auto weighted = weighted_scores(scores, weight.values);
  Matrix out(scores.rows(), k);
  for (std::size_t s = 0; s < scores.rows(); ++s) {
    kernels::proximity_row(mode, std::span(weighted).subspan(s * k, k), reference, out.row(s));
  }
  return out;
}

evidence::Bba bba_from_row(std::span<const double> distances, double epsilon) {
  double denom = epsilon;
  for (double d : distances) denom += d;
  evidence::Bba b{std::vector<double>(distances.begin(), distances.end()), epsilon / denom};
  for (double& m : b.singletons) m /= denom;
  return b;
}

LabelVector FusedOutput::labels() const {
  LabelVector out(masses.rows());
  for (std::size_t s = 0; s < masses.rows(); ++s) {
    const auto row = masses.row(s);
    out[s] = static_cast<Label>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

FusedOutput fused_scores(std::span<const MemberParams> params, std::span<const ScoreMatrix> scores,
                         ProximityMode mode, Execution exec) {
  check_inputs(params, scores, mode);
  const std::size_t n = scores.front().rows();
  const std::size_t k = scores.front().class_count();
  std::vector<std::vector<double>> weighted;
  std::vector<kernels::MemberView> views;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weighted.push_back(weighted_scores(scores[i], params[i].weight.values));
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    views.push_back({weighted[i], params[i].reference, params[i].epsilon});
  }
  FusedOutput out{Matrix(n, k), std::vector<double>(n)};
  const auto failure = kernels::fuse(exec, views, n, k, mode, out.masses.data(), out.ignorance);
  if (failure != kernels::kNoFailure) {
    throw Error(ErrorKind::TotalConflict, "fusion failed at sample " + std::to_string(failure), failure);
  }
  return out;
}

Matrix one_hot(std::span<const Label> labels, std::size_t class_count) {
  Matrix out(labels.size(), class_count);
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] >= class_count) throw Error(ErrorKind::DimensionMismatch, "label outside frame", s);
    out(s, labels[s]) = 1.0;
  }
  return out;
}

double objective(std::span<const MemberParams> params, std::span<const ScoreMatrix> scores,
                 const Matrix& targets, ProximityMode mode, Execution exec) {
  const auto fused = fused_scores(params, scores, mode, exec);
  if (targets.rows() != fused.masses.rows() || targets.cols() != fused.masses.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "targets do not match the fused output");
  }
  double sq = 0.0;
  for (std::size_t s = 0; s < targets.rows(); ++s) {
    for (std::size_t c = 0; c < targets.cols(); ++c) {
      const double diff = fused.masses(s, c) - targets(s, c);
      sq += diff * diff;
    }
  }
  return std::sqrt(sq);
}

std::vector<MemberParams> initial_params(std::span<const ScoreMatrix> scores,
                                         std::span<const Label> targets,
                                         std::span<const weights::WeightVector> member_weights,
                                         const FusionOptions& options) {
  if (scores.empty()) throw Error(ErrorKind::DimensionMismatch, "no ensemble members");
  if (member_weights.size() != scores.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one weight vector per member expected");
  }
  const std::size_t k = scores.front().class_count();
  std::vector<std::size_t> class_sizes(k, 0);
  for (Label t : targets) ++class_sizes.at(t);

  std::vector<MemberParams> params;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].rows() != targets.size()) {
      throw Error(ErrorKind::DimensionMismatch, "scores and targets differ in length", i);
    }
    const auto w = member_weights[i].values;
    // class_means(c, j): mean weighted score for column j over samples of class c
    Matrix class_means(k, k);
    std::vector<double> overall(k, 0.0);
    for (std::size_t s = 0; s < targets.size(); ++s) {
      for (std::size_t j = 0; j < k; ++j) {
        const double v = w[j] * scores[i].scores(s, j);
        class_means(targets[s], j) += v;
        overall[j] += v;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < k; ++j) {
        class_means(c, j) = class_sizes[c] > 0
                                ? class_means(c, j) / static_cast<double>(class_sizes[c])
                                : overall[j] / static_cast<double>(std::max<std::size_t>(targets.size(), 1));
      }
    }
    MemberParams p;
    p.weight = member_weights[i];
    p.epsilon = options.optimizer.initial_epsilon;
    if (options.proximity == ProximityMode::Elementwise) {
      for (std::size_t c = 0; c < k; ++c) p.reference.push_back(class_means(c, c));
    } else {
      p.reference.assign(class_means.data().begin(), class_means.data().end());
    }
    params.push_back(std::move(p));
  }
  return params;
}

OptimizationResult optimize_references(std::span<const ScoreMatrix> scores,
                                       std::span<const Label> targets,
                                       std::span<const weights::WeightVector> member_weights,
                                       std::uint64_t seed, const FusionOptions& options) {
  if (targets.empty()) throw Error(ErrorKind::EmptyInput, "no training samples");
  auto params = initial_params(scores, targets, member_weights, options);
  const Matrix target_matrix = one_hot(targets, scores.front().class_count());
  Problem problem(scores, target_matrix, member_weights, options);
  const auto& opts = options.optimizer;
  Rng rng(seed);

  std::vector<double> x = pack(params);
  const std::size_t block = problem.block();
  auto block_steps = [&](std::size_t members) {
    std::vector<double> steps;
    std::vector<bool> is_log;
    for (std::size_t m = 0; m < members; ++m) {
      for (std::size_t j = 0; j + 1 < block; ++j) {
        steps.push_back(opts.reference_step);
        is_log.push_back(false);
      }
      steps.push_back(opts.log_epsilon_step);
      is_log.push_back(true);
    }
    return std::pair(steps, is_log);
  };

  OptimizationResult result;
  if (opts.mode == OptimizationMode::Joint || problem.members() == 1) {
    const auto [steps, is_log] = block_steps(problem.members());
    const auto best = minimize_with_restarts(
        [&](std::span<const double> p) { return problem.evaluate(p); }, x, steps, is_log, rng, opts);
    x = best.x;
    result.objective = best.value;
    result.initial_objective = best.initial_value;
    result.evaluations = best.evaluations;
  } else {
    const auto [steps, is_log] = block_steps(1);
    result.initial_objective = problem.evaluate(x);
    result.objective = result.initial_objective;
    std::vector<double> trial = x;
    for (std::size_t sweep = 0; sweep < opts.coordinate_sweeps; ++sweep) {
      for (std::size_t m = 0; m < problem.members(); ++m) {
        const auto offset = static_cast<std::ptrdiff_t>(m * block);
        const auto f = [&](std::span<const double> p) {
          std::copy(p.begin(), p.end(), trial.begin() + offset);
          return problem.evaluate(trial);
        };
        const std::vector<double> start(x.begin() + offset, x.begin() + offset + static_cast<std::ptrdiff_t>(block));
        const auto best = minimize_with_restarts(f, start, steps, is_log, rng, opts);
        result.evaluations += best.evaluations;
        if (best.value <= result.objective) {
          std::copy(best.x.begin(), best.x.end(), x.begin() + offset);
          result.objective = best.value;
        }
        trial = x;
      }
    }
  }
  unpack(x, params);
  result.params = std::move(params);
  return result;
}

SchemeOutcome fit_scheme(const EnsembleScores& ensemble, std::span<const Label> train_labels,
                         std::span<const Label> valid_labels, weights::Scheme scheme,
                         std::uint64_t seed, const FusionOptions& options) {
  if (ensemble.train.empty() || ensemble.train.size() != ensemble.valid.size()) {
    throw Error(ErrorKind::DimensionMismatch, "ensemble train/valid score lists differ");
  }
  const std::size_t k = ensemble.train.front().class_count();
  std::vector<weights::WeightVector> member_weights;
  for (std::size_t i = 0; i < ensemble.train.size(); ++i) {
    if (scheme == weights::Scheme::W0) {
      member_weights.push_back({std::vector<double>(k, 1.0), scheme});
    } else {
      if (k != 2) throw Error(ErrorKind::NonBinaryTask, "weighting schemes w1..w5 need two classes");
      member_weights.push_back(weights::build_weight(ensemble.cv_confusion.at(i), scheme));
    }
  }
  auto opt = optimize_references(ensemble.train, train_labels, member_weights,
                                 derive_seed(seed, static_cast<std::uint64_t>(weights::index_of(scheme))),
                                 options);
  SchemeOutcome out;
  out.scheme = scheme;
  out.objective = opt.objective;
  out.params = std::move(opt.params);
  out.train_accuracy =
      accuracy_of(fused_scores(out.params, ensemble.train, options.proximity, options.execution), train_labels);
  out.valid_accuracy =
      accuracy_of(fused_scores(out.params, ensemble.valid, options.proximity, options.execution), valid_labels);
  return out;
}

FusionTraining train_fusion(const EnsembleScores& ensemble, std::span<const Label> train_labels,
                            std::span<const Label> valid_labels,
                            std::span<const weights::Scheme> schemes, std::uint64_t seed,
                            const FusionOptions& options, std::vector<std::size_t> member_ids,
                            std::vector<std::string> member_names, const SchemeOutcome* known_w0) {
  if (train_labels.empty() || valid_labels.empty()) {
    throw Error(ErrorKind::EmptyInput, "training and validation splits must be nonempty");
  }
  std::vector<weights::Scheme> tried{weights::Scheme::W0};
  for (auto s : schemes) {
    if (std::find(tried.begin(), tried.end(), s) == tried.end()) tried.push_back(s);
  }

  FusionTraining training;
  training.outcomes.resize(tried.size());
  parallel_for_each(tried.size(), [&](std::size_t i) {
    if (tried[i] == weights::Scheme::W0 && known_w0 != nullptr) {
      training.outcomes[i] = *known_w0;
    } else {
      training.outcomes[i] = fit_scheme(ensemble, train_labels, valid_labels, tried[i], seed, options);
    }
  });

  for (std::size_t i = 1; i < training.outcomes.size(); ++i) {
    const auto& cand = training.outcomes[i];
    const auto& best = training.outcomes[training.best];
    if (cand.valid_accuracy > best.valid_accuracy + kAccuracyTie ||
        (std::abs(cand.valid_accuracy - best.valid_accuracy) <= kAccuracyTie &&
         weights::index_of(cand.scheme) < weights::index_of(best.scheme))) {
      training.best = i;
    }
  }

  const auto& best = training.outcomes[training.best];
  auto& model = training.model;
  model.class_count = ensemble.train.front().class_count();
  model.member_ids = std::move(member_ids);
  if (model.member_ids.empty()) {
    model.member_ids.resize(ensemble.train.size());
    std::iota(model.member_ids.begin(), model.member_ids.end(), 0);
  }
  model.member_names = std::move(member_names);
  if (model.member_names.empty()) {
    for (const auto& sm : ensemble.train) model.member_names.push_back(sm.classifier_id);
  }
  model.scheme = best.scheme;
  model.proximity = options.proximity;
  model.params = best.params;
  return training;
}

std::string_view to_string(TieRule rule) noexcept {
  switch (rule) {
    case TieRule::ValidationAccuracy: return "validation-accuracy";
    case TieRule::MeanAccuracy: return "mean-train-valid-accuracy";
    case TieRule::SizePreference: return "size-preference-4-5-6";
    case TieRule::SmallerSize: return "smaller-size";
  }
  return "unknown";
}

SizeChoice choose_ensemble_size(std::span<const SizeScore> candidates) {
  if (candidates.empty()) throw Error(ErrorKind::EmptyInput, "no candidate ensembles");
  std::vector<std::size_t> alive(candidates.size());
  std::iota(alive.begin(), alive.end(), 0);

  auto keep_max = [&](auto key) {
    double top = -kInf;
    for (auto i : alive) top = std::max(top, key(candidates[i]));
    std::erase_if(alive, [&](std::size_t i) { return key(candidates[i]) < top - kAccuracyTie; });
  };

  keep_max([](const SizeScore& s) { return s.valid_accuracy; });
  if (alive.size() == 1) return {alive.front(), TieRule::ValidationAccuracy};

  keep_max([](const SizeScore& s) { return s.mean_accuracy(); });
  if (alive.size() == 1) return {alive.front(), TieRule::MeanAccuracy};

  for (std::size_t preferred : {4u, 5u, 6u}) {
    for (auto i : alive) {
      if (candidates[i].size == preferred) return {i, TieRule::SizePreference};
    }
  }
  const auto smallest = std::min_element(alive.begin(), alive.end(), [&](auto a, auto b) {
    return candidates[a].size < candidates[b].size;
  });
  return {*smallest, TieRule::SmallerSize};
}

EnsembleScores subset(const EnsembleScores& pool, std::span<const std::size_t> members) {
  EnsembleScores out;
  for (auto m : members) {
    out.train.push_back(pool.train.at(m));
    out.valid.push_back(pool.valid.at(m));
    if (m < pool.cv_confusion.size()) out.cv_confusion.push_back(pool.cv_confusion[m]);
  }
  return out;
}

SelectionResult select_ensemble(const EnsembleScores& pool, std::span<const std::size_t> ranks,
                                std::span<const Label> train_labels,
                                std::span<const Label> valid_labels, std::uint64_t seed,
                                const FusionOptions& options) {
  if (pool.train.empty()) throw Error(ErrorKind::EmptyInput, "empty classifier pool");
  if (ranks.size() != pool.train.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one rank per pool member expected");
  }
  std::vector<std::size_t> order(ranks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

  std::vector<SchemeOutcome> fits(order.size());
  parallel_for_each(order.size(), [&](std::size_t i) {
    const std::span members(order.data(), i + 1);
    fits[i] = fit_scheme(subset(pool, members), train_labels, valid_labels, weights::Scheme::W0,
                         seed, options);
  });

  SelectionResult result;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    result.candidates.push_back({i + 1, fits[i].train_accuracy, fits[i].valid_accuracy});
  }
  result.choice = choose_ensemble_size(result.candidates);
  const std::size_t size = result.candidates[result.choice.index].size;
  result.members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
  result.chosen = fits[result.choice.index];
  return result;
}

Prediction predict_from_scores(const FusionModel& model, std::span<const ScoreMatrix> member_scores,
                               Execution exec) {
  auto fused = fused_scores(model.params, member_scores, model.proximity, exec);
  Prediction p;
  p.labels = fused.labels();
  p.masses = std::move(fused.masses);
  p.ignorance = std::move(fused.ignorance);
  return p;
}

Prediction predict(const FusionModel& model, std::span<const learners::TrainedClassifier> pool,
                   const Matrix& features, Execution exec) {
  std::vector<ScoreMatrix> member_scores;
  for (std::size_t i = 0; i < model.member_ids.size(); ++i) {
    const auto id = model.member_ids[i];
    if (id >= pool.size()) {
      throw Error(ErrorKind::MemberMissing, "member " + std::to_string(id) + " is not in the pool", id);
    }
    if (i < model.member_names.size() && model.member_names[i] != pool[id].name()) {
      throw Error(ErrorKind::MemberMissing,
                  "pool slot " + std::to_string(id) + " holds " + pool[id].name() + ", model expects " +
                      model.member_names[i], id);
    }
    member_scores.push_back(learners::predict_scores(pool[id], features));
  }
  return predict_from_scores(model, member_scores, exec);
}

}  // namespace evifuse::fusion
