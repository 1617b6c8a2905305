#include "evifuse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "evifuse/error.hpp"
#include "evifuse/infotheory.hpp"
#include "evifuse/random.hpp"

namespace evifuse::experiments {

namespace {

constexpr const char* kCascade =
    "validation-accuracy > mean-train-valid-accuracy > size-preference-4-5-6 > smaller-size";

learners::ScoreMatrix split_scores(const learners::TrainedClassifier& c, const data::Dataset& part,
                                   const learners::ScoreMatrix& (*external)(const learners::ExternalScores&)) {
  if (c.is_external()) return external(*c.external);
  return learners::predict_scores(c, part.features);
}

const learners::ScoreMatrix& ext_train(const learners::ExternalScores& e) { return e.train; }
const learners::ScoreMatrix& ext_valid(const learners::ExternalScores& e) { return e.valid; }
const learners::ScoreMatrix& ext_test(const learners::ExternalScores& e) { return e.test; }

fusion::FusionModel with_outcome(fusion::FusionModel model, const fusion::SchemeOutcome& outcome) {
  model.scheme = outcome.scheme;
  model.params = outcome.params;
  return model;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(fractions.train > 0.0) || !(fractions.valid > 0.0) || !(fractions.test > 0.0) ||
      std::abs(fractions.train + fractions.valid + fractions.test - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidFractions, "split fractions must be positive and sum to 1");
  }
  if (repetitions < 1) throw Error(ErrorKind::InvalidConfig, "repetitions must be >= 1");
  if (noise_levels.empty()) throw Error(ErrorKind::InvalidConfig, "no noise levels");
  for (double n : noise_levels) {
    if (!(n >= 0.0)) throw Error(ErrorKind::InvalidConfig, "noise levels must be >= 0");
  }
  if (schemes.empty()) throw Error(ErrorKind::InvalidConfig, "no weighting schemes");
  if (pool.learners.empty()) throw Error(ErrorKind::InvalidConfig, "empty classifier pool");
  if (fusion.optimizer.restarts < 1) throw Error(ErrorKind::InvalidConfig, "restarts must be >= 1");
}

StageSeeds StageSeeds::from(std::uint64_t seed) {
  return {derive_seed(seed, 0), derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3)};
}

std::uint64_t child_seed(std::uint64_t master_seed, std::size_t level, std::size_t repetition,
                         std::size_t repetitions) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(level * repetitions + repetition));
}

LabelVector majority_vote(std::span<const learners::ScoreMatrix> member_scores) {
  if (member_scores.empty()) return {};
  const std::size_t n = member_scores.front().rows();
  const std::size_t k = member_scores.front().class_count();
  std::vector<LabelVector> hard;
  for (const auto& sm : member_scores) hard.push_back(sm.hard_labels());
  LabelVector out(n);
  std::vector<std::size_t> votes(k);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& h : hard) ++votes[h[s]];
    out[s] = static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return out;
}

PoolStage build_pool(const data::Dataset& dataset, const ExperimentConfig& cfg, std::uint64_t seed,
                     double noise) {
  const auto seeds = StageSeeds::from(seed);
  PoolStage st;
  st.split = data::stratified_split(dataset, cfg.fractions, seeds.split);
  if (cfg.pollution == Pollution::AllSplits) {
    st.dataset = data::add_noise(dataset, noise, seeds.noise);
  } else {
    st.dataset = data::add_noise(dataset, noise, seeds.noise, std::span<const std::size_t>(st.split.test));
  }
  const auto train = st.dataset.subset(st.split.train);
  const auto valid = st.dataset.subset(st.split.valid);
  const auto test = st.dataset.subset(st.split.test);
  st.train_labels = train.labels;
  st.valid_labels = valid.labels;
  st.test_labels = test.labels;

  learners::FitOptions fit_options;
  fit_options.seed = seeds.fit;
  fit_options.execution = cfg.fusion.execution;
  fit_options.split_sizes = learners::SplitSizes{train.samples(), valid.samples(), test.samples()};
  st.pool = learners::fit(cfg.pool, train.features, train.labels, dataset.class_count, fit_options);

  std::vector<double> mi;
  for (const auto& c : st.pool) {
    const auto train_scores = split_scores(c, train, ext_train);
    const auto valid_scores = split_scores(c, valid, ext_valid);
    const auto test_scores = split_scores(c, test, ext_test);
    const auto valid_hard = valid_scores.hard_labels();

    ClassifierRow row;
    row.name = c.name();
    row.train_accuracy = metrics::accuracy(train_scores.hard_labels(), train.labels);
    row.cv_accuracy = metrics::accuracy(c.cv_scores.hard_labels(), train.labels);
    row.valid_accuracy = metrics::accuracy(valid_hard, valid.labels);
    row.test_accuracy = metrics::accuracy(test_scores.hard_labels(), test.labels);
    row.mutual_information = infotheory::mutual_information(valid_hard, valid.labels);
    row.cv_confusion = c.cv_confusion;
    mi.push_back(row.mutual_information);
    st.rows.push_back(std::move(row));

    st.scores.train.push_back(c.cv_scores);
    st.scores.valid.push_back(valid_scores);
    st.scores.cv_confusion.push_back(c.cv_confusion);
    st.test_scores.push_back(test_scores);
  }
  st.ranks = infotheory::rank_by_relevancy(mi);
  for (std::size_t i = 0; i < st.rows.size(); ++i) st.rows[i].rank = st.ranks[i];
  return st;
}

RunReport run_pipeline(const data::Dataset& dataset, const ExperimentConfig& cfg, std::uint64_t seed,
                       double noise) {
  cfg.validate();
  const auto seeds = StageSeeds::from(seed);
  auto st = build_pool(dataset, cfg, seed, noise);

  RunReport report;
  report.dataset = dataset.name;
  report.seed = seed;
  report.noise = noise;
  report.train_size = st.split.train.size();
  report.valid_size = st.split.valid.size();
  report.test_size = st.split.test.size();
  report.imbalance_ratio = data::imbalance_ratio(dataset);
  report.classifiers = st.rows;
  report.tie_break_cascade = kCascade;

  const auto selection = fusion::select_ensemble(st.scores, st.ranks, st.train_labels,
                                                 st.valid_labels, seeds.fusion, cfg.fusion);
  std::vector<std::size_t> order(st.ranks.size());
  for (std::size_t i = 0; i < st.ranks.size(); ++i) order[st.ranks[i] - 1] = i;
  for (const auto& cand : selection.candidates) {
    SelectionRow row;
    row.size = cand.size;
    for (std::size_t j = 0; j < cand.size; ++j) row.members.push_back(st.pool[order[j]].name());
    row.train_accuracy = cand.train_accuracy;
    row.valid_accuracy = cand.valid_accuracy;
    row.mean_accuracy = cand.mean_accuracy();
    report.selection.push_back(std::move(row));
  }
  report.selected_size = selection.members.size();
  report.selection_rule = std::string(fusion::to_string(selection.choice.decided_by));

  std::vector<std::string> names;
  std::vector<learners::ScoreMatrix> member_test;
  for (auto m : selection.members) {
    names.push_back(st.pool[m].name());
    member_test.push_back(st.test_scores[m]);
  }
  report.ensemble = names;

  const auto ensemble = fusion::subset(st.scores, selection.members);
  const auto training = fusion::train_fusion(ensemble, st.train_labels, st.valid_labels, cfg.schemes,
                                             seeds.fusion, cfg.fusion, selection.members, names,
                                             &selection.chosen);
  report.model = training.model;

  for (std::size_t i = 0; i < training.outcomes.size(); ++i) {
    const auto& outcome = training.outcomes[i];
    const auto predicted =
        fusion::predict_from_scores(with_outcome(training.model, outcome), member_test, cfg.fusion.execution);
    SchemeRow row;
    row.size = selection.members.size();
    row.scheme = std::string(weights::to_string(outcome.scheme));
    row.objective = outcome.objective;
    row.train_accuracy = outcome.train_accuracy;
    row.valid_accuracy = outcome.valid_accuracy;
    row.test_accuracy = metrics::accuracy(predicted.labels, st.test_labels);
    report.schemes.push_back(row);
    if (i == training.best) {
      report.bem_scheme = row.scheme;
      report.bem_valid_accuracy = row.valid_accuracy;
      report.bem_test_accuracy = row.test_accuracy;
      report.bem_test_predictions = predicted.labels;
    }
  }
  report.test_labels = st.test_labels;

  std::size_t bim = 0;
  for (std::size_t i = 1; i < st.rows.size(); ++i) {
    if (st.rows[i].test_accuracy > st.rows[bim].test_accuracy) bim = i;
  }
  report.bim = st.rows[bim].name;
  report.bim_test_accuracy = st.rows[bim].test_accuracy;
  report.majority_vote_test_accuracy = metrics::accuracy(majority_vote(member_test), st.test_labels);

  if (cfg.scheme_table_all_sizes) {
    for (std::size_t size = 1; size <= order.size(); ++size) {
      const std::span members(order.data(), size);
      const auto sub = fusion::subset(st.scores, members);
      std::vector<learners::ScoreMatrix> sub_test;
      for (auto m : members) sub_test.push_back(st.test_scores[m]);
      for (auto scheme : training.outcomes) {
        const auto outcome = fusion::fit_scheme(sub, st.train_labels, st.valid_labels, scheme.scheme,
                                                seeds.fusion, cfg.fusion);
        fusion::FusionModel m = training.model;
        m.member_ids.assign(members.begin(), members.end());
        m.member_names.clear();
        const auto predicted = fusion::predict_from_scores(with_outcome(m, outcome), sub_test,
                                                           cfg.fusion.execution);
        report.scheme_table.push_back({size, std::string(weights::to_string(outcome.scheme)),
                                       outcome.objective, outcome.train_accuracy,
                                       outcome.valid_accuracy,
                                       metrics::accuracy(predicted.labels, st.test_labels)});
      }
    }
  }
  return report;
}

std::vector<NoiseSummary> summarize_runs(const std::vector<RepetitionRecord>& runs,
                                         const std::vector<double>& noise_levels,
                                         const std::vector<std::string>& schemes) {
  std::vector<NoiseSummary> out;
  for (double level : noise_levels) {
    NoiseSummary summary;
    summary.noise = level;
    std::vector<double> bem, bim, mv;
    std::vector<std::vector<double>> per_scheme(schemes.size());
    for (const auto& r : runs) {
      if (r.noise != level) continue;
      if (!r.ok) {
        ++summary.failures;
        continue;
      }
      bem.push_back(r.bem_test_accuracy);
      bim.push_back(r.bim_test_accuracy);
      mv.push_back(r.majority_vote_test_accuracy);
      for (std::size_t s = 0; s < schemes.size() && s < r.scheme_test_accuracy.size(); ++s) {
        per_scheme[s].push_back(r.scheme_test_accuracy[s]);
      }
    }
    summary.methods.push_back({"bem", stats::summarize(bem)});
    summary.methods.push_back({"bim", stats::summarize(bim)});
    summary.methods.push_back({"majority_vote", stats::summarize(mv)});
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      summary.methods.push_back({schemes[s], stats::summarize(per_scheme[s])});
    }
    out.push_back(std::move(summary));
  }
  return out;
}

SweepReport noise_sweep(const data::Dataset& dataset, const ExperimentConfig& cfg) {
  cfg.validate();
  SweepReport report;
  report.dataset = dataset.name;
  report.master_seed = cfg.seed;
  report.repetitions = cfg.repetitions;
  // Reported scheme columns follow the order train_fusion tries them.
  std::vector<weights::Scheme> tried{weights::Scheme::W0};
  for (auto s : cfg.schemes) {
    if (std::find(tried.begin(), tried.end(), s) == tried.end()) tried.push_back(s);
  }
  for (auto s : tried) report.schemes.emplace_back(weights::to_string(s));

  const std::size_t total = cfg.noise_levels.size() * cfg.repetitions;
  report.runs.resize(total);
  const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const auto task = static_cast<std::size_t>(t);
    const std::size_t level = task / cfg.repetitions;
    const std::size_t rep = task % cfg.repetitions;
    auto& rec = report.runs[task];
    rec.noise = cfg.noise_levels[level];
    rec.repetition = rep;
    rec.seed = child_seed(cfg.seed, level, rep, cfg.repetitions);
    try {
      const auto run = run_pipeline(dataset, cfg, rec.seed, rec.noise);
      rec.bim = run.bim;
      rec.bem_scheme = run.bem_scheme;
      rec.ensemble_size = run.selected_size;
      rec.bim_test_accuracy = run.bim_test_accuracy;
      rec.bem_test_accuracy = run.bem_test_accuracy;
      rec.majority_vote_test_accuracy = run.majority_vote_test_accuracy;
      for (const auto& row : run.schemes) rec.scheme_test_accuracy.push_back(row.test_accuracy);
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  }
  report.summaries = summarize_runs(report.runs, cfg.noise_levels, report.schemes);
  return report;
}

}  // namespace evifuse::experiments
