#include "evifuse/baselearners.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "evifuse/csv.hpp"
#include "evifuse/error.hpp"
#include "evifuse/random.hpp"

namespace evifuse::learners {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void softmax_row(std::span<double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  if (top == kNegInf) {
    std::fill(logits.begin(), logits.end(), 1.0 / static_cast<double>(logits.size()));
    return;
  }
  double total = 0.0;
  for (double& v : logits) {
    v = (v == kNegInf) ? 0.0 : std::exp(v - top);
    total += v;
  }
  for (double& v : logits) v /= total;
}

std::vector<std::size_t> class_counts(std::span<const Label> labels, std::size_t class_count) {
  std::vector<std::size_t> counts(class_count, 0);
  for (Label l : labels) ++counts.at(l);
  return counts;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes on standardized features.

class GaussianNb final : public Model {
 public:
  GaussianNb(const Matrix& raw, std::span<const Label> labels, std::size_t class_count)
      : standardizer_(Standardizer::fit(raw)), class_count_(class_count) {
    const Matrix x = standardizer_.apply(raw);
    const std::size_t d = x.cols();
    const auto counts = class_counts(labels, class_count);
    mean_ = Matrix(class_count, d);
    var_ = Matrix(class_count, d);
    log_prior_.assign(class_count, kNegInf);

    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t f = 0; f < d; ++f) mean_(labels[i], f) += x(i, f);
    }
    for (std::size_t c = 0; c < class_count; ++c) {
      if (counts[c] == 0) continue;
      log_prior_[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(x.rows()));
      for (std::size_t f = 0; f < d; ++f) mean_(c, f) /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t f = 0; f < d; ++f) {
        const double diff = x(i, f) - mean_(labels[i], f);
        var_(labels[i], f) += diff * diff;
      }
    }
    double max_var = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
      double m = 0.0, v = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) m += x(i, f);
      m /= static_cast<double>(x.rows());
      for (std::size_t i = 0; i < x.rows(); ++i) v += (x(i, f) - m) * (x(i, f) - m);
      max_var = std::max(max_var, v / static_cast<double>(x.rows()));
    }
    const double smoothing = 1e-9 * (max_var > 0.0 ? max_var : 1.0);
    for (std::size_t c = 0; c < class_count; ++c) {
      for (std::size_t f = 0; f < d; ++f) {
        if (counts[c] > 0) var_(c, f) /= static_cast<double>(counts[c]);
        var_(c, f) += smoothing;
      }
    }
  }

  std::size_t feature_count() const override { return standardizer_.mean.size(); }

  Matrix scores(const Matrix& raw) const override {
    const Matrix x = standardizer_.apply(raw);
    Matrix out(x.rows(), class_count_);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto row = out.row(i);
      for (std::size_t c = 0; c < class_count_; ++c) {
        if (log_prior_[c] == kNegInf) {
          row[c] = kNegInf;
          continue;
        }
        double ll = log_prior_[c];
        for (std::size_t f = 0; f < x.cols(); ++f) {
          const double diff = x(i, f) - mean_(c, f);
          ll -= 0.5 * (std::log(2.0 * M_PI * var_(c, f)) + diff * diff / var_(c, f));
        }
        row[c] = ll;
      }
      softmax_row(row);
    }
    return out;
  }

 private:
  Standardizer standardizer_;
  std::size_t class_count_;
  Matrix mean_;
  Matrix var_;
  std::vector<double> log_prior_;
};

// ---------------------------------------------------------------------------
// Linear discriminant analysis with pooled within-class covariance.

// In-place Cholesky of a symmetric d x d matrix; false if not positive definite.
bool cholesky(Matrix& a) {
  const std::size_t d = a.rows();
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > 0.0)) return false;
    a(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
      a(i, j) = v / a(j, j);
    }
  }
  return true;
}

std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b) {
  const std::size_t d = l.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (std::size_t ii = d; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < d; ++k) y[ii] -= l(k, ii) * y[k];
    y[ii] /= l(ii, ii);
  }
  return y;
}

class Lda final : public Model {
 public:
  Lda(const Matrix& raw, std::span<const Label> labels, std::size_t class_count)
      : standardizer_(Standardizer::fit(raw)), class_count_(class_count) {
    const Matrix x = standardizer_.apply(raw);
    const std::size_t d = x.cols();
    const auto counts = class_counts(labels, class_count);
    Matrix mean(class_count, d);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t f = 0; f < d; ++f) mean(labels[i], f) += x(i, f);
    }
    std::size_t present = 0;
    for (std::size_t c = 0; c < class_count; ++c) {
      if (counts[c] == 0) continue;
      ++present;
      for (std::size_t f = 0; f < d; ++f) mean(c, f) /= static_cast<double>(counts[c]);
    }

    Matrix cov(d, d);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t a = 0; a < d; ++a) {
        const double da = x(i, a) - mean(labels[i], a);
        for (std::size_t b = 0; b <= a; ++b) cov(a, b) += da * (x(i, b) - mean(labels[i], b));
      }
    }
    const double dof = x.rows() > present ? static_cast<double>(x.rows() - present)
                                          : static_cast<double>(x.rows());
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        cov(a, b) /= dof;
        cov(b, a) = cov(a, b);
      }
      trace += cov(a, a);
    }
    double ridge = 1e-6 * (trace > 0.0 ? trace / static_cast<double>(d) : 1.0);
    Matrix factor;
    while (true) {
      factor = cov;
      for (std::size_t a = 0; a < d; ++a) factor(a, a) += ridge;
      if (cholesky(factor)) break;
      ridge *= 10.0;
    }

    coef_ = Matrix(class_count, d);
    intercept_.assign(class_count, kNegInf);
    for (std::size_t c = 0; c < class_count; ++c) {
      if (counts[c] == 0) continue;
      const auto a = cholesky_solve(factor, mean.row(c));
      double quad = 0.0;
      for (std::size_t f = 0; f < d; ++f) {
        coef_(c, f) = a[f];
        quad += a[f] * mean(c, f);
      }
      intercept_[c] = -0.5 * quad +
                      std::log(static_cast<double>(counts[c]) / static_cast<double>(x.rows()));
    }
  }

  std::size_t feature_count() const override { return standardizer_.mean.size(); }

  Matrix scores(const Matrix& raw) const override {
    const Matrix x = standardizer_.apply(raw);
    Matrix out(x.rows(), class_count_);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto row = out.row(i);
      for (std::size_t c = 0; c < class_count_; ++c) {
        if (intercept_[c] == kNegInf) {
          row[c] = kNegInf;
          continue;
        }
        double v = intercept_[c];
        for (std::size_t f = 0; f < x.cols(); ++f) v += coef_(c, f) * x(i, f);
        row[c] = v;
      }
      softmax_row(row);
    }
    return out;
  }

 private:
  Standardizer standardizer_;
  std::size_t class_count_;
  Matrix coef_;
  std::vector<double> intercept_;
};

// ---------------------------------------------------------------------------
// k nearest neighbours on standardized features.

class Knn final : public Model {
 public:
  Knn(const Matrix& raw, std::span<const Label> labels, std::size_t class_count, std::size_t k,
      kernels::Execution exec)
      : standardizer_(Standardizer::fit(raw)),
        train_(standardizer_.apply(raw)),
        labels_(labels.begin(), labels.end()),
        class_count_(class_count),
        k_(k),
        exec_(exec) {}

  std::size_t feature_count() const override { return standardizer_.mean.size(); }

  Matrix scores(const Matrix& raw) const override {
    return kernels::knn_scores(exec_, train_, labels_, class_count_, standardizer_.apply(raw), k_);
  }

 private:
  Standardizer standardizer_;
  Matrix train_;
  LabelVector labels_;
  std::size_t class_count_;
  std::size_t k_;
  kernels::Execution exec_;
};

// ---------------------------------------------------------------------------
// CART with Gini impurity.

constexpr std::size_t kTreeMaxDepth = 8;
constexpr std::size_t kTreeMinLeaf = 2;

class DecisionTree final : public Model {
 public:
  DecisionTree(const Matrix& x, std::span<const Label> labels, std::size_t class_count)
      : feature_count_(x.cols()), class_count_(class_count) {
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    grow(x, labels, rows, 0);
  }

  std::size_t feature_count() const override { return feature_count_; }

  Matrix scores(const Matrix& x) const override {
    Matrix out(x.rows(), class_count_);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      std::size_t node = 0;
      while (!nodes_[node].leaf) {
        node = x(i, nodes_[node].feature) <= nodes_[node].threshold ? nodes_[node].left
                                                                    : nodes_[node].right;
      }
      std::copy(nodes_[node].proportions.begin(), nodes_[node].proportions.end(),
                out.row(i).begin());
    }
    return out;
  }

 private:
  struct Node {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<double> proportions;
  };

  static double gini(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
      const double p = static_cast<double>(c) / static_cast<double>(total);
      sum_sq += p * p;
    }
    return 1.0 - sum_sq;
  }

  std::size_t grow(const Matrix& x, std::span<const Label> labels,
                   std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    std::vector<std::size_t> counts(class_count_, 0);
    for (std::size_t r : rows) ++counts[labels[r]];
    nodes_[id].proportions.resize(class_count_);
    for (std::size_t c = 0; c < class_count_; ++c) {
      nodes_[id].proportions[c] = static_cast<double>(counts[c]) / static_cast<double>(rows.size());
    }

    const double parent = gini(counts, rows.size());
    if (depth >= kTreeMaxDepth || parent == 0.0 || rows.size() < 2 * kTreeMinLeaf) return id;

    // Best split: lowest weighted child impurity; first found wins ties.
    double best_score = parent - 1e-12;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;
    std::vector<std::size_t> sorted = rows;
    std::vector<std::size_t> left(class_count_);
    std::vector<std::size_t> right(class_count_);
    const double n = static_cast<double>(rows.size());
    for (std::size_t f = 0; f < x.cols(); ++f) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
      std::fill(left.begin(), left.end(), 0);
      right = counts;
      for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
        const Label l = labels[sorted[pos]];
        ++left[l];
        --right[l];
        const std::size_t n_left = pos + 1;
        const std::size_t n_right = sorted.size() - n_left;
        const double lo = x(sorted[pos], f);
        const double hi = x(sorted[pos + 1], f);
        if (lo == hi || n_left < kTreeMinLeaf || n_right < kTreeMinLeaf) continue;
        const double score = (static_cast<double>(n_left) * gini(left, n_left) +
                              static_cast<double>(n_right) * gini(right, n_right)) / n;
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = lo + 0.5 * (hi - lo);
          found = true;
        }
      }
    }
    if (!found) return id;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      (x(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    nodes_[id].leaf = false;
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const std::size_t l = grow(x, labels, left_rows, depth + 1);
    const std::size_t r = grow(x, labels, right_rows, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::size_t feature_count_;
  std::size_t class_count_;
  std::vector<Node> nodes_;
};

void check_labels(std::span<const Label> labels, std::size_t class_count) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) {
      throw Error(ErrorKind::DimensionMismatch, "label outside the frame", i);
    }
  }
}

ScoreMatrix named(Matrix scores, const std::string& id) {
  ScoreMatrix sm{std::move(scores), id};
  sm.validate();
  return sm;
}

}  // namespace

void ScoreMatrix::validate() const {
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    double total = 0.0;
    for (double v : scores.row(i)) {
      if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12) {
        throw Error(ErrorKind::NonStochasticRow, classifier_id + " row " + std::to_string(i), i);
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kRowSumTolerance) {
      throw Error(ErrorKind::NonStochasticRow,
                  classifier_id + " row " + std::to_string(i) + " sums to " + std::to_string(total), i);
    }
  }
}

LabelVector ScoreMatrix::hard_labels() const {
  LabelVector out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    out[i] = static_cast<Label>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

PoolSpec PoolSpec::builtin() {
  return PoolSpec{{LearnerConfig::tree(), LearnerConfig::naive_bayes(), LearnerConfig::lda(),
                   LearnerConfig::knn(5), LearnerConfig::knn(10), LearnerConfig::knn(15)}};
}

PoolSpec PoolSpec::eleven_slot(const std::vector<std::filesystem::path>& external_scores) {
  if (external_scores.size() != 5) {
    throw Error(ErrorKind::InvalidConfig, "the eleven-slot pool needs 5 score files");
  }
  return PoolSpec{{LearnerConfig::tree(), LearnerConfig::naive_bayes(), LearnerConfig::lda(),
                   LearnerConfig::external("MCS", external_scores[0]), LearnerConfig::knn(5),
                   LearnerConfig::knn(10), LearnerConfig::knn(15),
                   LearnerConfig::external("SVD1", external_scores[1]),
                   LearnerConfig::external("SVD5", external_scores[2]),
                   LearnerConfig::external("SVM", external_scores[3]),
                   LearnerConfig::external("NN", external_scores[4])}};
}

ExternalScores load_external_scores(const std::filesystem::path& path, const SplitSizes& sizes,
                                    std::size_t class_count) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ExternalScoresMissing, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  const auto header = csv::split(line);
  if (header.size() != 2 + class_count || header[0] != "split" || header[1] != "row") {
    throw Error(ErrorKind::ParseError, path.string() + ": expected header split,row,score_0..");
  }
  for (std::size_t c = 0; c < class_count; ++c) {
    if (header[2 + c] != "score_" + std::to_string(c)) {
      throw Error(ErrorKind::ParseError, path.string() + ": bad column " + std::string(header[2 + c]));
    }
  }

  const std::string id = path.stem().string();
  ExternalScores out{{Matrix(), id}, {Matrix(), id}, {Matrix(), id}};
  std::size_t line_no = 1;
  std::vector<double> row(class_count);
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 2 + class_count) {
      throw Error(ErrorKind::ParseError, path.string() + ": wrong field count", line_no);
    }
    ScoreMatrix* target = nullptr;
    if (fields[0] == "train") target = &out.train;
    else if (fields[0] == "valid") target = &out.valid;
    else if (fields[0] == "test") target = &out.test;
    else throw Error(ErrorKind::ParseError, path.string() + ": unknown split", line_no);

    const auto index = csv::parse_double(fields[1]);
    if (!index || *index != static_cast<double>(target->rows())) {
      throw Error(ErrorKind::ParseError, path.string() + ": rows must be contiguous from 0", line_no);
    }
    double total = 0.0;
    for (std::size_t c = 0; c < class_count; ++c) {
      const auto v = csv::parse_double(fields[2 + c]);
      if (!v) throw Error(ErrorKind::ParseError, path.string() + ": non-numeric score", line_no);
      if (!std::isfinite(*v) || *v < 0.0 || *v > 1.0) {
        throw Error(ErrorKind::NonStochasticRow, path.string() + ": score outside [0,1]", line_no);
      }
      row[c] = *v;
      total += *v;
    }
    if (std::abs(total - 1.0) > kExternalRowTolerance) {
      throw Error(ErrorKind::NonStochasticRow,
                  path.string() + ": row sums to " + std::to_string(total), line_no);
    }
    for (double& v : row) v /= total;
    target->scores.append_row(row);
  }

  const auto check = [&](const ScoreMatrix& sm, std::size_t expected, const char* split) {
    if (sm.rows() != expected) {
      throw Error(ErrorKind::RowCountMismatch, path.string() + ": " + split + " has " +
                                                   std::to_string(sm.rows()) + " rows, expected " +
                                                   std::to_string(expected));
    }
  };
  check(out.train, sizes.train, "train");
  check(out.valid, sizes.valid, "valid");
  check(out.test, sizes.test, "test");
  for (auto* sm : {&out.train, &out.valid, &out.test}) {
    if (sm->rows() == 0) sm->scores = Matrix(0, class_count);
  }
  return out;
}

Standardizer Standardizer::fit(const Matrix& features) {
  const std::size_t d = features.cols();
  Standardizer s{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  if (features.rows() == 0) return s;
  const double n = static_cast<double>(features.rows());
  for (std::size_t f = 0; f < d; ++f) {
    double mean = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) mean += features(i, f);
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
      const double diff = features(i, f) - mean;
      var += diff * diff;
    }
    const double sd = std::sqrt(var / n);
    s.mean[f] = mean;
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& features) const {
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t f = 0; f < features.cols(); ++f) {
      out(i, f) = (features(i, f) - mean[f]) / scale[f];
    }
  }
  return out;
}

std::unique_ptr<Model> fit_model(const LearnerConfig& config, const Matrix& features,
                                 std::span<const Label> labels, std::size_t class_count,
                                 kernels::Execution exec) {
  if (features.rows() != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "features and labels differ in length");
  }
  if (features.rows() == 0) throw Error(ErrorKind::TooFewSamples, "empty training set");
  check_labels(labels, class_count);
  switch (config.kind) {
    case LearnerKind::DecisionTree:
      return std::make_unique<DecisionTree>(features, labels, class_count);
    case LearnerKind::GaussianNB:
      return std::make_unique<GaussianNb>(features, labels, class_count);
    case LearnerKind::LDA:
      return std::make_unique<Lda>(features, labels, class_count);
    case LearnerKind::KNN:
      if (config.k == 0) throw Error(ErrorKind::InvalidConfig, "kNN needs k >= 1");
      return std::make_unique<Knn>(features, labels, class_count, config.k, exec);
    case LearnerKind::External:
      break;
  }
  throw Error(ErrorKind::InvalidConfig, config.name + " is not a built-in learner");
}

std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t folds,
                                          std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t classes =
      labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
  std::vector<std::size_t> assignment(labels.size(), 0);
  std::size_t running = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    rng.shuffle(std::span(members));
    for (std::size_t i : members) assignment[i] = running++ % folds;
  }
  return assignment;
}

std::vector<TrainedClassifier> fit(const PoolSpec& pool, const Matrix& train_features,
                                   std::span<const Label> train_labels, std::size_t class_count,
                                   const FitOptions& options) {
  if (pool.learners.empty()) throw Error(ErrorKind::InvalidConfig, "empty classifier pool");
  if (train_features.rows() != train_labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "features and labels differ in length");
  }
  if (train_labels.size() < kCvFolds) {
    throw Error(ErrorKind::TooFewSamples,
                std::to_string(train_labels.size()) + " training samples for 10-fold CV");
  }
  check_labels(train_labels, class_count);

  const auto folds = stratified_folds(train_labels, kCvFolds, options.seed);
  std::vector<TrainedClassifier> out;
  out.reserve(pool.learners.size());
  for (const auto& config : pool.learners) {
    TrainedClassifier tc;
    tc.config = config;
    tc.class_count = class_count;
    if (config.kind == LearnerKind::External) {
      if (!options.split_sizes) {
        throw Error(ErrorKind::ExternalScoresMissing, config.name + ": split sizes unknown");
      }
      if (config.scores_path.empty() || !std::filesystem::exists(config.scores_path)) {
        throw Error(ErrorKind::ExternalScoresMissing,
                    config.name + ": no score file at '" + config.scores_path.string() + "'");
      }
      auto ext = load_external_scores(config.scores_path, *options.split_sizes, class_count);
      ext.train.classifier_id = ext.valid.classifier_id = ext.test.classifier_id = config.name;
      tc.cv_scores = ext.train;
      tc.external = std::move(ext);
    } else {
      tc.model = fit_model(config, train_features, train_labels, class_count, options.execution);
      Matrix oof(train_features.rows(), class_count);
      for (std::size_t fold = 0; fold < kCvFolds; ++fold) {
        std::vector<std::size_t> fit_rows;
        std::vector<std::size_t> held_rows;
        for (std::size_t i = 0; i < folds.size(); ++i) {
          (folds[i] == fold ? held_rows : fit_rows).push_back(i);
        }
        if (held_rows.empty()) continue;
        LabelVector fit_labels;
        for (std::size_t i : fit_rows) fit_labels.push_back(train_labels[i]);
        const auto model = fit_model(config, train_features.select_rows(fit_rows), fit_labels,
                                     class_count, options.execution);
        const Matrix held = model->scores(train_features.select_rows(held_rows));
        for (std::size_t j = 0; j < held_rows.size(); ++j) {
          std::copy(held.row(j).begin(), held.row(j).end(), oof.row(held_rows[j]).begin());
        }
      }
      tc.cv_scores = named(std::move(oof), config.name);
    }
    if (class_count == 2) {
      tc.cv_confusion = metrics::confusion(tc.cv_scores.hard_labels(), train_labels);
    }
    out.push_back(std::move(tc));
  }
  return out;
}

ScoreMatrix predict_scores(const TrainedClassifier& classifier, const Matrix& features) {
  if (classifier.is_external() || !classifier.model) {
    throw Error(ErrorKind::ExternalScoresMissing,
                classifier.name() + " only has scores for the splits in its score file");
  }
  if (features.cols() != classifier.model->feature_count()) {
    throw Error(ErrorKind::WidthMismatch, classifier.name() + ": expected " +
                                              std::to_string(classifier.model->feature_count()) +
                                              " features, got " + std::to_string(features.cols()));
  }
  return named(classifier.model->scores(features), classifier.name());
}

}  // namespace evifuse::learners
