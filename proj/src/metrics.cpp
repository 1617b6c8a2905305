#include "evifuse/metrics.hpp"

#include <string>

#include "evifuse/error.hpp"

namespace evifuse::metrics {

namespace {

void require_same_length(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " labels");
  }
}

double rate(std::size_t numerator, std::size_t denominator, const char* name) {
  if (denominator == 0) throw Error(ErrorKind::UndefinedRate, std::string(name) + " has no samples");
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> truth,
                          Label positive_class) {
  require_same_length(predicted, truth);
  if (positive_class > 1) throw Error(ErrorKind::NonBinaryTask, "positive class must be 0 or 1");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] > 1 || truth[i] > 1) {
      throw Error(ErrorKind::NonBinaryTask, "label outside {0,1}", i);
    }
    const bool predicted_positive = predicted[i] == positive_class;
    const bool actually_positive = truth[i] == positive_class;
    if (predicted_positive) {
      actually_positive ? ++cm.tp : ++cm.fp;
    } else {
      actually_positive ? ++cm.fn : ++cm.tn;
    }
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) { return rate(cm.tp + cm.tn, cm.total(), "accuracy"); }
double sensitivity(const ConfusionMatrix& cm) { return rate(cm.tp, cm.tp + cm.fn, "sensitivity"); }
double specificity(const ConfusionMatrix& cm) { return rate(cm.tn, cm.tn + cm.fp, "specificity"); }
double ppv(const ConfusionMatrix& cm) { return rate(cm.tp, cm.tp + cm.fp, "PPV"); }
double npv(const ConfusionMatrix& cm) { return rate(cm.tn, cm.tn + cm.fn, "NPV"); }

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
  require_same_length(predicted, truth);
  if (predicted.empty()) throw Error(ErrorKind::UndefinedRate, "accuracy of no samples");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace evifuse::metrics
