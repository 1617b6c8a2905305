#include "evifuse/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "evifuse/csv.hpp"
#include "evifuse/error.hpp"
#include "evifuse/random.hpp"

namespace evifuse::data {

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.name = name;
  out.feature_names = feature_names;
  out.features = features.select_rows(rows);
  out.class_count = class_count;
  for (auto r : rows) out.labels.push_back(labels[r]);
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 std::optional<std::string> positive_label) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, path.string() + ": missing header");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  const auto header = csv::split(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw Error(ErrorKind::ParseError, path.string() + ": no column named '" + label_column + "'");
  }
  const auto label_pos = static_cast<std::size_t>(label_it - header.begin());

  Dataset ds;
  ds.name = path.stem().string();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_pos) ds.feature_names.emplace_back(header[c]);
  }
  ds.features = Matrix(0, ds.feature_names.size());

  std::vector<std::string> raw_labels;
  std::vector<double> row(ds.feature_names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::ParseError,
                  path.string() + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()),
                  line_no);
    }
    bool ok = !fields[label_pos].empty();
    for (std::size_t c = 0, f = 0; ok && c < fields.size(); ++c) {
      if (c == label_pos) continue;
      const auto v = csv::parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        ok = false;
        break;
      }
      row[f++] = *v;
    }
    if (!ok) {
      ++ds.rejected_rows;
      continue;
    }
    ds.features.append_row(row);
    raw_labels.emplace_back(fields[label_pos]);
  }

  if (raw_labels.empty()) throw Error(ErrorKind::SingleClass, path.string() + ": no usable rows");
  const std::string positive = positive_label.value_or(raw_labels.front());
  std::size_t positives = 0;
  for (const auto& l : raw_labels) {
    const bool is_positive = l == positive;
    positives += is_positive;
    ds.labels.push_back(is_positive ? 0 : 1);
  }
  if (positives == 0 || positives == raw_labels.size()) {
    throw Error(ErrorKind::SingleClass,
                path.string() + ": label column has a single class (positive '" + positive + "')");
  }
  return ds;
}

double imbalance_ratio(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.class_count, 0);
  for (Label l : ds.labels) ++counts.at(l);
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  if (*lo == 0) throw Error(ErrorKind::SingleClass, "a class has no samples");
  return static_cast<double>(*hi) / static_cast<double>(*lo);
}

SplitIndices stratified_split(std::span<const Label> labels, std::size_t class_count,
                              const SplitFractions& fr, std::uint64_t seed) {
  if (!(fr.train > 0.0) || !(fr.valid > 0.0) || !(fr.test > 0.0) ||
      std::abs(fr.train + fr.valid + fr.test - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidFractions, "split fractions must be positive and sum to 1");
  }
  constexpr double kSlack = 1e-9;
  Rng rng(seed);
  SplitIndices out;
  for (std::size_t c = 0; c < class_count; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    const auto n = static_cast<double>(members.size());
    auto n_valid = static_cast<std::size_t>(std::floor(n * fr.valid + kSlack));
    auto n_train = static_cast<std::size_t>(std::ceil(n * fr.train - kSlack));
    n_train = std::min(n_train, members.size() - n_valid);
    if (n_train == 0) {
      throw Error(ErrorKind::ClassTooSmall,
                  "class " + std::to_string(c) + " gets no training samples", c);
    }
    rng.shuffle(std::span(members));
    const auto train_end = members.begin() + static_cast<std::ptrdiff_t>(n_train);
    const auto valid_end = train_end + static_cast<std::ptrdiff_t>(n_valid);
    out.train.insert(out.train.end(), members.begin(), train_end);
    out.valid.insert(out.valid.end(), train_end, valid_end);
    out.test.insert(out.test.end(), valid_end, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.valid.begin(), out.valid.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

SplitIndices stratified_split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed) {
  return stratified_split(ds.labels, ds.class_count, fractions, seed);
}

std::vector<double> column_rms(const Matrix& features) {
  std::vector<double> rms(features.cols(), 0.0);
  if (features.rows() == 0) return rms;
  for (std::size_t f = 0; f < features.cols(); ++f) {
    double sq = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) sq += features(i, f) * features(i, f);
    rms[f] = std::sqrt(sq / static_cast<double>(features.rows()));
  }
  return rms;
}

Dataset add_noise(const Dataset& ds, double nsr, std::uint64_t seed,
                  std::optional<std::span<const std::size_t>> rows) {
  if (!(nsr >= 0.0)) throw Error(ErrorKind::InvalidConfig, "noise-to-signal ratio must be >= 0");
  Dataset out = ds;
  if (nsr == 0.0) return out;
  const auto rms = column_rms(ds.features);
  // One stream per column so the noise of a column does not depend on the
  // number of columns polluted before it.
  for (std::size_t f = 0; f < ds.feature_count(); ++f) {
    if (rms[f] == 0.0) continue;
    const double sd = nsr * rms[f];
    Rng rng(derive_seed(seed, f));
    if (rows) {
      for (auto r : *rows) out.features(r, f) += sd * rng.normal();
    } else {
      for (std::size_t i = 0; i < ds.samples(); ++i) out.features(i, f) += sd * rng.normal();
    }
  }
  return out;
}

}  // namespace evifuse::data
