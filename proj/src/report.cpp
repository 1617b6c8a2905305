#include "evifuse/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "evifuse/error.hpp"

namespace evifuse::metrics {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConfusionMatrix, tp, fp, fn, tn)
}  // namespace evifuse::metrics

namespace evifuse::stats {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoxStats, count, min, q1, median, q3, max, mean)
}  // namespace evifuse::stats

namespace evifuse::fusion {
void to_json(nlohmann::json& j, const FusionModel& m) { j = nlohmann::json::parse(fusion::to_json(m)); }
void from_json(const nlohmann::json& j, FusionModel& m) { m = model_from_json(j.dump()); }
}  // namespace evifuse::fusion

namespace evifuse::experiments {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassifierRow, name, train_accuracy, cv_accuracy, valid_accuracy,
                                   test_accuracy, mutual_information, rank, cv_confusion)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SelectionRow, size, members, train_accuracy, valid_accuracy,
                                   mean_accuracy)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SchemeRow, size, scheme, objective, train_accuracy, valid_accuracy,
                                   test_accuracy)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunReport, dataset, seed, noise, train_size, valid_size, test_size,
                                   imbalance_ratio, classifiers, selection, selected_size,
                                   selection_rule, tie_break_cascade, ensemble, schemes, scheme_table,
                                   bim, bim_test_accuracy, bem_scheme, bem_valid_accuracy,
                                   bem_test_accuracy, majority_vote_test_accuracy, test_labels,
                                   bem_test_predictions, model)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RepetitionRecord, noise, repetition, seed, ok, error, bim,
                                   bem_scheme, ensemble_size, bim_test_accuracy, bem_test_accuracy,
                                   majority_vote_test_accuracy, scheme_test_accuracy)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MethodSummary, method, stats)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NoiseSummary, noise, failures, methods)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SweepReport, dataset, master_seed, repetitions, schemes, runs,
                                   summaries)
}  // namespace evifuse::experiments

namespace evifuse::report {

namespace {

using experiments::RunReport;
using experiments::SweepReport;

template <class T>
T parse_report(const std::string& text) {
  try {
    return nlohmann::json::parse(text).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report JSON: ") + e.what());
  }
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Accumulates rows and renders them with left-aligned padded columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::string out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::string line;
      for (std::size_t c = 0; c < rows_[i].size(); ++c) {
        if (c) line += "  ";
        line += rows_[i][c];
        if (c + 1 < rows_[i].size()) line.append(width[c] - rows_[i][c].size(), ' ');
      }
      out += line + "\n";
      if (i == 0) {
        std::size_t total = 0;
        for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
        out += std::string(total, '-') + "\n";
      }
    }
    return out;
  }

  std::string csv() const {
    std::string out;
    for (const auto& r : rows_) out += join(r, ",") + "\n";
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

// CSV cells use round-trip formatting; text tables use fixed digits.
std::string exact(double v) { return nlohmann::json(v).dump(); }

Table classifier_table(const RunReport& r, bool text) {
  Table t({"bim", "classifier", "train", "cv", "valid", "test", "mi_bits", "rank"});
  for (const auto& c : r.classifiers) {
    const auto f = [&](double v) { return text ? fixed(v) : exact(v); };
    t.add({c.name == r.bim ? "*" : "", c.name, f(c.train_accuracy), f(c.cv_accuracy),
           f(c.valid_accuracy), f(c.test_accuracy), f(c.mutual_information), std::to_string(c.rank)});
  }
  return t;
}

Table selection_table(const RunReport& r, bool text) {
  Table t({"selected", "size", "train", "valid", "mean", "members"});
  for (const auto& s : r.selection) {
    const auto f = [&](double v) { return text ? fixed(v) : exact(v); };
    t.add({s.size == r.selected_size ? "*" : "", std::to_string(s.size), f(s.train_accuracy),
           f(s.valid_accuracy), f(s.mean_accuracy), join(s.members, text ? " " : ";")});
  }
  return t;
}

Table scheme_table(const RunReport& r, const std::vector<experiments::SchemeRow>& rows, bool text) {
  Table t({"bem", "size", "scheme", "objective", "train", "valid", "test"});
  for (const auto& s : rows) {
    const auto f = [&](double v) { return text ? fixed(v) : exact(v); };
    const bool is_bem = s.scheme == r.bem_scheme && s.size == r.selected_size && &rows == &r.schemes;
    t.add({is_bem ? "*" : "", std::to_string(s.size), s.scheme, f(s.objective), f(s.train_accuracy),
           f(s.valid_accuracy), f(s.test_accuracy)});
  }
  return t;
}

Table summary_table(const RunReport& r, bool text) {
  const auto f = [&](double v) { return text ? fixed(v) : exact(v); };
  Table t({"method", "model", "test"});
  t.add({"BIM", r.bim, f(r.bim_test_accuracy)});
  t.add({"BEM", r.bem_scheme + " over " + join(r.ensemble, text ? " " : ";"), f(r.bem_test_accuracy)});
  t.add({"majority_vote", join(r.ensemble, text ? " " : ";"), f(r.majority_vote_test_accuracy)});
  return t;
}

Table sweep_summary_table(const SweepReport& r, bool text) {
  const auto f = [&](double v) { return text ? fixed(v) : exact(v); };
  Table t({"noise", "method", "n", "min", "q1", "median", "q3", "max", "mean", "failures"});
  for (const auto& s : r.summaries) {
    for (const auto& m : s.methods) {
      t.add({f(s.noise), m.method, std::to_string(m.stats.count), f(m.stats.min), f(m.stats.q1),
             f(m.stats.median), f(m.stats.q3), f(m.stats.max), f(m.stats.mean),
             std::to_string(s.failures)});
    }
  }
  return t;
}

Table sweep_runs_table(const SweepReport& r) {
  std::vector<std::string> header{"noise", "repetition", "seed", "ok", "bim", "bem_scheme",
                                  "ensemble_size", "bim_test", "bem_test", "majority_vote_test"};
  for (const auto& s : r.schemes) header.push_back(s + "_test");
  Table t(header);
  for (const auto& run : r.runs) {
    std::vector<std::string> row{exact(run.noise), std::to_string(run.repetition), std::to_string(run.seed),
                                 run.ok ? "1" : "0", run.bim, run.bem_scheme,
                                 std::to_string(run.ensemble_size), exact(run.bim_test_accuracy),
                                 exact(run.bem_test_accuracy), exact(run.majority_vote_test_accuracy)};
    for (std::size_t s = 0; s < r.schemes.size(); ++s) {
      row.push_back(s < run.scheme_test_accuracy.size() ? exact(run.scheme_test_accuracy[s]) : "");
    }
    t.add(std::move(row));
  }
  return t;
}

}  // namespace

std::string to_json(const RunReport& report) { return nlohmann::json(report).dump(2) + "\n"; }
std::string to_json(const SweepReport& report) { return nlohmann::json(report).dump(2) + "\n"; }

RunReport run_report_from_json(const std::string& text) { return parse_report<RunReport>(text); }
SweepReport sweep_report_from_json(const std::string& text) { return parse_report<SweepReport>(text); }

std::string to_text(const RunReport& r) {
  std::ostringstream os;
  os << "dataset " << r.dataset << "  seed " << r.seed << "  noise " << fixed(r.noise) << "  IR "
     << fixed(r.imbalance_ratio, 2) << "\n";
  os << "split train/valid/test " << r.train_size << "/" << r.valid_size << "/" << r.test_size << "\n\n";
  os << "Classifiers (* = BIM)\n" << classifier_table(r, true).render();
  if (!r.selection.empty()) {
    os << "\nEnsemble selection (decided by " << r.selection_rule << ")\n"
       << selection_table(r, true).render();
  }
  if (!r.schemes.empty()) {
    os << "\nWeighting schemes (* = BEM)\n" << scheme_table(r, r.schemes, true).render();
  }
  if (!r.scheme_table.empty()) {
    os << "\nSchemes by ensemble size\n" << scheme_table(r, r.scheme_table, true).render();
  }
  if (!r.bem_scheme.empty()) os << "\nSummary\n" << summary_table(r, true).render();
  return os.str();
}

std::string to_text(const SweepReport& r) {
  std::ostringstream os;
  os << "dataset " << r.dataset << "  master seed " << r.master_seed << "  repetitions "
     << r.repetitions << "\n\n";
  os << "Test accuracy by noise level\n" << sweep_summary_table(r, true).render();
  return os.str();
}

std::vector<std::pair<std::string, std::string>> to_csv(const RunReport& r) {
  std::vector<std::pair<std::string, std::string>> out{
      {"classifiers.csv", classifier_table(r, false).csv()},
      {"selection.csv", selection_table(r, false).csv()},
      {"schemes.csv", scheme_table(r, r.schemes, false).csv()},
      {"summary.csv", summary_table(r, false).csv()},
  };
  if (!r.scheme_table.empty()) out.emplace_back("scheme_table.csv", scheme_table(r, r.scheme_table, false).csv());
  return out;
}

std::vector<std::pair<std::string, std::string>> to_csv(const SweepReport& r) {
  return {{"sweep_runs.csv", sweep_runs_table(r).csv()},
          {"sweep_summary.csv", sweep_summary_table(r, false).csv()}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

namespace {

template <class R>
std::vector<std::filesystem::path> emit(const R& report, const std::vector<Format>& formats,
                                        const std::filesystem::path& dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (auto format : formats) {
    switch (format) {
      case Format::Json:
        written.push_back(dir / (stem + ".json"));
        write_file(written.back(), to_json(report));
        break;
      case Format::Text:
        written.push_back(dir / (stem + ".txt"));
        write_file(written.back(), to_text(report));
        break;
      case Format::Csv:
        for (const auto& [name, body] : to_csv(report)) {
          written.push_back(dir / name);
          write_file(written.back(), body);
        }
        break;
    }
  }
  return written;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::vector<Format>& formats,
                                               const std::filesystem::path& dir) {
  return emit(report, formats, dir, "report");
}

std::vector<std::filesystem::path> emit_report(const SweepReport& report,
                                               const std::vector<Format>& formats,
                                               const std::filesystem::path& dir) {
  return emit(report, formats, dir, "sweep");
}

}  // namespace evifuse::report
