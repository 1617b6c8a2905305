// evifuse: command-line front end for the evidential ensemble pipeline.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evifuse/csv.hpp"
#include "evifuse/error.hpp"
#include "evifuse/experiments.hpp"
#include "evifuse/fusion.hpp"
#include "evifuse/report.hpp"

namespace {

using namespace evifuse;
namespace ex = evifuse::experiments;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Options {
  std::string data;
  std::string label_col = "label";
  std::string positive;
  std::string splits = "0.5,0.25,0.25";
  std::string schemes = "all";
  std::string noise = "0";
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::vector<std::string> external;
  std::string formats = "json,text";
  std::string model;
  std::string input;
  bool all_sizes = false;
  bool test_only = false;
  bool row_norm = false;
  bool serial = false;
  bool coordinate = false;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& cell : csv::split(text)) {
    const auto v = csv::parse_double(csv::trim(cell));
    if (!v) throw Error(ErrorKind::InvalidConfig, std::string("bad ") + what + " value '" + std::string(cell) + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<weights::Scheme> parse_schemes(const std::string& text) {
  if (text == "all") return {weights::kAllSchemes.begin(), weights::kAllSchemes.end()};
  std::vector<weights::Scheme> out;
  for (const auto& cell : csv::split(text)) {
    const std::string name(csv::trim(cell));
    // "w0..w5" style ranges.
    if (const auto dots = name.find(".."); dots != std::string::npos) {
      const auto lo = weights::parse_scheme(name.substr(0, dots));
      const auto hi = weights::parse_scheme(name.substr(dots + 2));
      if (!lo || !hi) throw Error(ErrorKind::InvalidConfig, "bad scheme range '" + name + "'");
      for (auto i = weights::index_of(*lo); i <= weights::index_of(*hi); ++i) {
        out.push_back(weights::kAllSchemes[i]);
      }
      continue;
    }
    const auto s = weights::parse_scheme(name);
    if (!s) throw Error(ErrorKind::InvalidConfig, "unknown scheme '" + name + "'");
    out.push_back(*s);
  }
  return out;
}

std::vector<report::Format> parse_formats(const std::string& text) {
  std::vector<report::Format> out;
  for (const auto& cell : csv::split(text)) {
    const std::string f(csv::trim(cell));
    if (f == "json") out.push_back(report::Format::Json);
    else if (f == "csv") out.push_back(report::Format::Csv);
    else if (f == "text") out.push_back(report::Format::Text);
    else throw Error(ErrorKind::InvalidConfig, "unknown format '" + f + "'");
  }
  return out;
}

learners::PoolSpec parse_pool(const std::vector<std::string>& external) {
  if (external.empty()) return learners::PoolSpec::builtin();
  bool named = false;
  for (const auto& e : external) named = named || e.find('=') != std::string::npos;
  // Five bare paths fill the eleven-slot layout; anything else extends the
  // built-in pool.
  if (!named && external.size() == 5) {
    return learners::PoolSpec::eleven_slot({external.begin(), external.end()});
  }
  auto pool = learners::PoolSpec::builtin();
  for (const auto& e : external) {
    const auto eq = e.find('=');
    if (eq == std::string::npos) {
      pool.learners.push_back(learners::LearnerConfig::external(std::filesystem::path(e).stem().string(), e));
    } else {
      pool.learners.push_back(learners::LearnerConfig::external(e.substr(0, eq), e.substr(eq + 1)));
    }
  }
  return pool;
}

ex::ExperimentConfig make_config(const Options& o) {
  ex::ExperimentConfig cfg;
  if (o.data.empty()) throw Error(ErrorKind::InvalidConfig, "--data is required");
  cfg.data = o.data;
  cfg.label_column = o.label_col;
  if (!o.positive.empty()) cfg.positive_label = o.positive;
  const auto fr = parse_list(o.splits, "split");
  if (fr.size() != 3) throw Error(ErrorKind::InvalidFractions, "--splits needs three fractions");
  cfg.fractions = {fr[0], fr[1], fr[2]};
  cfg.schemes = parse_schemes(o.schemes);
  cfg.noise_levels = parse_list(o.noise, "noise");
  cfg.repetitions = o.reps;
  cfg.seed = o.seed;
  cfg.output_dir = o.out;
  cfg.pool = parse_pool(o.external);
  cfg.pollution = o.test_only ? ex::Pollution::TestOnly : ex::Pollution::AllSplits;
  cfg.scheme_table_all_sizes = o.all_sizes;
  cfg.fusion.proximity = o.row_norm ? kernels::ProximityMode::RowNorm : kernels::ProximityMode::Elementwise;
  cfg.fusion.execution = o.serial ? kernels::Execution::Serial : kernels::Execution::Parallel;
  cfg.fusion.optimizer.mode = o.coordinate ? fusion::OptimizationMode::Coordinate : fusion::OptimizationMode::Joint;
  cfg.validate();
  return cfg;
}

double single_noise(const ex::ExperimentConfig& cfg) {
  if (cfg.noise_levels.size() != 1) {
    throw Error(ErrorKind::InvalidConfig, "this verb takes a single --noise level; use sweep for several");
  }
  return cfg.noise_levels.front();
}

data::Dataset load(const ex::ExperimentConfig& cfg) {
  auto ds = data::load_csv(cfg.data, cfg.label_column, cfg.positive_label);
  if (ds.rejected_rows > 0) {
    std::cerr << "warning: dropped " << ds.rejected_rows << " rows with blank or non-numeric cells\n";
  }
  return ds;
}

void announce(const std::vector<std::filesystem::path>& written) {
  for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
}

ex::RunReport partial_report(const data::Dataset& ds, const ex::ExperimentConfig& cfg, const ex::PoolStage& st,
                             double noise) {
  ex::RunReport r;
  r.dataset = ds.name;
  r.seed = cfg.seed;
  r.noise = noise;
  r.train_size = st.split.train.size();
  r.valid_size = st.split.valid.size();
  r.test_size = st.split.test.size();
  r.imbalance_ratio = data::imbalance_ratio(ds);
  r.classifiers = st.rows;
  std::size_t bim = 0;
  for (std::size_t i = 1; i < st.rows.size(); ++i) {
    if (st.rows[i].test_accuracy > st.rows[bim].test_accuracy) bim = i;
  }
  r.bim = st.rows[bim].name;
  r.bim_test_accuracy = st.rows[bim].test_accuracy;
  return r;
}

int cmd_pool(const Options& o, bool rank_only) {
  const auto cfg = make_config(o);
  const auto ds = load(cfg);
  const double noise = single_noise(cfg);
  const auto st = ex::build_pool(ds, cfg, cfg.seed, noise);
  auto r = partial_report(ds, cfg, st, noise);
  if (rank_only) {
    std::sort(r.classifiers.begin(), r.classifiers.end(),
              [](const auto& a, const auto& b) { return a.rank < b.rank; });
  }
  std::cout << report::to_text(r);
  announce(report::emit_report(r, parse_formats(o.formats), cfg.output_dir));
  return kExitOk;
}

int cmd_select(const Options& o) {
  const auto cfg = make_config(o);
  const auto ds = load(cfg);
  const double noise = single_noise(cfg);
  const auto st = ex::build_pool(ds, cfg, cfg.seed, noise);
  auto r = partial_report(ds, cfg, st, noise);
  const auto sel = fusion::select_ensemble(st.scores, st.ranks, st.train_labels, st.valid_labels,
                                           ex::StageSeeds::from(cfg.seed).fusion, cfg.fusion);
  std::vector<std::size_t> order(st.ranks.size());
  for (std::size_t i = 0; i < st.ranks.size(); ++i) order[st.ranks[i] - 1] = i;
  for (const auto& c : sel.candidates) {
    ex::SelectionRow row{c.size, {}, c.train_accuracy, c.valid_accuracy, c.mean_accuracy()};
    for (std::size_t j = 0; j < c.size; ++j) row.members.push_back(st.pool[order[j]].name());
    r.selection.push_back(std::move(row));
  }
  r.selected_size = sel.members.size();
  r.selection_rule = std::string(fusion::to_string(sel.choice.decided_by));
  for (auto m : sel.members) r.ensemble.push_back(st.pool[m].name());
  std::cout << report::to_text(r);
  announce(report::emit_report(r, parse_formats(o.formats), cfg.output_dir));
  return kExitOk;
}

int cmd_run(const Options& o, bool write_model) {
  const auto cfg = make_config(o);
  const auto ds = load(cfg);
  const auto r = ex::run_pipeline(ds, cfg, cfg.seed, single_noise(cfg));
  std::cout << report::to_text(r);
  announce(report::emit_report(r, parse_formats(o.formats), cfg.output_dir));
  if (write_model) {
    const auto path = std::filesystem::path(cfg.output_dir) / "model.json";
    report::write_file(path, fusion::to_json(r.model));
    announce({path});
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const auto cfg = make_config(o);
  const auto ds = load(cfg);
  const auto r = ex::noise_sweep(ds, cfg);
  std::cout << report::to_text(r);
  std::size_t failed = 0;
  for (const auto& run : r.runs) failed += run.ok ? 0 : 1;
  if (failed) std::cerr << "warning: " << failed << " repetitions failed and were left out of the summaries\n";
  announce(report::emit_report(r, parse_formats(o.formats), cfg.output_dir));
  return kExitOk;
}

int cmd_predict(const Options& o) {
  if (o.model.empty() || o.input.empty()) {
    throw Error(ErrorKind::InvalidConfig, "predict needs --model and --input");
  }
  const auto cfg = make_config(o);
  std::ifstream in(o.model, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + o.model);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto model = fusion::model_from_json(buf.str());

  // The pool is re-fitted from the training data and seed the model came from.
  const auto ds = load(cfg);
  const auto st = ex::build_pool(ds, cfg, cfg.seed, single_noise(cfg));
  const auto target = data::load_csv(o.input, cfg.label_column, cfg.positive_label);
  const auto pred = fusion::predict(model, st.pool, target.features, cfg.fusion.execution);

  std::ostringstream os;
  os << "row,label";
  for (std::size_t k = 0; k < model.class_count; ++k) os << ",m_" << k;
  os << ",ignorance\n";
  for (std::size_t s = 0; s < pred.labels.size(); ++s) {
    os << s << "," << pred.labels[s];
    for (std::size_t k = 0; k < model.class_count; ++k) os << "," << pred.masses(s, k);
    os << "," << pred.ignorance[s] << "\n";
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  const auto path = std::filesystem::path(cfg.output_dir) / "predictions.csv";
  report::write_file(path, os.str());
  std::cout << "accuracy " << metrics::accuracy(pred.labels, target.labels) << " on "
            << pred.labels.size() << " rows\n";
  announce({path});
  return kExitOk;
}

bool is_data_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::SingleClass:
    case ErrorKind::ClassTooSmall:
    case ErrorKind::IoError:
    case ErrorKind::EmptyInput:
    case ErrorKind::TooFewSamples:
    case ErrorKind::ExternalScoresMissing:
    case ErrorKind::RowCountMismatch:
    case ErrorKind::NonStochasticRow:
    case ErrorKind::WidthMismatch:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::MemberMissing:
    case ErrorKind::LengthMismatch:
    case ErrorKind::NonBinaryTask:
      return true;
    default:
      return false;
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Training CSV with a header row")->required();
  cmd->add_option("--label-col", o.label_col, "Name of the label column")->capture_default_str();
  cmd->add_option("--positive", o.positive, "Label value of the positive class (default: first seen)");
  cmd->add_option("--splits", o.splits, "train,valid,test fractions")->capture_default_str();
  cmd->add_option("--schemes", o.schemes, "w0..w5, a comma list, or all")->capture_default_str();
  cmd->add_option("--noise", o.noise, "Noise-to-signal ratio(s), comma separated")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--external-scores", o.external, "Score files, PATH or NAME=PATH")->expected(1, -1);
  cmd->add_option("--format", o.formats, "json,csv,text")->capture_default_str();
  cmd->add_flag("--test-only-noise", o.test_only, "Pollute the test split only");
  cmd->add_flag("--row-norm", o.row_norm, "Row-norm proximity instead of elementwise");
  cmd->add_flag("--serial", o.serial, "Use the serial reference kernels");
  cmd->add_flag("--coordinate", o.coordinate, "Optimize members one at a time");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidential classifier ensembles: pool, rank, select, fuse"};
  app.require_subcommand(1);
  Options o;

  auto* pool = app.add_subcommand("pool", "Fit the classifier pool and report per-classifier accuracies");
  auto* rank = app.add_subcommand("rank", "Rank the pool by mutual information with the target");
  auto* select = app.add_subcommand("select", "Greedy ensemble-size selection");
  auto* train = app.add_subcommand("train", "Full fit, writing model.json next to the report");
  auto* predict = app.add_subcommand("predict", "Apply a trained model to new rows");
  auto* run = app.add_subcommand("run", "Full pipeline on one split");
  auto* sweep = app.add_subcommand("sweep", "Repeated runs over noise levels");
  for (auto* c : {pool, rank, select, train, predict, run, sweep}) add_common(c, o);
  for (auto* c : {train, run}) c->add_flag("--all-sizes", o.all_sizes, "Fit every scheme at every ensemble size");
  sweep->add_option("--reps", o.reps, "Repetitions per noise level")->capture_default_str();
  predict->add_option("--model", o.model, "model.json written by train")->required();
  predict->add_option("--input", o.input, "CSV of rows to classify")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*pool) return cmd_pool(o, false);
    if (*rank) return cmd_pool(o, true);
    if (*select) return cmd_select(o);
    if (*train) return cmd_run(o, true);
    if (*run) return cmd_run(o, false);
    if (*sweep) return cmd_sweep(o);
    if (*predict) return cmd_predict(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (is_config_error(e.kind())) return kExitConfig;
    return is_data_error(e.kind()) ? kExitData : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
