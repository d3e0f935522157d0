#include "app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "slim/binarize.hpp"
#include "slim/errors.hpp"
#include "slim/evaluation.hpp"
#include "slim/folds.hpp"
#include "slim/model_io.hpp"
#include "slim/mps.hpp"
#include "slim/polish.hpp"
#include "slim/rules.hpp"
#include "slim/solver.hpp"
#include "slim/sweep.hpp"
#include "slim/synth.hpp"

#ifndef SLIM_VERSION
#define SLIM_VERSION "0.0.0"
#endif

namespace slim::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Values = std::map<std::string, std::string>;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OptKind { kValue, kFlag, kInput, kInputList };

struct OptionSpec {
  std::string name;
  std::string fallback;
  std::string help;
  OptKind kind = OptKind::kValue;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// One command execution: typed access to the effective options, and the
/// manifest bookkeeping for everything read and written.
class Run {
 public:
  Run(std::string command, Values values) : values_(std::move(values)) {
    out_dir_ = values_.at("out");
    manifest_.command = std::move(command);
    manifest_.tool_version = SLIM_VERSION;
    manifest_.seed = get_u64("seed");
    manifest_.config = values_;
    manifest_.started = utc_timestamp();
  }

  const std::string& get(const std::string& name) const { return values_.at(name); }
  bool has(const std::string& name) const { return !values_.at(name).empty(); }

  std::int64_t get_int(const std::string& name) const {
    try {
      std::size_t used = 0;
      const auto v = std::stoll(get(name), &used);
      if (used == get(name).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + name + ": expected an integer, got '" + get(name) + "'");
  }
  std::uint64_t get_u64(const std::string& name) const {
    const auto v = get_int(name);
    if (v < 0) throw UsageError("--" + name + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  Rational get_rational(const std::string& name) const {
    try {
      return parse_rational(get(name));
    } catch (const std::invalid_argument&) {
      throw UsageError("--" + name + ": expected a number, got '" + get(name) + "'");
    }
  }
  double get_double(const std::string& name) const { return to_double(get_rational(name)); }
  bool get_bool(const std::string& name) const { return get(name) == "true"; }

  /// Records the hash of an input file named by option `name`.
  fs::path input(const std::string& name) {
    if (!has(name)) throw UsageError("--" + name + " is required");
    return record_input(get(name));
  }
  std::vector<fs::path> inputs(const std::string& name) {
    if (!has(name)) throw UsageError("--" + name + " is required");
    std::vector<fs::path> out;
    for (const auto& item : split(get(name), ',')) out.push_back(record_input(item));
    return out;
  }

  fs::path out_path(const std::string& relative) const {
    const fs::path p = out_dir_ / relative;
    fs::create_directories(p.parent_path());
    return p;
  }
  void emit(const std::string& relative, const std::string& content, bool deterministic) {
    write_file(out_dir_ / relative, content);
    record_output(relative, deterministic);
  }
  /// For files the library wrote to out_path(relative).
  void record_output(const std::string& relative, bool deterministic) {
    manifest_.outputs[relative] = sha256_file(out_dir_ / relative);
    if (deterministic) manifest_.deterministic.push_back(relative);
  }

  void finish() {
    manifest_.finished = utc_timestamp();
    write_file(out_dir_ / (manifest_.command + ".manifest.json"), manifest_.to_json());
  }

  const RunManifest& manifest() const { return manifest_; }

 private:
  fs::path record_input(const fs::path& path) {
    manifest_.inputs[path.string()] = sha256_file(path);
    return path;
  }

  Values values_;
  fs::path out_dir_;
  RunManifest manifest_;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  std::function<void(Run&)> body;
};

// ---------------------------------------------------------------------------
// Shared pieces

const std::vector<OptionSpec> kDataOptions{
    {"data", "", "binary dataset CSV (0/1 features plus a label column)", OptKind::kInput},
    {"label", "y", "label column name"},
    {"positive", "+1", "label token mapped to y = +1"},
};

const std::vector<OptionSpec> kLatticeOptions{
    {"max-terms", "8", "largest number of nonzero points"},
    {"coef-bound", "10", "points range [-b, b] for every feature"},
    {"intercept-bound", "100", "intercept range"},
};

std::vector<OptionSpec> with(std::vector<OptionSpec> base, std::initializer_list<std::vector<OptionSpec>> more) {
  for (const auto& group : more) base.insert(base.end(), group.begin(), group.end());
  return base;
}

BinaryDataset load_data(Run& run) {
  return load_csv(run.input("data").string(), run.get("label"), run.get("positive"));
}

LatticeSpec lattice_for(const Run& run, std::size_t p) {
  const auto lattice = LatticeSpec::uniform(p, static_cast<int>(run.get_int("coef-bound")),
                                            static_cast<int>(run.get_int("intercept-bound")));
  lattice.validate(p);
  return lattice;
}

int max_terms(const Run& run) {
  const auto k = run.get_int("max-terms");
  if (k < 0) throw UsageError("--max-terms must be nonnegative");
  return static_cast<int>(k);
}

std::optional<double> time_limit(const Run& run) {
  const double t = run.get_double("time-limit");
  if (t < 0) throw UsageError("--time-limit must be nonnegative");
  return t > 0 ? std::optional<double>(t) : std::nullopt;
}

void warn_endpoint(const Rational& w_plus) {
  if (w_plus == 0) {
    std::cerr << "warning: W+ = 0 ignores positive errors; the trivial always-negative model is optimal\n";
  } else if (w_plus == 2) {
    std::cerr << "warning: W+ = 2 ignores negative errors; the trivial always-positive model is optimal\n";
  }
}

ModelDocument read_model(const fs::path& path) { return model_from_json(read_file(path)); }

void check_columns(const ScoringSystem& model, const BinaryDataset& data, const fs::path& source) {
  if (model.feature_names != data.feature_names()) {
    throw DataError(source.string() + ": model features do not match the dataset columns");
  }
}

std::string file_safe(std::string id) {
  std::replace(id.begin(), id.end(), '/', '_');
  return id;
}

std::string rate_text(const ConfusionCounts& c) { return percent(c.tpr()) + "/" + percent(c.fpr()); }

Json confusion_json(const ConfusionCounts& c) {
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"tn", c.tn},
          {"fn", c.fn},
          {"tpr", to_string(c.tpr())},
          {"fpr", to_string(c.fpr())},
          {"tpr_value", to_double(c.tpr())},
          {"fpr_value", to_double(c.fpr())}};
}

std::string comparator_name(Comparator c) {
  switch (c) {
    case Comparator::kLessEqual: return "le";
    case Comparator::kLess: return "lt";
    case Comparator::kGreaterEqual: return "ge";
    case Comparator::kGreater: return "gt";
    case Comparator::kBetween: return "between";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Commands

void cmd_encode(Run& run) {
  const auto raw = run.input("raw");
  const auto rules_path = run.input("rules");
  EncodingPlan plan;
  try {
    plan = parse_encoding_rules(read_file(rules_path));
  } catch (const ConfigError& e) {
    throw DataError(rules_path.string() + ": " + e.what());
  }
  const auto data = encode_csv(raw.string(), plan, run.get("label"), run.get("positive"));
  write_csv(data, run.out_path("dataset.csv").string(), "y");
  run.record_output("dataset.csv", true);

  Json features = Json::array();
  for (const auto& f : data.features()) {
    Json item{{"name", f.name}, {"kind", f.kind == FeatureKind::kBinary ? "binary" : "thresholded"}};
    if (f.threshold_rule) {
      item["source"] = f.threshold_rule->source_column;
      item["comparator"] = comparator_name(f.threshold_rule->comparator);
      item["lower"] = f.threshold_rule->lower;
      if (f.threshold_rule->comparator == Comparator::kBetween) item["upper"] = f.threshold_rule->upper;
    }
    features.push_back(item);
  }
  run.emit("features.json", features.dump(2) + "\n", true);
  std::cout << "encoded " << data.num_rows() << " rows into " << data.num_features() << " binary features\n";
}

void cmd_train(Run& run) {
  const auto data = load_data(run);
  const auto agg = aggregate(data);
  const auto lattice = lattice_for(run, data.num_features());
  const Rational w_plus = run.get_rational("w-plus");
  warn_endpoint(w_plus);
  const auto cfg = PenaltyConfig::for_data(w_plus, static_cast<std::int64_t>(data.num_rows()), data.num_features(),
                                           lattice, max_terms(run));
  SolveConfig scfg;
  scfg.time_limit_seconds = time_limit(run);
  if (run.get_u64("node-limit") > 0) scfg.node_limit = run.get_u64("node-limit");
  scfg.pool_size = run.get_u64("pool");
  scfg.gap_tolerance = run.get_rational("gap");
  scfg.validate();

  const auto result = solve(agg, cfg, lattice, scfg);
  const auto& report = result.report;
  if (report.status != SolveStatus::kOptimal && result.pool.entries.empty()) {
    throw SolverLimitError("solver stopped (" + to_string(report.status) + ") without a feasible model");
  }
  ScoringSystem model = report.best;
  if (run.get_bool("polish")) model = polish(model, agg, cfg, lattice).model;

  ModelDocument doc{model, lattice, cfg, {}};
  doc.provenance = {{"data_sha256", run.manifest().inputs.at(run.get("data"))},
                    {"seed", std::to_string(run.manifest().seed)},
                    {"solve_status", to_string(report.status)},
                    {"polished", run.get("polish")},
                    {"tool_version", SLIM_VERSION}};
  const bool deterministic = report.status != SolveStatus::kTimeLimit;
  const std::string sheet = format_sheet(model, run.get("outcome"));
  run.emit("model.json", to_json(doc), deterministic);
  run.emit("report.json", to_json(report), false);
  run.emit("sheet.txt", sheet, deterministic);

  std::cout << sheet;
  const auto counts = confusion(model, data);
  std::cout << "status " << to_string(report.status) << ", objective " << to_double(report.best_objective)
            << ", lower bound " << to_double(report.lower_bound) << ", gap " << to_double(report.gap) << "\n"
            << "training TPR/FPR of " << rate_text(counts) << "\n";
}

SweepProtocol grid_protocol(const std::string& text) {
  if (text.empty()) throw UsageError("--grid is empty");
  if (text == "balanced" || text == "imbalanced" || text == "extreme") return SweepProtocol::preset(text);
  if (text.starts_with("uniform:")) {
    int count = 0;
    try {
      count = std::stoi(text.substr(8));
    } catch (const std::exception&) {
      throw UsageError("--grid uniform:<count> needs an integer count");
    }
    return SweepProtocol::uniform(count);
  }
  SweepProtocol protocol;
  for (const auto& item : split(text, ',')) {
    try {
      protocol.w_plus_grid.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      throw UsageError("--grid: '" + item + "' is not a number");
    }
  }
  if (protocol.w_plus_grid.empty()) throw UsageError("--grid is empty");
  return protocol;
}

void cmd_sweep(Run& run) {
  const auto data = load_data(run);
  auto protocol = grid_protocol(run.get("grid"));
  protocol.pool_size = run.get_u64("pool");
  protocol.max_terms = max_terms(run);

  FoldAssignment folds;
  if (run.has("folds-file")) {
    folds = FoldAssignment::from_json(read_file(run.input("folds-file")));
    if (folds.cv_fold.size() != data.num_rows()) throw DataError("folds file does not match the dataset size");
  } else {
    const auto seed = run.has("folds-seed") ? run.get_u64("folds-seed") : run.manifest().seed;
    folds = make_folds(data, seed, run.get_double("test-ratio"), static_cast<int>(run.get_int("folds")));
  }
  protocol.cv_folds = folds.num_folds;
  protocol.validate();
  for (const auto& w : protocol.w_plus_grid) warn_endpoint(w);

  SweepOptions options;
  options.solve.time_limit_seconds = time_limit(run);
  options.solve.pool_size = protocol.pool_size;
  const auto threads = run.get_int("threads");
  if (threads < 1) throw UsageError("--threads must be at least 1");
  options.threads = static_cast<unsigned>(threads);

  const auto result = sweep(data, folds, protocol, lattice_for(run, data.num_features()), options);
  // Untimed sweeps are reproducible bit for bit; timed ones only up to the cutoffs.
  const bool deterministic = !options.solve.time_limit_seconds.has_value();

  run.emit("folds.json", folds.to_json(), true);
  run.emit("roc.json", result.test_curve.to_json(), deterministic);
  run.emit("roc.csv", result.test_curve.to_csv(), deterministic);
  run.emit("validation_roc.json", result.validation_curve.to_json(), deterministic);
  run.emit("validation_roc.csv", result.validation_curve.to_csv(), deterministic);
  if (run.get_bool("plot")) run.emit("roc.svg", result.test_curve.to_svg("test ROC"), deterministic);

  const auto lattice = lattice_for(run, data.num_features());
  const auto test_rows = folds.test_rows();
  Json points = Json::array();
  std::cout << "W+        status  terms  validation TPR/FPR  test TPR/FPR\n";
  for (const auto& p : result.points) {
    Json item{{"w_plus", to_string(p.w_plus)}, {"model_id", p.model_id()}};
    if (p.status != PointStatus::kOk) {
      item["status"] = "failed";
      item["error"] = p.error;
      points.push_back(item);
      std::cout << to_string(p.w_plus) << "  failed: " << p.error << "\n";
      continue;
    }
    const std::string file = "models/" + file_safe(p.model_id()) + ".json";
    const auto cfg = PenaltyConfig::for_data(p.w_plus, static_cast<std::int64_t>(test_rows.size()),
                                             data.num_features(), lattice, protocol.max_terms);
    run.emit(file,
             to_json(ModelDocument{p.model, lattice, cfg,
                                   {{"model_id", p.model_id()},
                                    {"full_status", to_string(p.full_status)},
                                    {"tool_version", SLIM_VERSION}}}),
             deterministic);
    Json mve = Json::array();
    for (const auto& v : p.mean_validation_error) mve.push_back(to_string(v));
    item["status"] = "ok";
    item["model"] = file;
    item["chosen_terms"] = p.chosen_terms;
    item["mean_validation_error"] = mve;
    item["validation"] = confusion_json(p.validation);
    item["test"] = confusion_json(p.test);
    item["full_status"] = to_string(p.full_status);
    item["full_gap"] = to_string(p.full_gap);
    points.push_back(item);
    char line[160];
    std::snprintf(line, sizeof line, "%-9s ok      %5d  %18s  %s\n", to_string(p.w_plus).c_str(), p.chosen_terms,
                  rate_text(p.validation).c_str(), rate_text(p.test).c_str());
    std::cout << line;
  }

  Json summary{{"grid", run.get("grid")},
               {"test_auc", to_string(result.test_curve.auc)},
               {"test_auc_value", to_double(result.test_curve.auc)},
               {"validation_auc", to_string(result.validation_curve.auc)},
               {"points", points}};
  if (run.has("max-fpr")) {
    const auto ops = result.validation_points();
    const auto pick = pick_at_decision_point(ops, run.get_rational("max-fpr"), PickCriterion::kMaxTpr);
    if (pick) {
      const auto& chosen = *std::find_if(result.points.begin(), result.points.end(),
                                         [&](const SweepPoint& p) { return p.model_id() == ops[*pick].model_id; });
      summary["selected"] = chosen.model_id();
      std::cout << "selected " << chosen.model_id() << " at validation FPR <= " << run.get("max-fpr")
                << ": test TPR/FPR of " << rate_text(chosen.test) << "\n";
    } else {
      summary["selected"] = nullptr;
      std::cout << "no point meets validation FPR <= " << run.get("max-fpr") << "\n";
    }
  }
  run.emit("sweep.json", summary.dump(2) + "\n", deterministic);
  std::cout << "test AUC " << to_double(result.test_curve.auc) << "\n";
}

void cmd_evaluate(Run& run) {
  const auto model_paths = run.inputs("model");
  const auto data = load_data(run);
  std::vector<std::size_t> rows;
  const std::string& scope = run.get("rows");
  if (scope == "test" || scope == "train") {
    const auto folds = FoldAssignment::from_json(read_file(run.input("folds-file")));
    if (folds.cv_fold.size() != data.num_rows()) throw DataError("folds file does not match the dataset size");
    rows = scope == "test" ? folds.test_rows() : folds.training_rows();
  } else if (scope == "all") {
    rows.resize(data.num_rows());
    std::iota(rows.begin(), rows.end(), 0);
  } else {
    throw UsageError("--rows must be all, test or train");
  }
  const int bins = static_cast<int>(run.get_int("calib-bins"));
  const std::string& binning_name = run.get("binning");
  if (binning_name != "equal-frequency" && binning_name != "equal-width") {
    throw UsageError("--binning must be equal-frequency or equal-width");
  }
  const auto binning = binning_name == "equal-width" ? Binning::kEqualWidth : Binning::kEqualFrequency;

  const std::string scope_label = scope == "test" ? "test " : scope == "train" ? "training " : "";
  std::vector<ModelDocument> docs;
  std::vector<OperatingPoint> ops;
  Json models = Json::array();
  std::ostringstream text;
  for (const auto& path : model_paths) {
    auto doc = read_model(path);
    check_columns(doc.model, data, path);
    const auto counts = confusion(doc.model, data, rows);
    const auto err = counts.weighted_error(doc.config.w_plus, doc.config.w_minus);
    const std::string id = path.stem().string();
    ops.push_back(OperatingPoint{doc.config.w_plus, counts.fpr(), counts.tpr(), err, id});
    Json item = confusion_json(counts);
    item["model"] = path.string();
    item["model_id"] = id;
    item["weighted_error"] = to_string(err);
    item["terms"] = doc.model.l0();
    models.push_back(item);
    text << id << ": " << scope_label << "TPR/FPR of " << rate_text(counts) << " (tp=" << counts.tp << " fp=" << counts.fp
         << " tn=" << counts.tn << " fn=" << counts.fn << ", " << doc.model.l0() << " terms)\n";
    docs.push_back(std::move(doc));
  }

  Json report{{"rows", scope}, {"models", models}};
  std::optional<std::size_t> selected = docs.size() == 1 ? std::optional<std::size_t>(0) : std::nullopt;
  if (run.has("max-fpr")) {
    selected = pick_at_decision_point(ops, run.get_rational("max-fpr"), PickCriterion::kMaxTpr);
    report["max_fpr"] = run.get("max-fpr");
    text << (selected ? "selected " + ops[*selected].model_id : std::string("no model meets the FPR limit"))
         << " at FPR <= " << run.get("max-fpr") << "\n";
  }
  report["selected"] = selected ? Json(ops[*selected].model_id) : Json(nullptr);
  if (selected) {
    const auto table = calibration(docs[*selected].model, data, rows, bins, binning);
    run.emit("calibration.csv", table.to_csv(), true);
    run.emit("calibration.json", table.to_json(), true);
  }
  run.emit("report.json", report.dump(2) + "\n", true);
  run.emit("report.txt", text.str(), true);
  std::cout << text.str();
}

void cmd_rules(Run& run) {
  const auto data = load_data(run);
  MiningOptions options;
  options.min_support = run.get_rational("min-support");
  options.min_confidence = run.get_rational("min-confidence");
  options.max_antecedent = static_cast<int>(run.get_int("max-vars"));
  const auto names = data.feature_names();
  for (const auto& name : split(run.get("require"), ',')) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UsageError("--require: unknown feature '" + name + "'");
    options.require_any.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  const auto rules = mine_rules(data, options);
  const auto csv = rules_to_csv(rules, names, static_cast<int>(run.get_int("digits")));
  run.emit("rules.csv", csv, true);
  std::cout << csv;
}

void cmd_export_mps(Run& run) {
  const auto data = load_data(run);
  const auto agg = aggregate(data);
  const auto lattice = lattice_for(run, data.num_features());
  const auto variant = parse_mps_variant(run.get("variant"));
  const auto cfg = PenaltyConfig::for_data(run.get_rational("w-plus"), static_cast<std::int64_t>(data.num_rows()),
                                           data.num_features(), lattice, max_terms(run));
  std::optional<ActiveSet> active;
  if (run.has("model")) {
    const auto path = run.input("model");
    const auto doc = read_model(path);
    check_columns(doc.model, data, path);
    active = ActiveSet::of(doc.model);
  }
  const std::string file = to_string(variant) + ".mps";
  run.emit(file, export_mps(agg, cfg, lattice, variant, active), true);
  std::cout << "wrote " << (fs::path(run.get("out")) / file).string() << " (objective scale "
            << mps_objective_scale(agg, cfg, lattice, variant) << ")\n";
}

void cmd_print(Run& run) {
  const auto doc = read_model(run.input("model"));
  const auto sheet = format_sheet(doc.model, run.get("outcome"));
  run.emit("sheet.txt", sheet, true);
  std::cout << sheet;
}

void cmd_synth(Run& run) {
  const auto n = run.get_u64("n");
  const auto seed = run.manifest().seed;
  const std::string& kind = run.get("kind");
  if (kind == "recidivism") {
    const auto spec = recidivism_like_spec(run.get_double("prevalence"));
    const auto data = synth_generate(spec, n, seed);
    write_csv(data, run.out_path("dataset.csv").string(), "y");
    run.emit("truth.json",
             Json{{"kind", kind}, {"n", n}, {"seed", seed}, {"bias", spec.bias}, {"marginals", spec.marginals}}.dump(2) +
                 "\n",
             true);
  } else if (kind == "planted") {
    std::vector<int> points;
    for (const auto& item : split(run.get("points"), ',')) {
      try {
        points.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw UsageError("--points: '" + item + "' is not an integer");
      }
    }
    if (points.empty()) throw UsageError("--points is required for planted data");
    std::vector<std::string> names;
    for (std::size_t j = 0; j < points.size(); ++j) names.push_back("x" + std::to_string(j + 1));
    const auto truth = ScoringSystem::from_dense(static_cast<int>(run.get_int("intercept")), points, names);
    const auto data = synth_planted(truth, n, seed, run.get_double("marginal"));
    write_csv(data, run.out_path("dataset.csv").string(), "y");
    const auto lattice = LatticeSpec::uniform(points.size());
    run.emit("truth.json", to_json(ModelDocument{truth, lattice, PenaltyConfig{}, {{"kind", kind}}}), true);
  } else {
    throw UsageError("--kind must be recidivism or planted");
  }
  run.record_output("dataset.csv", true);
  std::cout << "wrote " << n << " rows to " << (fs::path(run.get("out")) / "dataset.csv").string() << "\n";
}

void cmd_replay(Run& run) {
  const auto original = RunManifest::from_json(read_file(run.input("manifest")));
  if (original.command == "replay") throw DataError("cannot replay a replay manifest");
  for (const auto& [path, hash] : original.inputs) {
    if (sha256_file(path) != hash) throw DataError("input changed since the recorded run: " + path);
  }
  if (original.tool_version != SLIM_VERSION) {
    std::cerr << "warning: manifest written by version " << original.tool_version << "\n";
  }
  std::vector<std::string> args{original.command};
  for (const auto& [key, value] : original.config) {
    if (key != "out") args.push_back("--" + key + "=" + value);
  }
  args.push_back("--out=" + run.get("out"));
  const int code = slim::cli::run(args);
  if (code != kSuccess) throw DataError("replayed command exited with code " + std::to_string(code));

  const auto replayed =
      RunManifest::from_json(read_file(fs::path(run.get("out")) / (original.command + ".manifest.json")));
  std::size_t differing = 0;
  for (const auto& name : original.deterministic) {
    const auto it = replayed.outputs.find(name);
    const bool same = it != replayed.outputs.end() && it->second == original.outputs.at(name);
    differing += !same;
    std::cout << (same ? "identical " : "DIFFERENT ") << name << "\n";
  }
  if (differing > 0) throw DataError(std::to_string(differing) + " deterministic output(s) differ");
}

std::vector<CommandSpec> commands() {
  return {
      {"encode",
       "Binarize a raw numeric CSV with a rules file",
       {{"raw", "", "raw CSV with a header row", OptKind::kInput},
        {"rules", "", "encoding rules file (band / threshold / passthrough)", OptKind::kInput},
        {"label", "y", "label column name"},
        {"positive", "1", "label token mapped to y = +1"}},
       cmd_encode},
      {"train",
       "Fit one scoring system by exact branch-and-bound",
       with(kDataOptions, {kLatticeOptions,
                           {{"w-plus", "1", "weight on positive errors; W- = 2 - W+"},
                            {"time-limit", "60", "seconds, 0 for none"},
                            {"node-limit", "0", "nodes, 0 for none"},
                            {"pool", "500", "solution pool size"},
                            {"gap", "0", "relative gap tolerance"},
                            {"polish", "false", "polish the optimum on its active set", OptKind::kFlag},
                            {"outcome", "Y = +1", "outcome text on the sheet"}}}),
       cmd_train},
      {"sweep",
       "Cost-sensitive W+ sweep with nested cross-validation",
       with(kDataOptions,
            {kLatticeOptions,
             {{"grid", "balanced", "balanced | imbalanced | extreme | uniform:<k> | comma list of W+"},
              {"folds", "5", "cross-validation folds"},
              {"test-ratio", "1/3", "held-out test share"},
              {"folds-seed", "", "fold seed (defaults to --seed)"},
              {"folds-file", "", "reuse a folds.json instead of drawing folds", OptKind::kInput},
              {"time-limit", "60", "seconds per solve, 0 for none"},
              {"pool", "500", "solution pool size per solve"},
              {"threads", "1", "concurrent sweep points (env SLIM_THREADS)"},
              {"plot", "false", "write roc.svg", OptKind::kFlag},
              {"max-fpr", "", "pick the max-TPR point with validation FPR at most this"}}}),
       cmd_sweep},
      {"evaluate",
       "Confusion, TPR/FPR and calibration of saved models",
       with({{"model", "", "model JSON (comma-separated for several)", OptKind::kInputList}},
            {kDataOptions,
             {{"rows", "all", "all | test | train (test/train need --folds-file)"},
              {"folds-file", "", "folds.json from a sweep", OptKind::kInput},
              {"calib-bins", "10", "calibration bins"},
              {"binning", "equal-frequency", "equal-frequency | equal-width"},
              {"max-fpr", "", "select the max-TPR model with FPR at most this"}}}),
       cmd_evaluate},
      {"rules",
       "Mine IF-THEN rules for y = +1 ranked by lift",
       with(kDataOptions, {{{"min-support", "0.05", "minimum support"},
                            {"min-confidence", "0.01", "minimum confidence"},
                            {"max-vars", "2", "antecedent size cap (1 or 2)"},
                            {"require", "", "keep rules using one of these features (comma-separated)"},
                            {"digits", "4", "decimals in the CSV"}}}),
       cmd_rules},
      {"export-mps",
       "Write the training problem as an MPS file",
       with(kDataOptions, {kLatticeOptions,
                           {{"variant", "aggregated", "general | aggregated | polish"},
                            {"w-plus", "1", "weight on positive errors"},
                            {"model", "", "model whose support is the polish active set", OptKind::kInput}}}),
       cmd_export_mps},
      {"print",
       "Print a model as a points sheet",
       {{"model", "", "model JSON", OptKind::kInput}, {"outcome", "Y = +1", "outcome text on the sheet"}},
       cmd_print},
      {"synth",
       "Generate a synthetic binary dataset",
       {{"kind", "recidivism", "recidivism | planted"},
        {"n", "1000", "rows"},
        {"prevalence", "0.59", "P(y = +1) for recidivism data"},
        {"points", "", "planted points, comma-separated (one feature each)"},
        {"intercept", "0", "planted intercept"},
        {"marginal", "0.5", "P(x_j = 1) for planted data"}},
       cmd_synth},
      {"replay",
       "Rerun a recorded command and compare its deterministic outputs",
       {{"manifest", "", "manifest written by an earlier command", OptKind::kInput}},
       cmd_replay},
  };
}

std::string absolute_list(const std::string& value) {
  std::string out;
  for (const auto& item : split(value, ',')) {
    if (!out.empty()) out += ',';
    out += fs::absolute(item).lexically_normal().string();
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  const auto specs = commands();
  CLI::App app{"Sparse integer scoring systems by exact 0-1 loss minimization", "slim"};
  app.set_version_flag("--version", SLIM_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::map<std::string, Values> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::string> config_files;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : specs) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto& v = values[spec.name];
    auto options = spec.options;
    options.push_back({"out", ".", "output directory"});
    options.push_back({"seed", "0", "seed for every random draw"});
    for (const auto& opt : options) {
      if (opt.kind == OptKind::kFlag) {
        flags[spec.name][opt.name] = opt.fallback == "true";
        sub->add_flag("--" + opt.name, flags[spec.name][opt.name], opt.help);
        continue;
      }
      v[opt.name] = opt.fallback;
      auto* o = sub->add_option("--" + opt.name, v[opt.name], opt.help);
      if (!opt.fallback.empty()) o->capture_default_str();
      if (opt.name == "threads") o->envname("SLIM_THREADS");
    }
    sub->add_option("--config", config_files[spec.name], "key = value file whose entries override flags");
  }

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kSuccess : kUsage;
  }

  const CommandSpec* spec = nullptr;
  for (const auto& s : specs) {
    if (subs[s.name]->parsed()) spec = &s;
  }
  Values& v = values[spec->name];
  for (const auto& [name, on] : flags[spec->name]) v[name] = on ? "true" : "false";

  try {
    if (!config_files[spec->name].empty()) {
      for (const auto& [key, value] : read_key_values(config_files[spec->name])) {
        if (!v.contains(key)) throw UsageError("config file: unknown option '" + key + "' for " + spec->name);
        if (flags[spec->name].contains(key)) {
          if (value != "true" && value != "false") throw UsageError("config file: " + key + " must be true or false");
        }
        v[key] = value;
      }
    }
    for (const auto& opt : spec->options) {
      if ((opt.kind == OptKind::kInput || opt.kind == OptKind::kInputList) && !v[opt.name].empty()) {
        v[opt.name] = absolute_list(v[opt.name]);
      }
    }
    Run r(spec->name, v);
    spec->body(r);
    r.finish();
    return kSuccess;
  } catch (const UsageError& e) {
    std::cerr << "slim " << spec->name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "slim " << spec->name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const SolverLimitError& e) {
    std::cerr << "slim " << spec->name << ": " << e.what() << "\n";
    return kSolverLimit;
  } catch (const std::overflow_error& e) {
    std::cerr << "slim " << spec->name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "slim " << spec->name << ": " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace slim::cli
