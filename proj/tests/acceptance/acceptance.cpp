// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "app.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "slim/csv.hpp"
#include "slim/evaluation.hpp"
#include "slim/folds.hpp"
#include "slim/model_io.hpp"
#include "slim/polish.hpp"
#include "slim/rules.hpp"
#include "slim/solver.hpp"
#include "slim/sweep.hpp"
#include "slim/synth.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace slim;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

/// Quiet in-process CLI call.
int slim_cli(const std::vector<std::string>& args) {
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const int code = cli::run(args);
  std::cout.rdbuf(old);
  return code;
}

struct Scratch {
  fs::path root;
  explicit Scratch(const std::string& tag) {
    root = fs::temp_directory_path() / ("slim_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
  std::string path(const std::string& name) const { return (root / name).string(); }
};

/// Full-size synthetic data: the 48 recidivism marginals with a
/// sparse logistic signal so the search has real structure to find.
BinaryDataset full_scale_data() {
  // Eight strong factors of alternating sign, so optimal models use the full term budget.
  auto spec = recidivism_like_spec(0.59);
  std::fill(spec.weights.begin(), spec.weights.end(), 0.0);
  const std::size_t factors[] = {4, 9, 15, 21, 27, 33, 38, 44};
  for (std::size_t k = 0; k < std::size(factors); ++k) spec.weights[factors[k]] = k % 2 ? -2.0 : 2.0;
  spec.bias = 0.3;
  return synth_generate(spec, 33796, 1994);
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  const auto suite = testing::oracle_suite(50);
  std::size_t matched = 0;
  for (const auto& inst : suite) {
    const auto agg = aggregate(inst.data);
    SolveConfig scfg;
    scfg.gap_tolerance = 0;
    scfg.time_limit_seconds.reset();
    const auto solved = solve(agg, inst.cfg, inst.lattice, scfg);
    const auto brute = brute_force_solve(agg, inst.cfg, inst.lattice);
    matched += solved.report.best_value.total == brute.value.total;
  }
  const double elapsed = seconds_since(start);
  return {matched == suite.size() && elapsed <= 30.0,
          std::to_string(matched) + "/" + std::to_string(suite.size()) + " exact matches in " + fmt("%.2f", elapsed) +
              " s (limit 30 s)"};
}

Verdict worked_example() {
  const auto data = aggregate(testing::a1a2_dataset());
  const auto lattice = LatticeSpec::uniform(2);
  const auto cfg = PenaltyConfig::for_data(1, 4, 2, lattice, 2);
  const auto result = solve(data, cfg, lattice, SolveConfig{});
  const auto& m = result.report.best;
  const bool ok = m.intercept == 1 && m.dense() == std::vector<int>{-1, -1} && result.report.best_value.weighted_error == 0;
  return {ok, "intercept " + std::to_string(m.intercept) + ", points (" + std::to_string(m.coefficient(0)) + ", " +
                  std::to_string(m.coefficient(1)) + "), weighted error " + to_string(result.report.best_value.weighted_error)};
}

Verdict tie_break() {
  std::size_t ok = 0;
  std::size_t duplicates = 0;
  const auto suite = testing::oracle_suite(50);
  for (const auto& inst : suite) {
    const auto solved = solve(aggregate(inst.data), inst.cfg, inst.lattice, SolveConfig{});
    const auto& best = solved.report.best;
    const Rational loss = testing::row_loss(inst.data, best.intercept, best.dense(), inst.cfg);
    std::vector<std::size_t> all(inst.lattice.num_features());
    std::iota(all.begin(), all.end(), 0);
    std::int64_t min_l1 = best.l1();
    testing::for_each_lattice_point(inst.lattice, all, [&](const std::vector<int>& coefs) {
      std::int64_t l0 = 0;
      std::int64_t l1 = 0;
      for (int c : coefs) {
        l0 += c != 0;
        l1 += std::abs(c);
      }
      if (l0 != best.l0() || l1 >= min_l1) return;
      for (int b0 = -inst.lattice.intercept_bound; b0 <= inst.lattice.intercept_bound; ++b0) {
        if (testing::row_loss(inst.data, b0, coefs, inst.cfg) == loss) {
          min_l1 = l1;
          break;
        }
      }
    });
    ok += min_l1 == best.l1();
    // A scaled duplicate k * m (k >= 2) would show up as a smaller-l1 model above.
    int g = std::abs(best.intercept);
    for (const auto& t : best.terms) g = std::gcd(g, std::abs(t.points));
    if (g >= 2 && !best.terms.empty()) {
      std::vector<int> reduced = best.dense();
      for (int& c : reduced) c /= g;
      duplicates += testing::row_loss(inst.data, best.intercept / g, reduced, inst.cfg) == loss;
    }
  }
  return {ok == suite.size() && duplicates == 0,
          std::to_string(ok) + "/" + std::to_string(suite.size()) + " optima have minimal l1 for their (loss, l0); " +
              std::to_string(duplicates) + " scaled duplicates"};
}

Verdict bound_validity() {
  std::size_t valid = 0;
  std::size_t samples = 0;
  std::size_t bad_samples = 0;
  const auto suite = testing::oracle_suite(50);
  for (const auto& inst : suite) {
    const auto agg = aggregate(inst.data);
    const auto brute = brute_force_solve(agg, inst.cfg, inst.lattice);
    const std::vector<std::optional<int>> root(inst.lattice.num_features());
    valid += conflict_lower_bound(agg, inst.cfg) <= brute.value.total &&
             node_bound(root, agg, inst.cfg, inst.lattice) <= brute.value.total;
  }
  // Telemetry on instances large enough to produce many samples.
  SeededRng rng(404);
  for (int k = 0; k < 4; ++k) {
    const auto data = testing::random_dataset(rng, 400, 10 + k);
    const auto lattice = LatticeSpec::uniform(data.num_features(), 5, 20);
    const auto cfg = PenaltyConfig::for_data(make_rational(1 + k, 2), 400, data.num_features(), lattice, 4);
    SolveConfig scfg;
    scfg.time_limit_seconds = 5.0;
    scfg.telemetry_every = 64;
    scfg.on_telemetry = [&](const TelemetrySample& s) {
      ++samples;
      bad_samples += !(s.lower_bound <= s.incumbent);
    };
    const auto r = solve(aggregate(data), cfg, lattice, scfg);
    bad_samples += !(r.report.lower_bound <= r.report.best_objective);
  }
  return {valid == suite.size() && bad_samples == 0 && samples > 0,
          std::to_string(valid) + "/" + std::to_string(suite.size()) + " instances with both root bounds <= optimum; " +
              std::to_string(bad_samples) + " violations in " + std::to_string(samples) + " telemetry samples"};
}

Verdict aggregation_invariance() {
  SeededRng rng(505);
  std::size_t equal = 0;
  std::size_t total = 0;
  for (int d = 0; d < 20; ++d) {
    const std::size_t p = 3 + rng.below(8);
    const auto data = testing::duplicated_dataset(rng, 500, p, 5 + rng.below(40));
    const auto agg = aggregate(data);
    const auto lattice = LatticeSpec::uniform(p, 10, 100);
    const auto cfg = PenaltyConfig::for_data(make_rational(1 + rng.below(19), 10), 500, p, lattice,
                                             static_cast<int>(p));
    for (int m = 0; m < 5; ++m) {
      const auto coefs = testing::random_coefficients(rng, lattice);
      const int b0 = static_cast<int>(rng.below(41)) - 20;
      const auto model = ScoringSystem::from_dense(b0, coefs, data.feature_names());
      equal += objective(model, agg, cfg).total == testing::row_objective(data, b0, coefs, cfg);
      ++total;
    }
  }
  return {equal == total, std::to_string(equal) + "/" + std::to_string(total) + " objectives equal row by row"};
}

Verdict polishing() {
  // Correctness on the oracle suite.
  std::size_t entries = 0;
  std::size_t correct = 0;
  for (const auto& inst : testing::oracle_suite(50)) {
    const auto agg = aggregate(inst.data);
    SolveConfig scfg;
    scfg.pool_size = 10;
    for (const auto& entry : solve(agg, inst.cfg, inst.lattice, scfg).pool.entries) {
      ++entries;
      const auto out = polish(entry.model, agg, inst.cfg, inst.lattice);
      Rational best_loss = -1;
      const auto active = entry.model.support();
      testing::for_each_lattice_point(inst.lattice, active, [&](const std::vector<int>& coefs) {
        for (int b0 = -inst.lattice.intercept_bound; b0 <= inst.lattice.intercept_bound; ++b0) {
          const Rational loss = testing::row_loss(inst.data, b0, coefs, inst.cfg);
          if (best_loss < 0 || loss < best_loss) best_loss = loss;
        }
      });
      const auto again = polish(out.model, agg, inst.cfg, inst.lattice);
      correct += out.value.weighted_error <= entry.value.weighted_error && out.value.weighted_error == best_loss &&
                 again.model == out.model;
    }
  }
  // Timing on pool entries of a full-size solve.
  const auto data = full_scale_data();
  const auto agg = aggregate(data);
  const auto lattice = LatticeSpec::uniform(48, 10, 100);
  const auto cfg = PenaltyConfig::for_data(1, static_cast<std::int64_t>(data.num_rows()), 48, lattice, 8);
  SolveConfig scfg;
  scfg.time_limit_seconds = 20.0;
  const auto pool = solve(agg, cfg, lattice, scfg).pool.entries;
  const std::size_t stride = std::max<std::size_t>(1, pool.size() / 25);
  double worst = 0;
  std::size_t timed = 0;
  std::size_t largest = 0;
  for (std::size_t k = 0; k < pool.size(); k += stride) {
    const auto start = Clock::now();
    polish(pool[k].model, agg, cfg, lattice);
    worst = std::max(worst, seconds_since(start));
    largest = std::max<std::size_t>(largest, pool[k].model.terms.size());
    ++timed;
  }
  return {correct == entries && timed > 0 && worst <= 5.0,
          std::to_string(correct) + "/" + std::to_string(entries) +
              " oracle pool entries polished to the restricted optimum and idempotent; slowest of " +
              std::to_string(timed) + " full-size polishes (|A| up to " + std::to_string(largest) + ") took " +
              fmt("%.3f", worst) + " s (limit 5 s)"};
}

Verdict sweep_endpoints() {
  SynthSpec spec{{"a", "b", "c", "d"}, {0.4, 0.5, 0.3, 0.6}, {1.5, -1.0, 0.8, 0.0}, 0.2};
  const auto data = synth_generate(spec, 300, 707);
  const auto folds = make_folds(data, 7);
  SweepProtocol protocol;
  protocol.w_plus_grid = {0, 2};
  protocol.pool_size = 50;
  SweepOptions options;
  options.solve.time_limit_seconds = 30;
  const auto result = sweep(data, folds, protocol, LatticeSpec::uniform(4), options);
  if (result.points.size() != 2 || result.points[0].status != PointStatus::kOk ||
      result.points[1].status != PointStatus::kOk) {
    return {false, "sweep point failed"};
  }
  const auto& zero = result.points[0].test;
  const auto& two = result.points[1].test;
  const bool ok = zero.fpr() == 0 && zero.tpr() == 0 && two.fpr() == 1 && two.tpr() == 1 &&
                  result.test_curve.auc == make_rational(1, 2);
  return {ok, "W+=0 -> (" + to_string(zero.fpr()) + "," + to_string(zero.tpr()) + "), W+=2 -> (" +
                  to_string(two.fpr()) + "," + to_string(two.tpr()) + "), AUC " + to_string(result.test_curve.auc)};
}

Verdict separable_recovery() {
  std::vector<std::string> names;
  for (int j = 1; j <= 10; ++j) names.push_back("x" + std::to_string(j));
  std::vector<int> points(10, 0);
  points[0] = 3;
  points[3] = -2;
  points[6] = 1;
  const auto truth = ScoringSystem::from_dense(-1, points, names);
  const auto data = synth_planted(truth, 2000, 808);
  const auto folds = make_folds(data, 8);
  auto protocol = SweepProtocol::uniform(5);
  protocol.pool_size = 100;
  SweepOptions options;
  options.solve.time_limit_seconds = 30;
  const auto result = sweep(data, folds, protocol, LatticeSpec::uniform(10), options);
  int recovered = 0;
  for (const auto& p : result.points) recovered += p.status == PointStatus::kOk && p.model.support() == truth.support();
  return {result.test_curve.auc >= make_rational(95, 100) && recovered > 0,
          "test AUC " + fmt("%.4f", to_double(result.test_curve.auc)) + " (need >= 0.95); planted support recovered at " +
              std::to_string(recovered) + "/5 points"};
}

Verdict apriori() {
  SeededRng rng(909);
  std::size_t matched = 0;
  std::size_t anti = 0;
  std::size_t pairs = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 20 + rng.below(181);
    const std::size_t p = 2 + rng.below(9);
    const auto data = testing::random_dataset(rng, n, p, 0.3 + 0.4 * rng.uniform());
    MiningOptions opt;
    opt.min_support = make_rational(1 + rng.below(10), 100);
    const auto rules = mine_rules(data, opt);
    // Exhaustive enumeration with the same pruning premise.
    std::vector<std::vector<std::size_t>> expected;
    auto count = [&](const std::vector<std::size_t>& ant) {
      std::int64_t joint = 0;
      std::int64_t held = 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool holds = true;
        for (std::size_t j : ant) holds = holds && data.at(i, j);
        held += holds;
        joint += holds && data.label(i) == 1;
      }
      return std::pair{held, joint};
    };
    auto frequent = [&](std::int64_t joint) { return make_rational(joint, static_cast<std::int64_t>(n)) >= opt.min_support; };
    auto qualifies = [&](const std::vector<std::size_t>& ant) {
      const auto [held, joint] = count(ant);
      return held > 0 && frequent(joint) && make_rational(joint, held) >= opt.min_confidence;
    };
    for (std::size_t a = 0; a < p; ++a) {
      if (qualifies({a})) expected.push_back({a});
      for (std::size_t b = a + 1; b < p; ++b) {
        if (frequent(count({a}).second) && frequent(count({b}).second) && qualifies({a, b})) expected.push_back({a, b});
      }
    }
    std::set<std::vector<std::size_t>> got;
    bool metrics_ok = true;
    for (const auto& r : rules) {
      got.insert(r.antecedent);
      const auto [held, joint] = count(r.antecedent);
      metrics_ok = metrics_ok && r.support == make_rational(joint, static_cast<std::int64_t>(n)) &&
                   r.confidence == make_rational(joint, held);
      if (r.antecedent.size() == 2) {
        ++pairs;
        anti += r.support <= make_rational(count({r.antecedent[0]}).second, static_cast<std::int64_t>(n)) &&
                r.support <= make_rational(count({r.antecedent[1]}).second, static_cast<std::int64_t>(n));
      }
    }
    matched += metrics_ok && got == std::set<std::vector<std::size_t>>(expected.begin(), expected.end()) &&
               rules.size() == expected.size();
  }
  // 843 rows hold both features, 700 of them positive; 5890 positives in 10000 rows.
  std::vector<std::vector<int>> rows;
  std::vector<int> labels;
  auto block = [&](std::vector<int> pattern, int count, int positives) {
    for (int k = 0; k < count; ++k) {
      rows.push_back(pattern);
      labels.push_back(k < positives ? 1 : -1);
    }
  };
  block({1, 1}, 843, 700);
  block({1, 0}, 1000, 500);
  block({0, 1}, 2000, 1300);
  block({0, 0}, 6157, 3390);
  const auto fixture = BinaryDataset::from_rows({"young", "many_priors"}, rows, labels);
  const auto m = rule_metrics(fixture, std::vector<std::size_t>{0, 1});
  const double support = to_double(m.support());
  const double confidence = to_double(*m.confidence());
  const double lift = to_double(*m.lift());
  const bool illustration = std::round(support * 100) == 7 && std::round(confidence * 100) == 83 &&
                            std::round(lift * 100) == 141;
  return {matched == 30 && anti == pairs && illustration,
          std::to_string(matched) + "/30 datasets match enumeration; anti-monotone on " + std::to_string(anti) + "/" +
              std::to_string(pairs) + " mined pairs; fixture support " + fmt("%.2f", support) + ", confidence " +
              fmt("%.2f", confidence) + ", lift " + fmt("%.2f", lift)};
}

Verdict calibration_sanity() {
  // P(y=+1 | x) depends on x only through the model score: sigmoid(a * score).
  const std::vector<int> points{3, 2, 2, -2, 1, -1};
  const int intercept = -2;
  const double a = 0.55;
  SynthSpec spec{{"x1", "x2", "x3", "x4", "x5", "x6"}, {0.5, 0.4, 0.5, 0.45, 0.5, 0.4}, {}, a * intercept};
  for (int pt : points) spec.weights.push_back(a * pt);
  std::vector<double> truth;
  const auto data = synth_generate(spec, 10000, 1, truth);
  const auto model = ScoringSystem::from_dense(intercept, points, spec.names);
  const auto table = calibration(model, data, 10, Binning::kEqualFrequency);
  double worst = 0;
  for (const auto& bin : table.bins) {
    double sum = 0;
    std::int64_t count = 0;
    for (std::size_t i = 0; i < data.num_rows(); ++i) {
      const auto s = score(model, data.row(i));
      if (s >= bin.min_score && s <= bin.max_score) {
        sum += 1.0 / (1.0 + std::exp(-a * static_cast<double>(s)));
        ++count;
      }
    }
    worst = std::max(worst, std::abs(to_double(bin.rate()) - sum / static_cast<double>(count)));
  }
  return {worst <= 0.03 && table.total() == 10000,
          std::to_string(table.bins.size()) + " bins, largest deviation " + fmt("%.4f", worst) + " (limit 0.03)"};
}

Verdict full_scale_smoke() {
  Scratch scratch("c11");
  const auto data = full_scale_data();
  write_csv(data, scratch.path("data.csv"));
  const auto start = Clock::now();
  const int code = slim_cli({"train", "--data", scratch.path("data.csv"), "--time-limit", "60", "--out", scratch.path("t")});
  const double elapsed = seconds_since(start);
  if (code != 0) return {false, "train exited with code " + std::to_string(code)};

  const auto doc = model_from_json(cli::read_file(scratch.path("t/model.json")));
  const auto report = nlohmann::json::parse(cli::read_file(scratch.path("t/report.json")));
  const Rational lower = parse_rational(report.at("lower_bound").get<std::string>());
  const Rational best = parse_rational(report.at("best_objective").get<std::string>());
  const double gap = report.at("gap_value").get<double>();
  bool feasible = true;
  try {
    doc.model.check_feasible(doc.lattice, 8);
  } catch (const std::exception&) {
    feasible = false;
  }
  const auto manifest = cli::RunManifest::from_json(cli::read_file(scratch.path("t/train.manifest.json")));
  bool manifest_ok = manifest.command == "train" && !manifest.finished.empty() && manifest.inputs.size() == 1 &&
                     manifest.inputs.begin()->second == cli::sha256_file(scratch.path("data.csv"));
  for (const auto& [name, hash] : manifest.outputs) {
    manifest_ok = manifest_ok && cli::sha256_file(scratch.root / "t" / name) == hash;
  }

  if (slim_cli({"export-mps", "--data", scratch.path("data.csv"), "--variant", "aggregated", "--out",
                scratch.path("m")}) != 0) {
    return {false, "export-mps failed"};
  }
  const std::string command = std::string(SLIM_PYTHON) + " " + SLIM_HIGHS_SCRIPT + " " + scratch.path("m/aggregated.mps") +
                              " --time-limit 120";
  std::string output;
  if (FILE* pipe = ::popen(command.c_str(), "r")) {
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) output += buf;
    ::pclose(pipe);
  }
  nlohmann::json highs;
  try {
    highs = nlohmann::json::parse(output);
  } catch (const std::exception&) {
    return {false, "external solver produced no result: " + output};
  }
  if (highs.contains("error")) return {false, "external solver: " + highs.at("error").get<std::string>()};
  const bool has_solution = highs.at("has_solution").get<bool>();
  const double highs_obj = has_solution ? highs.at("objective").get<double>() : NAN;
  const double bound = to_double(lower);
  const bool above = has_solution && highs_obj >= bound - 1e-9 * std::max(1.0, std::abs(bound));

  std::ostringstream detail;
  detail << doc.model.l0() << "-term model in " << fmt("%.1f", elapsed) << " s, status "
         << report.at("status").get<std::string>() << ", objective " << fmt("%.6f", to_double(best)) << ", bound "
         << fmt("%.6f", bound) << ", gap " << fmt("%.4f", gap) << "; manifest " << (manifest_ok ? "valid" : "INVALID")
         << "; external solver (" << highs.at("status").get<std::string>() << ", " << highs.at("rows").get<int>()
         << " rows) objective " << (has_solution ? fmt("%.6f", highs_obj) : std::string("none"));
  return {feasible && doc.model.l0() <= 8 && std::isfinite(gap) && manifest_ok && above, detail.str()};
}

Verdict determinism() {
  Scratch scratch("c12");
  // Small enough to finish optimal: a time-limited stop is not reproducible.
  SynthSpec spec{{}, std::vector<double>(6, 0.4), {1.2, -0.9, 0.0, 0.7, -1.1, 0.5}, -0.2};
  write_csv(synth_generate(spec, 2000, 1212), scratch.path("data.csv"));
  for (const char* dir : {"a", "b"}) {
    if (slim_cli({"train", "--data", scratch.path("data.csv"), "--seed", "12", "--time-limit", "60", "--out",
                  scratch.path(dir)}) != 0) {
      return {false, "train failed"};
    }
  }
  const auto first = cli::read_file(scratch.path("a/model.json"));
  const auto status = nlohmann::json::parse(cli::read_file(scratch.path("a/report.json"))).at("status").get<std::string>();
  const bool same = first == cli::read_file(scratch.path("b/model.json"));
  const bool replayed =
      slim_cli({"replay", "--manifest", scratch.path("a/train.manifest.json"), "--out", scratch.path("r")}) == 0 &&
      cli::read_file(scratch.path("r/model.json")) == first;
  return {same && replayed && status == "optimal",
          "solve " + status + "; " + std::string(same ? "model JSON byte-identical across reruns" : "model JSON differs") +
                                (replayed ? "; replay reproduces it" : "; replay FAILED") + " (sha256 " +
                                cli::sha256_text(first).substr(0, 12) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"worked two-feature example", worked_example},
      {"l1 tie-break and no scaled duplicates", tie_break},
      {"bound validity", bound_validity},
      {"aggregation invariance", aggregation_invariance},
      {"polishing", polishing},
      {"sweep endpoints", sweep_endpoints},
      {"separable recovery", separable_recovery},
      {"apriori oracle", apriori},
      {"calibration sanity", calibration_sanity},
      {"full-scale smoke", full_scale_smoke},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << criteria[k].first << "): " << v.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
