#include "slim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

#include "slim/errors.hpp"

namespace slim {

SweepProtocol SweepProtocol::preset(std::string_view name) {
  SweepProtocol p;
  auto range = [&](std::int64_t first, std::int64_t last, std::int64_t step, std::int64_t den) {
    for (std::int64_t v = first; v <= last; v += step) p.w_plus_grid.push_back(make_rational(v, den));
  };
  if (name == "balanced") {
    range(1, 19, 1, 10);
  } else if (name == "imbalanced") {
    range(1815, 1995, 5, 1000);
  } else if (name == "extreme") {
    range(1975, 1995, 1, 1000);
  } else {
    throw ConfigError("unknown grid preset '" + std::string(name) + "' (expected balanced, imbalanced or extreme)");
  }
  return p;
}

SweepProtocol SweepProtocol::uniform(int count) {
  if (count < 1) throw ConfigError("grid needs at least one point");
  SweepProtocol p;
  for (int k = 1; k <= count; ++k) p.w_plus_grid.push_back(make_rational(2 * k, count + 1));
  return p;
}

void SweepProtocol::validate() const {
  if (w_plus_grid.empty()) throw ConfigError("W+ grid is empty");
  std::set<Rational> seen;
  for (const auto& w : w_plus_grid) {
    if (w < 0 || w > 2) throw ConfigError("W+ grid value " + to_string(w) + " is outside [0, 2]");
    if (!seen.insert(w).second) throw ConfigError("W+ grid value " + to_string(w) + " is repeated");
  }
  if (cv_folds < 2) throw ConfigError("cross-validation needs at least two folds");
  if (pool_size < 1) throw ConfigError("pool size must be >= 1");
  if (max_terms < 1) throw ConfigError("max_terms must be >= 1");
}

std::string SweepPoint::model_id() const { return "wplus=" + to_string(w_plus); }

std::vector<OperatingPoint> SweepResult::validation_points() const {
  std::vector<OperatingPoint> out;
  for (const auto& p : points) {
    if (p.status != PointStatus::kOk) continue;
    out.push_back(OperatingPoint{p.w_plus, p.validation.fpr(), p.validation.tpr(), p.validation_weighted_error,
                                 p.model_id()});
  }
  return out;
}

namespace {

struct Candidate {
  ScoringSystem model;
  Rational total;
};

struct Fit {
  std::vector<Candidate> candidates;
  SolveReport report;
};

std::string support_key(const ScoringSystem& model) {
  std::string key;
  for (const auto& t : model.terms) key += std::to_string(t.feature) + ',';
  return key;
}

std::string model_key(const ScoringSystem& model) {
  std::string key = std::to_string(model.intercept) + '|';
  for (const auto& t : model.terms) key += std::to_string(t.feature) + ':' + std::to_string(t.points) + ',';
  return key;
}

Fit fit(const BinaryDataset& data, std::span<const std::size_t> rows, const Rational& w_plus,
        const SweepProtocol& protocol, const LatticeSpec& lattice, const SweepOptions& options) {
  const BinaryDataset sub = data.subset(rows);
  const AggregatedDataset agg = aggregate(sub);
  const PenaltyConfig cfg = PenaltyConfig::for_data(w_plus, agg.source_n, agg.num_features(), lattice,
                                                    protocol.max_terms);
  SolveConfig scfg = options.solve;
  scfg.pool_size = protocol.pool_size;
  scfg.on_telemetry = nullptr;
  const SolveResult solved = solve(agg, cfg, lattice, scfg);

  // Polishing depends only on the support, so each support is polished once.
  // The intercept-only model is always a candidate so every k has one.
  std::map<std::string, Candidate> polished;
  {
    const ScoringSystem empty = ScoringSystem::from_dense(0, std::vector<int>(agg.num_features(), 0),
                                                          agg.feature_names);
    const PolishResult pr = polish(empty, agg, cfg, lattice, options.polish);
    polished.emplace(support_key(empty), Candidate{pr.model, pr.value.total});
  }
  for (const auto& entry : solved.pool.entries) {
    const std::string key = support_key(entry.model);
    if (polished.contains(key)) continue;
    const PolishResult pr = polish(entry.model, agg, cfg, lattice, options.polish);
    polished.emplace(key, Candidate{pr.model, pr.value.total});
  }
  Fit out;
  out.report = solved.report;
  std::set<std::string> seen;
  for (auto& [key, c] : polished) {
    if (seen.insert(model_key(c.model)).second) out.candidates.push_back(std::move(c));
  }
  return out;
}

const ScoringSystem* best_with_terms(const std::vector<Candidate>& candidates, int k) {
  const Candidate* best = nullptr;
  for (const auto& c : candidates) {
    if (c.model.l0() > k) continue;
    if (!best || c.total < best->total || (c.total == best->total && tie_break_less(c.model, best->model))) {
      best = &c;
    }
  }
  return best ? &best->model : nullptr;
}

SweepPoint run_point(const BinaryDataset& data, const FoldAssignment& folds, const Rational& w_plus,
                     const SweepProtocol& protocol, const LatticeSpec& lattice, const SweepOptions& options) {
  SweepPoint point;
  point.w_plus = w_plus;
  const Rational w_minus = 2 - w_plus;
  const int kmax = protocol.max_terms;
  std::vector<Rational> error_sum(kmax, 0);
  std::vector<ConfusionCounts> pooled(kmax);

  for (int f = 0; f < protocol.cv_folds; ++f) {
    const Fit fold_fit = fit(data, folds.fold_training_rows(f), w_plus, protocol, lattice, options);
    const auto validation_rows = folds.fold_validation_rows(f);
    for (int k = 1; k <= kmax; ++k) {
      const ScoringSystem* m = best_with_terms(fold_fit.candidates, k);
      const ConfusionCounts c = confusion(*m, data, validation_rows);
      error_sum[k - 1] += c.weighted_error(w_plus, w_minus);
      pooled[k - 1] += c;
    }
  }
  int chosen = 1;
  for (int k = 1; k <= kmax; ++k) {
    point.mean_validation_error.push_back(error_sum[k - 1] / protocol.cv_folds);
    if (error_sum[k - 1] < error_sum[chosen - 1]) chosen = k;
  }
  point.chosen_terms = chosen;
  point.validation = pooled[chosen - 1];
  point.validation_weighted_error = point.mean_validation_error[chosen - 1];

  const Fit full = fit(data, folds.training_rows(), w_plus, protocol, lattice, options);
  point.model = *best_with_terms(full.candidates, chosen);
  point.test = confusion(point.model, data, folds.test_rows());
  point.full_status = full.report.status;
  point.full_gap = full.report.gap;
  point.nodes = full.report.nodes_explored;
  return point;
}

}  // namespace

SweepResult sweep(const BinaryDataset& data, const FoldAssignment& folds, const SweepProtocol& protocol,
                  const LatticeSpec& lattice, const SweepOptions& options) {
  protocol.validate();
  lattice.validate(data.num_features());
  if (folds.test_mask.size() != data.num_rows()) throw DataError("fold assignment does not match the dataset");
  if (folds.num_folds != protocol.cv_folds) {
    throw ConfigError("fold assignment has " + std::to_string(folds.num_folds) + " folds, protocol expects " +
                      std::to_string(protocol.cv_folds));
  }

  const std::size_t count = protocol.w_plus_grid.size();
  std::vector<SweepPoint> points(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const Rational& w = protocol.w_plus_grid[i];
      try {
        points[i] = run_point(data, folds, w, protocol, lattice, options);
      } catch (const std::exception& e) {
        points[i] = SweepPoint{};
        points[i].w_plus = w;
        points[i].status = PointStatus::kFailed;
        points[i].error = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SweepResult result;
  result.points = std::move(points);
  std::vector<RocPoint> test_points;
  std::vector<RocPoint> validation_points;
  for (const auto& p : result.points) {
    if (p.status != PointStatus::kOk) continue;
    test_points.push_back(RocPoint{p.w_plus, p.test.fpr(), p.test.tpr(), p.model_id()});
    validation_points.push_back(RocPoint{p.w_plus, p.validation.fpr(), p.validation.tpr(), p.model_id()});
  }
  result.test_curve = RocCurve::from_points(std::move(test_points));
  result.validation_curve = RocCurve::from_points(std::move(validation_points));
  return result;
}

}  // namespace slim
