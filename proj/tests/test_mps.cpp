#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "slim/errors.hpp"
#include "slim/mps.hpp"
#include "slim/solver.hpp"
#include "support.hpp"

using namespace slim;

namespace {

// Minimal fixed-format reader written against the MPS layout, not against
// the exporter.
struct MpsModel {
  std::vector<std::pair<char, std::string>> rows;  // (type, name); 'N' is the objective
  std::map<std::string, std::map<std::string, Rational>> columns;  // column -> row -> coefficient
  std::vector<std::string> column_order;
  std::set<std::string> integer;
  std::map<std::string, Rational> rhs;
  std::map<std::string, Rational> lower;
  std::map<std::string, Rational> upper;
  std::set<std::string> binary;
  BigInt scale = 1;

  Rational lo(const std::string& c) const {
    if (binary.contains(c)) return 0;
    auto it = lower.find(c);
    return it == lower.end() ? Rational(0) : it->second;
  }
  std::optional<Rational> up(const std::string& c) const {
    if (binary.contains(c)) return Rational(1);
    auto it = upper.find(c);
    if (it == upper.end()) return std::nullopt;
    return it->second;
  }
  std::size_t count_rows(char type, const std::string& prefix) const {
    std::size_t n = 0;
    for (const auto& [t, name] : rows) n += t == type && name.rfind(prefix, 0) == 0;
    return n;
  }
  std::size_t count_columns(const std::string& prefix) const {
    std::size_t n = 0;
    for (const auto& c : column_order) n += c.rfind(prefix, 0) == 0;
    return n;
  }
};

MpsModel parse_mps(const std::string& text) {
  MpsModel m;
  std::istringstream in(text);
  std::string line;
  std::string section;
  bool in_integer = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '*') {
      const auto pos = line.find("objective scale ");
      if (pos != std::string::npos) {
        std::istringstream s(line.substr(pos + 16));
        std::string value;
        s >> value;
        m.scale = BigInt(value);
      }
      continue;
    }
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string tok; fields >> tok;) f.push_back(tok);
    if (line[0] != ' ') {
      section = f[0];
      continue;
    }
    if (section == "ROWS") {
      m.rows.emplace_back(f[0][0], f[1]);
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        in_integer = f[2] == "'INTORG'";
        continue;
      }
      if (!m.columns.contains(f[0])) m.column_order.push_back(f[0]);
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) m.columns[f[0]][f[k]] = parse_rational(f[k + 1]);
      if (in_integer) m.integer.insert(f[0]);
    } else if (section == "RHS") {
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) m.rhs[f[k]] = parse_rational(f[k + 1]);
    } else if (section == "BOUNDS") {
      if (f[0] == "BV") {
        m.binary.insert(f[2]);
      } else if (f[0] == "LO") {
        m.lower[f[2]] = parse_rational(f[3]);
      } else if (f[0] == "UP") {
        m.upper[f[2]] = parse_rational(f[3]);
      }
    }
  }
  return m;
}

struct Check {
  bool feasible = true;
  Rational objective;
};

// Evaluates every row and bound at `values` (missing columns read as 0).
Check evaluate(const MpsModel& m, const std::map<std::string, Rational>& values) {
  std::map<std::string, Rational> activity;
  for (const auto& [col, entries] : m.columns) {
    auto it = values.find(col);
    const Rational v = it == values.end() ? Rational(0) : it->second;
    if (v < m.lo(col)) return {false, 0};
    if (auto u = m.up(col); u && v > *u) return {false, 0};
    for (const auto& [row, coef] : entries) activity[row] += coef * v;
  }
  Check out;
  for (const auto& [type, name] : m.rows) {
    const Rational lhs = activity[name];
    const Rational rhs = m.rhs.contains(name) ? m.rhs.at(name) : Rational(0);
    if (type == 'N') {
      out.objective = lhs / Rational(m.scale);
    } else if ((type == 'G' && lhs < rhs) || (type == 'L' && lhs > rhs) || (type == 'E' && lhs != rhs)) {
      out.feasible = false;
    }
  }
  return out;
}

std::string col(const char* prefix, std::size_t k, int width) {
  std::string digits = std::to_string(k);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

// The canonical completion of a model: error indicators per loss row and the
// penalty bookkeeping, in the exporter's column naming.
std::map<std::string, Rational> completion(const MpsModel& m, const ScoringSystem& model,
                                           const std::vector<bool>& errors, const PenaltyConfig& cfg,
                                           bool penalties) {
  std::map<std::string, Rational> v;
  v[col("LAM", 0, 5)] = model.intercept;
  for (std::size_t j = 0; j < model.num_features(); ++j) v[col("LAM", j + 1, 5)] = model.coefficient(j);
  for (std::size_t k = 0; k < errors.size(); ++k) v[col("Z", k + 1, 7)] = errors[k] ? 1 : 0;
  if (penalties) {
    for (std::size_t j = 0; j < model.num_features(); ++j) {
      const int c = model.coefficient(j);
      v[col("ALP", j + 1, 5)] = c != 0;
      v[col("BET", j + 1, 5)] = std::abs(c);
      v[col("PHI", j + 1, 5)] = (cfg.c0 * (c != 0) + cfg.epsilon * std::abs(c)) * Rational(m.scale);
    }
  }
  return v;
}

std::vector<bool> aggregated_errors(const ScoringSystem& model, const AggregatedDataset& agg) {
  std::vector<bool> errors;
  for (const auto& s : agg.positive_patterns) errors.push_back(score(model, s.pattern) <= 0);
  for (const auto& t : agg.negative_patterns) errors.push_back(score(model, t.pattern) >= 1);
  return errors;
}

BinaryDataset a1a2_with_conflict() {
  return BinaryDataset::from_rows({"a1", "a2"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 0}}, {1, -1, -1, -1, -1});
}

}  // namespace

TEST_CASE("mps: variant names") {
  CHECK(parse_mps_variant("general") == MpsVariant::kGeneral);
  CHECK(parse_mps_variant("aggregated") == MpsVariant::kAggregated);
  CHECK(parse_mps_variant("polish") == MpsVariant::kPolish);
  CHECK(to_string(MpsVariant::kPolish) == "polish");
  CHECK_THROWS_AS(parse_mps_variant("lp"), ConfigError);
}

TEST_CASE("mps: aggregated a1/a2 layout") {
  const auto lattice = LatticeSpec::uniform(2, 2, 2);
  {
    const auto agg = aggregate(testing::a1a2_dataset());
    const auto cfg = PenaltyConfig::for_data(1, 4, 2, lattice, 2);
    const auto m = parse_mps(export_mps(agg, cfg, lattice, MpsVariant::kAggregated));
    CHECK(m.count_columns("Z") == 4);
    CHECK(m.count_rows('E', "C") == 0);
    CHECK(m.count_rows('G', "S") == 1);
    CHECK(m.count_rows('G', "T") == 3);
  }
  {
    const auto agg = aggregate(a1a2_with_conflict());
    const auto cfg = PenaltyConfig::for_data(1, 5, 2, lattice, 2);
    const auto m = parse_mps(export_mps(agg, cfg, lattice, MpsVariant::kAggregated));
    CHECK(m.count_columns("Z") == 5);
    CHECK(m.count_rows('E', "C") == 1);
    CHECK(m.count_rows('N', "OBJ") == 1);
    CHECK(m.count_rows('L', "TERMCAP") == 1);
    CHECK(m.count_columns("LAM") == 3);
    CHECK(m.count_columns("ALP") == 2);
    CHECK(m.integer.size() == 3 + 5 + 2);
    CHECK(m.lower.at("LAM00000") == -2);
    CHECK(m.upper.at("LAM00001") == 2);
    CHECK(m.upper.at("BET00002") == 2);
    // Big-M of the positive (0,0) row: 1 + intercept bound.
    CHECK(m.columns.at("Z0000001").at("S0000001") == big_m_loss(agg.positive_patterns[0].pattern, 1, lattice));
    for (const auto& name : m.column_order) CHECK(name.size() <= 8);
    for (const auto& [t, name] : m.rows) CHECK(name.size() <= 8);
  }
}

TEST_CASE("mps: general variant has one loss row per example") {
  const auto d = a1a2_with_conflict();
  const auto agg = aggregate(d);
  const auto lattice = LatticeSpec::uniform(2, 2, 2);
  const auto cfg = PenaltyConfig::for_data(1, 5, 2, lattice, 2);
  const auto m = parse_mps(export_mps(agg, cfg, lattice, MpsVariant::kGeneral));
  CHECK(m.count_rows('G', "E") == 5);
  CHECK(m.count_columns("Z") == 5);
  CHECK(m.count_rows('E', "C") == 0);
}

TEST_CASE("mps: a lattice model with its canonical completion is feasible at the exact objective") {
  SeededRng rng(41);
  for (const auto& inst : testing::oracle_suite(25, 4242)) {
    const auto agg = aggregate(inst.data);
    const auto text = export_mps(agg, inst.cfg, inst.lattice, MpsVariant::kAggregated);
    const auto m = parse_mps(text);
    CHECK(m.scale == mps_objective_scale(agg, inst.cfg, inst.lattice, MpsVariant::kAggregated));
    CHECK(m.count_columns("Z") == agg.positive_patterns.size() + agg.negative_patterns.size());
    CHECK(m.count_rows('E', "C") == agg.conflict_pairs.size());
    for (int k = 0; k < 20; ++k) {
      auto coefs = testing::random_coefficients(rng, inst.lattice);
      int nonzero = 0;
      for (auto& c : coefs) {
        if (c != 0 && ++nonzero > inst.cfg.max_terms) c = 0;
      }
      const int b0 = static_cast<int>(rng.below(2 * inst.lattice.intercept_bound + 1)) - inst.lattice.intercept_bound;
      const auto model = ScoringSystem::from_dense(b0, coefs, agg.feature_names);
      auto errors = aggregated_errors(model, agg);
      const auto check = evaluate(m, completion(m, model, errors, inst.cfg, true));
      CHECK(check.feasible);
      CHECK(check.objective == objective(model, agg, inst.cfg).total);
      // Claiming a misclassified pattern as correct must violate its row.
      for (std::size_t e = 0; e < errors.size(); ++e) {
        if (!errors[e]) continue;
        auto lying = errors;
        lying[e] = false;
        CHECK_FALSE(evaluate(m, completion(m, model, lying, inst.cfg, true)).feasible);
      }
    }
  }
}

TEST_CASE("mps: general variant encodes the symmetric margin") {
  SeededRng rng(42);
  for (const auto& inst : testing::oracle_suite(15, 77)) {
    const auto agg = aggregate(inst.data);
    const auto m = parse_mps(export_mps(agg, inst.cfg, inst.lattice, MpsVariant::kGeneral));
    const auto rows = expand(agg);
    CHECK(m.count_rows('G', "E") == rows.num_rows());
    for (int k = 0; k < 10; ++k) {
      auto coefs = testing::random_coefficients(rng, inst.lattice);
      int nonzero = 0;
      for (auto& c : coefs) {
        if (c != 0 && ++nonzero > inst.cfg.max_terms) c = 0;
      }
      const auto model = ScoringSystem::from_dense(0, coefs, agg.feature_names);
      std::vector<bool> errors;
      Rational loss = 0;
      const Rational n(BigInt(rows.num_rows()));
      for (std::size_t i = 0; i < rows.num_rows(); ++i) {
        const auto s = score(model, rows.row(i));
        const bool err = rows.label(i) * s < 1;  // margin gamma = 1 on both classes
        errors.push_back(err);
        if (err) loss += (rows.label(i) == 1 ? inst.cfg.w_plus : inst.cfg.w_minus) / n;
      }
      const auto check = evaluate(m, completion(m, model, errors, inst.cfg, true));
      CHECK(check.feasible);
      CHECK(check.objective == loss + inst.cfg.c0 * model.l0() + inst.cfg.epsilon * model.l1());
    }
  }
}

TEST_CASE("mps: polish variant is loss-only over the active set") {
  SeededRng rng(43);
  for (const auto& inst : testing::oracle_suite(20, 555)) {
    const auto agg = aggregate(inst.data);
    const auto best = brute_force_solve(agg, inst.cfg, inst.lattice).model;
    const auto active = ActiveSet::of(best);
    const auto m = parse_mps(export_mps(agg, inst.cfg, inst.lattice, MpsVariant::kPolish, active));
    CHECK(m.count_columns("ALP") == 0);
    CHECK(m.count_columns("LAM") == active.size() + 1);
    const auto projected = project_active(agg, active);
    std::vector<int> reduced;
    for (std::size_t j : active.indices) reduced.push_back(best.coefficient(j));
    const auto model = ScoringSystem::from_dense(best.intercept, reduced, projected.feature_names);
    // Columns keep their full-space index.
    std::map<std::string, Rational> values;
    values["LAM00000"] = best.intercept;
    for (std::size_t j : active.indices) values[col("LAM", j + 1, 5)] = best.coefficient(j);
    const auto errors = aggregated_errors(model, projected);
    for (std::size_t k = 0; k < errors.size(); ++k) values[col("Z", k + 1, 7)] = errors[k] ? 1 : 0;
    const auto check = evaluate(m, values);
    CHECK(check.feasible);
    CHECK(check.objective == objective(best, agg, inst.cfg).weighted_error);
  }
  const auto agg = aggregate(testing::a1a2_dataset());
  const auto lattice = LatticeSpec::uniform(2);
  const auto cfg = PenaltyConfig::for_data(1, 4, 2, lattice, 2);
  CHECK_THROWS_AS(export_mps(agg, cfg, lattice, MpsVariant::kPolish), ConfigError);
}
