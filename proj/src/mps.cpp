#include "slim/mps.hpp"

#include <cstdio>
#include <sstream>
#include <utility>
#include <vector>

#include "slim/errors.hpp"

namespace slim {

MpsVariant parse_mps_variant(const std::string& name) {
  if (name == "general") return MpsVariant::kGeneral;
  if (name == "aggregated") return MpsVariant::kAggregated;
  if (name == "polish") return MpsVariant::kPolish;
  throw ConfigError("unknown MPS variant '" + name + "' (expected general, aggregated or polish)");
}

std::string to_string(MpsVariant variant) {
  switch (variant) {
    case MpsVariant::kGeneral:
      return "general";
    case MpsVariant::kAggregated:
      return "aggregated";
    case MpsVariant::kPolish:
      return "polish";
  }
  return "unknown";
}

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

std::string indexed(const char* prefix, std::size_t width, std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, static_cast<int>(width), index);
  return buf;
}

std::string number(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", to_double(value));
  return buf;
}

std::string number(std::int64_t value) { return std::to_string(value); }

enum class RowType : char { kFree = 'N', kEqual = 'E', kGreater = 'G', kLess = 'L' };

struct Column {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;  // row, value
  enum class Kind { kInteger, kBinary, kContinuous } kind = Kind::kContinuous;
  std::optional<std::string> lower;
  std::optional<std::string> upper;
};

class MpsBuilder {
 public:
  explicit MpsBuilder(std::string name) : name_(std::move(name)) { rows_.emplace_back(RowType::kFree, "OBJ"); }

  void comment(const std::string& text) { comments_.push_back(text); }
  void add_row(RowType type, std::string name, std::string rhs = "0") {
    if (rhs != "0") rhs_.emplace_back(name, rhs);
    rows_.emplace_back(type, std::move(name));
  }
  std::size_t add_column(std::string name, Column::Kind kind) {
    columns_.push_back(Column{std::move(name), {}, kind, {}, {}});
    return columns_.size() - 1;
  }
  void set(std::size_t col, const std::string& row, std::string value) {
    if (value == "0") return;
    columns_[col].entries.emplace_back(row, std::move(value));
  }
  void bounds(std::size_t col, std::optional<std::string> lo, std::optional<std::string> hi) {
    columns_[col].lower = std::move(lo);
    columns_[col].upper = std::move(hi);
  }

  std::string str() const {
    std::ostringstream out;
    for (const auto& c : comments_) out << "* " << c << '\n';
    out << "NAME          " << name_ << '\n';
    out << "ROWS\n";
    for (const auto& [type, row] : rows_) out << ' ' << static_cast<char>(type) << "  " << row << '\n';
    out << "COLUMNS\n";
    bool in_integer = false;
    int marker = 0;
    for (const auto& col : columns_) {
      const bool integer = col.kind != Column::Kind::kContinuous;
      if (integer != in_integer) {
        out << "    " << indexed("MARKER", 2, marker++) << "                 'MARKER'                 "
            << (integer ? "'INTORG'" : "'INTEND'") << '\n';
        in_integer = integer;
      }
      for (const auto& [row, value] : col.entries) field_line(out, "", col.name, row, value);
      if (col.entries.empty()) field_line(out, "", col.name, "OBJ", "0");
    }
    if (in_integer) out << "    " << indexed("MARKER", 2, marker) << "                 'MARKER'                 'INTEND'\n";
    out << "RHS\n";
    for (const auto& [row, value] : rhs_) field_line(out, "", "RHS", row, value);
    out << "BOUNDS\n";
    for (const auto& col : columns_) {
      if (col.kind == Column::Kind::kBinary) {
        out << " BV BND       " << col.name << '\n';
        continue;
      }
      if (col.lower) field_line(out, "LO", "BND", col.name, *col.lower);
      if (col.upper) field_line(out, "UP", "BND", col.name, *col.upper);
    }
    out << "ENDATA\n";
    return out.str();
  }

 private:
  static void field_line(std::ostringstream& out, const std::string& type, const std::string& a,
                         const std::string& b, const std::string& value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s  %12s", type.c_str(), a.c_str(), b.c_str(), value.c_str());
    out << buf << '\n';
  }

  std::string name_;
  std::vector<std::string> comments_;
  std::vector<std::pair<RowType, std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> rhs_;
  std::vector<Column> columns_;
};

struct LossScale {
  BigInt scale;
  std::int64_t positive = 0;
  std::int64_t negative = 0;
};

LossScale loss_only_scale(const PenaltyConfig& cfg, std::int64_t n) {
  const Rational pos = cfg.w_plus / Rational(BigInt(n));
  const Rational neg = cfg.w_minus / Rational(BigInt(n));
  LossScale s;
  s.scale = lcm(denominator(pos), denominator(neg));
  s.positive = numerator(pos * Rational(s.scale)).convert_to<std::int64_t>();
  s.negative = numerator(neg * Rational(s.scale)).convert_to<std::int64_t>();
  return s;
}

// Penalty block shared by the general and aggregated variants.
void add_penalties(MpsBuilder& mps, const std::vector<std::size_t>& lambda_cols, const LatticeSpec& lattice,
                   const ScaledObjective& scaled, int max_terms) {
  const std::size_t p = lattice.num_features();
  std::vector<std::size_t> alpha(p);
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t k = j + 1;
    mps.add_row(RowType::kEqual, indexed("PEN", 5, k));
    mps.add_row(RowType::kLess, indexed("L0U", 5, k));
    mps.add_row(RowType::kGreater, indexed("L0L", 5, k));
    mps.add_row(RowType::kLess, indexed("L1U", 5, k));
    mps.add_row(RowType::kGreater, indexed("L1L", 5, k));
  }
  mps.add_row(RowType::kLess, "TERMCAP", number(static_cast<std::int64_t>(max_terms)));
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t k = j + 1;
    const std::size_t lam = lambda_cols[k];
    mps.set(lam, indexed("L0U", 5, k), "1");
    mps.set(lam, indexed("L0L", 5, k), "1");
    mps.set(lam, indexed("L1U", 5, k), "1");
    mps.set(lam, indexed("L1L", 5, k), "1");
    alpha[j] = mps.add_column(indexed("ALP", 5, k), Column::Kind::kBinary);
    mps.set(alpha[j], indexed("PEN", 5, k), number(-scaled.l0_weight));
    mps.set(alpha[j], indexed("L0U", 5, k), number(-static_cast<std::int64_t>(lattice.coef_bound[j])));
    mps.set(alpha[j], indexed("L0L", 5, k), number(static_cast<std::int64_t>(lattice.coef_bound[j])));
    mps.set(alpha[j], "TERMCAP", "1");
  }
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t k = j + 1;
    const std::size_t beta = mps.add_column(indexed("BET", 5, k), Column::Kind::kContinuous);
    mps.set(beta, indexed("PEN", 5, k), number(-scaled.l1_weight));
    mps.set(beta, indexed("L1U", 5, k), "-1");
    mps.set(beta, indexed("L1L", 5, k), "1");
    mps.bounds(beta, "0", number(static_cast<std::int64_t>(lattice.coef_bound[j])));
  }
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t k = j + 1;
    const std::size_t phi = mps.add_column(indexed("PHI", 5, k), Column::Kind::kContinuous);
    mps.set(phi, "OBJ", "1");
    mps.set(phi, indexed("PEN", 5, k), "1");
    mps.bounds(phi, "0", std::nullopt);
  }
}

std::vector<std::size_t> add_lambdas(MpsBuilder& mps, const LatticeSpec& lattice,
                                     const std::vector<std::size_t>& features) {
  // Column 0 is the intercept; the others follow `features`.
  std::vector<std::size_t> cols;
  cols.push_back(mps.add_column(indexed("LAM", 5, 0), Column::Kind::kInteger));
  mps.bounds(cols[0], number(static_cast<std::int64_t>(-lattice.intercept_bound)),
             number(static_cast<std::int64_t>(lattice.intercept_bound)));
  for (std::size_t j : features) {
    const std::size_t c = mps.add_column(indexed("LAM", 5, j + 1), Column::Kind::kInteger);
    mps.bounds(c, number(static_cast<std::int64_t>(-lattice.coef_bound[j])),
               number(static_cast<std::int64_t>(lattice.coef_bound[j])));
    cols.push_back(c);
  }
  return cols;
}

// Loss rows over distinct patterns: positives need score >= 1, negatives
// score <= 0. `lattice_bounds` are the bounds of the columns in `lambda`.
void add_aggregated_loss(MpsBuilder& mps, const AggregatedDataset& data, const std::vector<std::size_t>& lambda,
                         const std::vector<int>& lattice_bounds, int intercept_bound, std::int64_t pos_weight,
                         std::int64_t neg_weight) {
  const std::size_t p = data.num_features();
  std::vector<std::string> pos_rows;
  std::vector<std::string> neg_rows;
  auto big_m = [&](const std::vector<std::uint8_t>& pattern) {
    std::int64_t m = intercept_bound;
    for (std::size_t j = 0; j < p; ++j) m += pattern[j] ? lattice_bounds[j] : 0;
    return m;
  };
  std::size_t z_index = 0;
  for (std::size_t s = 0; s < data.positive_patterns.size(); ++s) {
    pos_rows.push_back(indexed("S", 7, s + 1));
    mps.add_row(RowType::kGreater, pos_rows.back(), "1");
  }
  for (std::size_t t = 0; t < data.negative_patterns.size(); ++t) {
    neg_rows.push_back(indexed("T", 7, t + 1));
    mps.add_row(RowType::kGreater, neg_rows.back());
  }
  for (std::size_t c = 0; c < data.conflict_pairs.size(); ++c) {
    mps.add_row(RowType::kEqual, indexed("C", 7, c + 1), "1");
  }
  std::vector<std::size_t> z_pos;
  std::vector<std::size_t> z_neg;
  for (std::size_t s = 0; s < data.positive_patterns.size(); ++s) {
    const auto& pc = data.positive_patterns[s];
    const std::size_t z = mps.add_column(indexed("Z", 7, ++z_index), Column::Kind::kBinary);
    mps.set(z, "OBJ", number(pos_weight * pc.count));
    mps.set(z, pos_rows[s], number(1 + big_m(pc.pattern)));
    z_pos.push_back(z);
  }
  for (std::size_t t = 0; t < data.negative_patterns.size(); ++t) {
    const auto& pc = data.negative_patterns[t];
    const std::size_t z = mps.add_column(indexed("Z", 7, ++z_index), Column::Kind::kBinary);
    mps.set(z, "OBJ", number(neg_weight * pc.count));
    mps.set(z, neg_rows[t], number(big_m(pc.pattern)));
    z_neg.push_back(z);
  }
  for (std::size_t c = 0; c < data.conflict_pairs.size(); ++c) {
    const auto& pair = data.conflict_pairs[c];
    mps.set(z_pos[pair.positive_index], indexed("C", 7, c + 1), "1");
    mps.set(z_neg[pair.negative_index], indexed("C", 7, c + 1), "1");
  }
  // Score terms of each loss row.
  for (std::size_t s = 0; s < data.positive_patterns.size(); ++s) {
    mps.set(lambda[0], pos_rows[s], "1");
    for (std::size_t j = 0; j < p; ++j) {
      if (data.positive_patterns[s].pattern[j]) mps.set(lambda[j + 1], pos_rows[s], "1");
    }
  }
  for (std::size_t t = 0; t < data.negative_patterns.size(); ++t) {
    mps.set(lambda[0], neg_rows[t], "-1");
    for (std::size_t j = 0; j < p; ++j) {
      if (data.negative_patterns[t].pattern[j]) mps.set(lambda[j + 1], neg_rows[t], "-1");
    }
  }
}

}  // namespace

BigInt mps_objective_scale(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice,
                           MpsVariant variant) {
  if (variant == MpsVariant::kPolish) return loss_only_scale(cfg, data.source_n).scale;
  return ScaledObjective::from(cfg, data.source_n, data.num_positive(), data.num_negative(), data.num_features(),
                               lattice)
      .scale;
}

std::string export_mps(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice,
                       MpsVariant variant, const std::optional<ActiveSet>& active) {
  if (data.source_n < 1) throw DataError("dataset is empty");
  lattice.validate(data.num_features());
  const std::size_t p = data.num_features();
  MpsBuilder mps("SLIM");
  mps.comment("variant " + to_string(variant) + ", N=" + std::to_string(data.source_n) +
              ", P=" + std::to_string(p));

  if (variant == MpsVariant::kPolish) {
    if (!active) throw ConfigError("the polish variant needs an active set");
    const AggregatedDataset reduced = project_active(data, *active);
    const LossScale scale = loss_only_scale(cfg, data.source_n);
    mps.comment("objective scale " + scale.scale.str() + " (true objective = reported / scale)");
    std::vector<int> bounds;
    for (std::size_t j : active->indices) bounds.push_back(lattice.coef_bound[j]);
    const auto lambda = add_lambdas(mps, lattice, active->indices);
    add_aggregated_loss(mps, reduced, lambda, bounds, lattice.intercept_bound, scale.positive, scale.negative);
    return mps.str();
  }

  const ScaledObjective scaled = ScaledObjective::from(cfg, data.source_n, data.num_positive(),
                                                       data.num_negative(), p, lattice);
  mps.comment("objective scale " + scaled.scale.str() + " (true objective = reported / scale)");
  std::vector<std::size_t> all(p);
  for (std::size_t j = 0; j < p; ++j) all[j] = j;
  const auto lambda = add_lambdas(mps, lattice, all);

  if (variant == MpsVariant::kAggregated) {
    add_aggregated_loss(mps, data, lambda, lattice.coef_bound, lattice.intercept_bound, scaled.positive_weight,
                        scaled.negative_weight);
  } else {
    // One row per example: M_i z_i + y_i * score_i >= gamma.
    const std::string gamma = number(lattice.margin);
    std::size_t row = 0;
    auto emit = [&](const PatternCount& pc, int label, std::int64_t weight) {
      const Rational m = big_m_general(pc.pattern, label, lattice);
      for (std::int64_t copy = 0; copy < pc.count; ++copy) {
        const std::string name = indexed("E", 7, ++row);
        mps.add_row(RowType::kGreater, name, gamma);
        const std::size_t z = mps.add_column(indexed("Z", 7, row), Column::Kind::kBinary);
        mps.set(z, "OBJ", number(weight));
        mps.set(z, name, number(m));
        const std::string sign = label == 1 ? "1" : "-1";
        mps.set(lambda[0], name, sign);
        for (std::size_t j = 0; j < p; ++j) {
          if (pc.pattern[j]) mps.set(lambda[j + 1], name, sign);
        }
      }
    };
    for (const auto& pc : data.positive_patterns) emit(pc, 1, scaled.positive_weight);
    for (const auto& pc : data.negative_patterns) emit(pc, -1, scaled.negative_weight);
  }
  add_penalties(mps, lambda, lattice, scaled, cfg.max_terms);
  return mps.str();
}

}  // namespace slim
