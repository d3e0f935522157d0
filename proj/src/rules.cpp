#include "slim/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "slim/errors.hpp"

namespace slim {

Rational RuleMetrics::support() const { return rows == 0 ? Rational(0) : make_rational(joint_rows, rows); }

std::optional<Rational> RuleMetrics::confidence() const {
  if (antecedent_rows == 0) return std::nullopt;
  return make_rational(joint_rows, antecedent_rows);
}

std::optional<Rational> RuleMetrics::lift() const {
  if (antecedent_rows == 0 || positive_rows == 0) return std::nullopt;
  return make_rational(joint_rows, antecedent_rows) / make_rational(positive_rows, rows);
}

RuleMetrics rule_metrics(const BinaryDataset& data, std::span<const std::size_t> antecedent) {
  if (antecedent.empty()) throw ConfigError("rule antecedent is empty");
  for (std::size_t j : antecedent) {
    if (j >= data.num_features()) throw ConfigError("rule feature index out of range");
  }
  RuleMetrics m;
  m.rows = static_cast<std::int64_t>(data.num_rows());
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    const bool positive = data.label(i) == 1;
    m.positive_rows += positive;
    const bool holds = std::all_of(antecedent.begin(), antecedent.end(), [&](std::size_t j) { return data.at(i, j); });
    if (!holds) continue;
    ++m.antecedent_rows;
    m.joint_rows += positive;
  }
  return m;
}

void MiningOptions::validate(std::size_t num_features) const {
  if (min_support <= 0 || min_support > 1) throw ConfigError("min_support must lie in (0, 1]");
  if (min_confidence <= 0 || min_confidence > 1) throw ConfigError("min_confidence must lie in (0, 1]");
  if (max_antecedent != 1 && max_antecedent != 2) throw ConfigError("antecedents have 1 or 2 features");
  for (std::size_t j : require_any) {
    if (j >= num_features) throw ConfigError("required feature index out of range");
  }
}

std::vector<AssociationRule> mine_rules(const BinaryDataset& data, const MiningOptions& options) {
  options.validate(data.num_features());
  const std::size_t p = data.num_features();
  const std::int64_t n = static_cast<std::int64_t>(data.num_rows());

  // Column-wise counts: active rows and active positive rows per feature
  // and per feature pair.
  std::vector<std::int64_t> active(p, 0);
  std::vector<std::int64_t> joint(p, 0);
  std::int64_t positives = 0;
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    const bool positive = data.label(i) == 1;
    positives += positive;
    for (std::size_t j = 0; j < p; ++j) {
      if (data.at(i, j)) {
        ++active[j];
        joint[j] += positive;
      }
    }
  }
  auto frequent = [&](std::int64_t joint_rows) { return make_rational(joint_rows, n) >= options.min_support; };

  std::vector<AssociationRule> rules;
  auto consider = [&](std::vector<std::size_t> antecedent, std::int64_t ant_rows, std::int64_t joint_rows) {
    if (ant_rows == 0 || !frequent(joint_rows)) return;
    RuleMetrics m{n, ant_rows, joint_rows, positives};
    const Rational confidence = *m.confidence();
    if (confidence < options.min_confidence) return;
    if (!options.require_any.empty() &&
        std::none_of(antecedent.begin(), antecedent.end(), [&](std::size_t j) {
          return std::find(options.require_any.begin(), options.require_any.end(), j) != options.require_any.end();
        })) {
      return;
    }
    rules.push_back(AssociationRule{std::move(antecedent), m, m.support(), confidence, *m.lift()});
  };

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < p; ++j) {
    if (frequent(joint[j])) kept.push_back(j);
    consider({j}, active[j], joint[j]);
  }
  if (options.max_antecedent == 2) {
    for (std::size_t a = 0; a < kept.size(); ++a) {
      for (std::size_t b = a + 1; b < kept.size(); ++b) {
        const std::size_t ja = kept[a];
        const std::size_t jb = kept[b];
        std::int64_t ant_rows = 0;
        std::int64_t joint_rows = 0;
        for (std::size_t i = 0; i < data.num_rows(); ++i) {
          if (data.at(i, ja) && data.at(i, jb)) {
            ++ant_rows;
            joint_rows += data.label(i) == 1;
          }
        }
        consider({ja, jb}, ant_rows, joint_rows);
      }
    }
  }
  std::sort(rules.begin(), rules.end(), [](const AssociationRule& x, const AssociationRule& y) {
    if (x.lift != y.lift) return x.lift > y.lift;
    if (x.confidence != y.confidence) return x.confidence > y.confidence;
    if (x.support != y.support) return x.support > y.support;
    return x.antecedent < y.antecedent;
  });
  return rules;
}

std::string rules_to_csv(const std::vector<AssociationRule>& rules, const std::vector<std::string>& feature_names,
                         int digits) {
  auto fmt = [&](const Rational& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, to_double(v));
    return std::string(buf);
  };
  auto quote = [](const std::string& text) {
    if (text.find_first_of(",\"") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "rule,lift,support,confidence\n";
  for (const auto& r : rules) {
    std::string text;
    for (std::size_t k = 0; k < r.antecedent.size(); ++k) {
      if (k) text += " AND ";
      text += feature_names.at(r.antecedent[k]);
    }
    out << quote(text) << ',' << fmt(r.lift) << ',' << fmt(r.support) << ',' << fmt(r.confidence) << '\n';
  }
  return out.str();
}

}  // namespace slim
