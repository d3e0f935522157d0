#include "slim/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "slim/csv.hpp"
#include "slim/errors.hpp"

namespace slim {

CutRule CutRule::band(std::string name, std::string source, double lower, double upper) {
  return CutRule{std::move(name), CutKind::kBand,
                 ThresholdRule{std::move(source), Comparator::kBetween, lower, upper}};
}

CutRule CutRule::threshold(std::string name, std::string source, Comparator comparator, double cut) {
  if (comparator == Comparator::kBetween) throw ConfigError("threshold rules take a one-sided comparator");
  return CutRule{std::move(name), CutKind::kThreshold, ThresholdRule{std::move(source), comparator, cut, cut}};
}

namespace {

void check_cuts(std::span<const CutRule> cuts) {
  std::vector<const CutRule*> bands;
  for (const auto& c : cuts) {
    if (c.name.empty()) throw ConfigError("cut rule without a name");
    if (c.kind == CutKind::kThreshold) {
      if (!std::isfinite(c.rule.lower)) throw ConfigError("rule '" + c.name + "' has a non-finite cut");
      if (c.rule.comparator == Comparator::kBetween) {
        throw ConfigError("threshold rule '" + c.name + "' needs a one-sided comparator");
      }
      continue;
    }
    if (std::isnan(c.rule.lower) || std::isnan(c.rule.upper) || c.rule.lower > c.rule.upper) {
      throw ConfigError("band '" + c.name + "' is not a valid interval");
    }
    if (std::isinf(c.rule.lower) && std::isinf(c.rule.upper)) {
      throw ConfigError("band '" + c.name + "' must have at least one finite end");
    }
    bands.push_back(&c);
  }
  std::sort(bands.begin(), bands.end(), [](const CutRule* a, const CutRule* b) {
    return a->rule.lower < b->rule.lower;
  });
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (bands[i]->rule.lower <= bands[i - 1]->rule.upper) {
      throw ConfigError("bands '" + bands[i - 1]->name + "' and '" + bands[i]->name + "' overlap");
    }
  }
}

}  // namespace

std::vector<BinarizedColumn> binarize_continuous(std::span<const double> raw_column,
                                                 std::span<const CutRule> cuts) {
  check_cuts(cuts);
  for (std::size_t i = 0; i < raw_column.size(); ++i) {
    if (std::isnan(raw_column[i])) throw DataError("NaN at row " + std::to_string(i + 1));
  }
  std::vector<BinarizedColumn> out;
  out.reserve(cuts.size());
  for (const auto& c : cuts) {
    BinarizedColumn col{FeatureSpec{c.name, FeatureKind::kThresholdedContinuous, c.rule}, {}};
    col.values.reserve(raw_column.size());
    for (double v : raw_column) col.values.push_back(c.rule.holds(v) ? 1 : 0);
    out.push_back(std::move(col));
  }
  return out;
}

namespace {

double parse_bound(const std::string& token, int line) {
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": bad number '" + token + "'");
  }
}

Comparator parse_comparator(const std::string& token, int line) {
  if (token == "le" || token == "<=") return Comparator::kLessEqual;
  if (token == "lt" || token == "<") return Comparator::kLess;
  if (token == "ge" || token == ">=") return Comparator::kGreaterEqual;
  if (token == "gt" || token == ">") return Comparator::kGreater;
  throw ConfigError("line " + std::to_string(line) + ": unknown comparator '" + token + "'");
}

}  // namespace

EncodingPlan parse_encoding_rules(const std::string& text) {
  EncodingPlan plan;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto fail = [&](const std::string& why) {
      throw ConfigError("line " + std::to_string(line) + ": " + why);
    };
    if (tok[0] == "band") {
      if (tok.size() != 5) fail("expected 'band <source> <name> <lower> <upper>'");
      plan.order.push_back(static_cast<long>(plan.cuts.size()));
      const double lower = parse_bound(tok[3], line);
      const double upper = parse_bound(tok[4], line);
      if (lower > upper) fail("band lower end exceeds its upper end");
      if (std::isinf(lower) && std::isinf(upper)) fail("band needs at least one finite end");
      plan.cuts.push_back(CutRule::band(tok[2], tok[1], lower, upper));
    } else if (tok[0] == "threshold") {
      if (tok.size() != 5) fail("expected 'threshold <source> <name> <op> <value>'");
      const double cut = parse_bound(tok[4], line);
      if (!std::isfinite(cut)) fail("threshold cut must be finite");
      plan.order.push_back(static_cast<long>(plan.cuts.size()));
      plan.cuts.push_back(CutRule::threshold(tok[2], tok[1], parse_comparator(tok[3], line), cut));
    } else if (tok[0] == "passthrough") {
      if (tok.size() != 2 && tok.size() != 3) fail("expected 'passthrough <source> [name]'");
      plan.order.push_back(~static_cast<long>(plan.passthrough.size()));
      plan.passthrough.push_back({tok[1], tok.size() == 3 ? tok[2] : tok[1]});
    } else {
      fail("unknown directive '" + tok[0] + "'");
    }
  }
  if (plan.order.empty()) throw ConfigError("rules file defines no output columns");
  // Validate band overlap per source column up front so errors surface before reading data.
  std::map<std::string, std::vector<CutRule>> by_source;
  for (const auto& c : plan.cuts) by_source[c.rule.source_column].push_back(c);
  for (const auto& [source, cuts] : by_source) check_cuts(cuts);
  return plan;
}

BinaryDataset encode_csv(const std::string& raw_path, const EncodingPlan& plan,
                         const std::string& label_column, const std::string& positive_token) {
  const csv::Table table = csv::read(raw_path);
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < table.header.size(); ++c) column[table.header[c]] = c;
  const auto find = [&](const std::string& name) {
    auto it = column.find(name);
    if (it == column.end()) throw DataError(raw_path + ": column '" + name + "' not found");
    return it->second;
  };
  const std::size_t label_index = find(label_column);
  const std::size_t n = table.rows.size();
  if (n == 0) throw DataError(raw_path + ": no data rows");

  std::map<std::string, std::vector<double>> numeric;
  const auto numeric_column = [&](const std::string& name) -> const std::vector<double>& {
    auto it = numeric.find(name);
    if (it != numeric.end()) return it->second;
    const std::size_t c = find(name);
    std::vector<double> values(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& cell = table.rows[r][c];
      try {
        std::size_t used = 0;
        values[r] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        if (cell == "nan" || cell == "NaN" || cell == "NA" || cell.empty()) {
          values[r] = std::numeric_limits<double>::quiet_NaN();
        } else {
          throw DataError(raw_path + ":" + std::to_string(table.line_numbers[r]) + ": column '" + name +
                          "' has non-numeric value '" + cell + "'");
        }
      }
    }
    return numeric.emplace(name, std::move(values)).first->second;
  };

  std::vector<BinarizedColumn> columns(plan.order.size());
  std::map<std::string, std::vector<std::size_t>> cuts_by_source;
  for (std::size_t k = 0; k < plan.order.size(); ++k) {
    if (plan.order[k] >= 0) cuts_by_source[plan.cuts[plan.order[k]].rule.source_column].push_back(k);
  }
  for (const auto& [source, slots] : cuts_by_source) {
    std::vector<CutRule> cuts;
    for (std::size_t k : slots) cuts.push_back(plan.cuts[plan.order[k]]);
    const auto& raw = numeric_column(source);
    std::vector<BinarizedColumn> out;
    try {
      out = binarize_continuous(raw, cuts);
    } catch (const DataError& e) {
      throw DataError(raw_path + ": column '" + source + "': " + e.what());
    }
    for (std::size_t i = 0; i < slots.size(); ++i) columns[slots[i]] = std::move(out[i]);
  }
  for (std::size_t k = 0; k < plan.order.size(); ++k) {
    if (plan.order[k] >= 0) continue;
    const auto& pass = plan.passthrough[~plan.order[k]];
    const std::size_t c = find(pass.source);
    BinarizedColumn col{FeatureSpec{pass.name, FeatureKind::kBinary, {}}, std::vector<std::uint8_t>(n)};
    for (std::size_t r = 0; r < n; ++r) {
      const auto& cell = table.rows[r][c];
      if (cell != "0" && cell != "1") {
        throw DataError(raw_path + ":" + std::to_string(table.line_numbers[r]) + ": passthrough column '" +
                        pass.source + "' has non-binary value '" + cell + "'");
      }
      col.values[r] = cell == "1" ? 1 : 0;
    }
    columns[k] = std::move(col);
  }

  std::vector<FeatureSpec> features;
  for (auto& c : columns) features.push_back(c.spec);
  std::vector<std::uint8_t> x(n * columns.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) x[r * columns.size() + k] = columns[k].values[r];
  }
  std::vector<int> y(n);
  std::string other;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& token = table.rows[r][label_index];
    if (token == positive_token) {
      y[r] = 1;
      continue;
    }
    if (other.empty()) other = token;
    if (token != other) {
      throw DataError(raw_path + ":" + std::to_string(table.line_numbers[r]) +
                      ": label column has more than two tokens");
    }
    y[r] = -1;
  }
  return BinaryDataset(std::move(features), std::move(x), std::move(y));
}

}  // namespace slim
