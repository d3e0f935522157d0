#include "slim/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string_view>
#include <unordered_map>

#include "slim/csv.hpp"
#include "slim/errors.hpp"

namespace slim {

bool ThresholdRule::holds(double value) const {
  switch (comparator) {
    case Comparator::kLessEqual: return value <= lower;
    case Comparator::kLess: return value < lower;
    case Comparator::kGreaterEqual: return value >= lower;
    case Comparator::kGreater: return value > lower;
    case Comparator::kBetween: return value >= lower && value <= upper;
  }
  return false;
}

BinaryDataset::BinaryDataset(std::vector<FeatureSpec> features, std::vector<std::uint8_t> x_row_major,
                             std::vector<int> labels)
    : features_(std::move(features)), x_(std::move(x_row_major)), labels_(std::move(labels)) {
  if (features_.empty()) throw DataError("dataset needs at least one feature");
  if (labels_.empty()) throw DataError("dataset needs at least one row");
  if (x_.size() != labels_.size() * features_.size()) {
    throw DataError("feature matrix has " + std::to_string(x_.size()) + " cells, expected " +
                    std::to_string(labels_.size() * features_.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& f : features_) {
    if (f.name.empty()) throw DataError("feature names must be non-empty");
    if (!seen.insert(f.name).second) throw DataError("duplicate feature name '" + f.name + "'");
  }
  for (std::uint8_t v : x_) {
    if (v > 1) throw DataError("feature values must be 0 or 1");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) throw DataError("labels must be -1 or +1");
  }
}

BinaryDataset BinaryDataset::from_rows(std::vector<std::string> names,
                                       const std::vector<std::vector<int>>& rows,
                                       const std::vector<int>& labels) {
  std::vector<FeatureSpec> features;
  features.reserve(names.size());
  for (auto& n : names) features.push_back(FeatureSpec{std::move(n), FeatureKind::kBinary, {}});
  std::vector<std::uint8_t> x;
  x.reserve(rows.size() * features.size());
  for (const auto& r : rows) {
    if (r.size() != features.size()) throw DataError("row width does not match feature count");
    for (int v : r) {
      if (v != 0 && v != 1) throw DataError("feature values must be 0 or 1");
      x.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return BinaryDataset(std::move(features), std::move(x), labels);
}

std::vector<std::string> BinaryDataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features_.size());
  for (const auto& f : features_) names.push_back(f.name);
  return names;
}

std::size_t BinaryDataset::num_positive() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

BinaryDataset BinaryDataset::subset(std::span<const std::size_t> rows) const {
  std::vector<std::uint8_t> x;
  x.reserve(rows.size() * num_features());
  std::vector<int> y;
  y.reserve(rows.size());
  for (std::size_t i : rows) {
    if (i >= num_rows()) throw DataError("row index out of range");
    const auto r = row(i);
    x.insert(x.end(), r.begin(), r.end());
    y.push_back(labels_[i]);
  }
  return BinaryDataset(features_, std::move(x), std::move(y));
}

BinaryDataset BinaryDataset::select_features(std::span<const std::size_t> columns) const {
  std::vector<FeatureSpec> features;
  for (std::size_t j : columns) {
    if (j >= num_features()) throw DataError("feature index out of range");
    features.push_back(features_[j]);
  }
  std::vector<std::uint8_t> x;
  x.reserve(num_rows() * columns.size());
  for (std::size_t i = 0; i < num_rows(); ++i) {
    for (std::size_t j : columns) x.push_back(at(i, j));
  }
  return BinaryDataset(std::move(features), std::move(x), labels_);
}

std::int64_t AggregatedDataset::num_positive() const {
  std::int64_t total = 0;
  for (const auto& p : positive_patterns) total += p.count;
  return total;
}

std::int64_t AggregatedDataset::num_negative() const {
  std::int64_t total = 0;
  for (const auto& p : negative_patterns) total += p.count;
  return total;
}

AggregatedDataset aggregate(const BinaryDataset& dataset) {
  AggregatedDataset out;
  out.feature_names = dataset.feature_names();
  out.source_n = static_cast<std::int64_t>(dataset.num_rows());

  // Key is the raw 0/1 bytes, so equality is exact bitwise equality.
  std::unordered_map<std::string, std::size_t> positive_index;
  std::unordered_map<std::string, std::size_t> negative_index;
  for (std::size_t i = 0; i < dataset.num_rows(); ++i) {
    const auto r = dataset.row(i);
    std::string key(reinterpret_cast<const char*>(r.data()), r.size());
    const bool positive = dataset.label(i) == 1;
    auto& index = positive ? positive_index : negative_index;
    auto& list = positive ? out.positive_patterns : out.negative_patterns;
    auto [it, inserted] = index.try_emplace(std::move(key), list.size());
    if (inserted) list.push_back(PatternCount{{r.begin(), r.end()}, 0});
    ++list[it->second].count;
  }

  for (std::size_t s = 0; s < out.positive_patterns.size(); ++s) {
    const auto& p = out.positive_patterns[s].pattern;
    std::string key(reinterpret_cast<const char*>(p.data()), p.size());
    if (auto it = negative_index.find(key); it != negative_index.end()) {
      out.conflict_pairs.push_back(ConflictPair{s, it->second});
    }
  }
  return out;
}

BinaryDataset expand(const AggregatedDataset& data) {
  std::vector<FeatureSpec> features;
  for (const auto& n : data.feature_names) features.push_back(FeatureSpec{n, FeatureKind::kBinary, {}});
  std::vector<std::uint8_t> x;
  std::vector<int> y;
  auto emit = [&](const std::vector<PatternCount>& list, int label) {
    for (const auto& p : list) {
      for (std::int64_t c = 0; c < p.count; ++c) {
        x.insert(x.end(), p.pattern.begin(), p.pattern.end());
        y.push_back(label);
      }
    }
  };
  emit(data.positive_patterns, 1);
  emit(data.negative_patterns, -1);
  return BinaryDataset(std::move(features), std::move(x), std::move(y));
}

BinaryDataset load_csv(const std::string& path, const std::string& label_column,
                       const std::string& positive_token) {
  const csv::Table table = csv::read(path);

  std::set<std::string> names;
  std::size_t label_index = table.header.size();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name.empty()) throw DataError(path + ": header column " + std::to_string(c + 1) + " is empty");
    if (!names.insert(name).second) throw DataError(path + ": duplicate header name '" + name + "'");
    if (name == label_column) label_index = c;
  }
  if (label_index == table.header.size()) {
    throw DataError(path + ": label column '" + label_column + "' not found");
  }

  std::vector<FeatureSpec> features;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != label_index) features.push_back(FeatureSpec{table.header[c], FeatureKind::kBinary, {}});
  }

  std::vector<std::uint8_t> x;
  x.reserve(table.rows.size() * features.size());
  std::vector<int> y;
  y.reserve(table.rows.size());
  std::string other_token;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_index) {
        const auto& token = cells[c];
        if (token == positive_token) {
          y.push_back(1);
        } else {
          if (other_token.empty()) {
            other_token = token;
          } else if (token != other_token) {
            throw DataError(where + ": label column '" + label_column + "' has more than two tokens ('" +
                            positive_token + "', '" + other_token + "', '" + token + "')");
          }
          y.push_back(-1);
        }
        continue;
      }
      const auto& cell = cells[c];
      if (cell == "0") {
        x.push_back(0);
      } else if (cell == "1") {
        x.push_back(1);
      } else {
        throw DataError(where + ": column '" + table.header[c] + "' has non-binary value '" + cell + "'");
      }
    }
  }
  if (y.empty()) throw DataError(path + ": no data rows");
  return BinaryDataset(std::move(features), std::move(x), std::move(y));
}

void write_csv(const BinaryDataset& dataset, const std::string& path, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& f : dataset.features()) out << f.name << ',';
  out << label_column << '\n';
  std::string line;
  for (std::size_t i = 0; i < dataset.num_rows(); ++i) {
    line.clear();
    for (std::uint8_t v : dataset.row(i)) {
      line.push_back(v ? '1' : '0');
      line.push_back(',');
    }
    line += dataset.label(i) == 1 ? "+1" : "-1";
    out << line << '\n';
  }
}

std::vector<ConditionalProbability> conditional_probabilities(const BinaryDataset& dataset) {
  std::vector<ConditionalProbability> table(dataset.num_features());
  for (std::size_t j = 0; j < dataset.num_features(); ++j) table[j].feature = dataset.features()[j].name;
  for (std::size_t i = 0; i < dataset.num_rows(); ++i) {
    const auto r = dataset.row(i);
    const bool positive = dataset.label(i) == 1;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!r[j]) continue;
      ++table[j].active;
      if (positive) ++table[j].active_positive;
    }
  }
  for (auto& entry : table) {
    if (entry.active > 0) {
      entry.probability = static_cast<double>(entry.active_positive) / static_cast<double>(entry.active);
    }
  }
  return table;
}

}  // namespace slim
