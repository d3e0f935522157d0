#include "slim/folds.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "slim/errors.hpp"
#include "slim/random.hpp"

namespace slim {

std::vector<std::size_t> FoldAssignment::test_rows() const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < test_mask.size(); ++i) {
    if (test_mask[i]) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::training_rows() const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < test_mask.size(); ++i) {
    if (!test_mask[i]) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::fold_training_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < cv_fold.size(); ++i) {
    if (cv_fold[i] >= 0 && cv_fold[i] != fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::fold_validation_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < cv_fold.size(); ++i) {
    if (cv_fold[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::string FoldAssignment::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["test_ratio"] = test_ratio;
  j["num_folds"] = num_folds;
  j["test_indices"] = test_rows();
  j["fold_of_row"] = cv_fold;
  return j.dump(2);
}

FoldAssignment FoldAssignment::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  FoldAssignment f;
  f.seed = j.at("seed").get<std::uint64_t>();
  f.test_ratio = j.at("test_ratio").get<double>();
  f.num_folds = j.value("num_folds", 5);
  f.cv_fold = j.at("fold_of_row").get<std::vector<int>>();
  f.test_mask.assign(f.cv_fold.size(), false);
  for (auto i : j.at("test_indices").get<std::vector<std::size_t>>()) {
    if (i >= f.test_mask.size()) throw DataError("fold file: test index out of range");
    f.test_mask[i] = true;
  }
  for (std::size_t i = 0; i < f.cv_fold.size(); ++i) {
    if (f.test_mask[i] != (f.cv_fold[i] < 0)) throw DataError("fold file: test_indices and fold_of_row disagree");
  }
  return f;
}

FoldAssignment make_folds(const BinaryDataset& dataset, std::uint64_t seed, double test_ratio, int num_folds) {
  if (!(test_ratio > 0.0 && test_ratio < 1.0)) throw ConfigError("test_ratio must lie in (0, 1)");
  if (num_folds < 2) throw ConfigError("need at least 2 folds");
  const std::size_t n = dataset.num_rows();

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < n; ++i) by_class[dataset.label(i) == 1 ? 0 : 1].push_back(i);
  for (const auto& rows : by_class) {
    if (rows.size() < static_cast<std::size_t>(num_folds)) {
      throw ConfigError("a class has " + std::to_string(rows.size()) + " rows, fewer than " +
                        std::to_string(num_folds) + " folds");
    }
  }

  // Largest-remainder allotment of the test rows across the two classes.
  const auto total_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_ratio));
  std::size_t quota[2];
  double remainder[2];
  std::size_t assigned = 0;
  for (int c = 0; c < 2; ++c) {
    const double exact = static_cast<double>(by_class[c].size()) * test_ratio;
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  while (assigned < total_test) {
    const int c = remainder[0] >= remainder[1] ? 0 : 1;
    ++quota[c];
    remainder[c] = -1.0;
    ++assigned;
  }

  FoldAssignment out;
  out.seed = seed;
  out.test_ratio = test_ratio;
  out.num_folds = num_folds;
  out.test_mask.assign(n, false);
  out.cv_fold.assign(n, -1);

  SeededRng rng(seed);
  std::size_t dealt = 0;
  for (int c = 0; c < 2; ++c) {
    auto rows = by_class[c];
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k < quota[c]) {
        out.test_mask[rows[k]] = true;
      } else {
        // The deal counter runs across classes so overall fold sizes differ by at most one.
        out.cv_fold[rows[k]] = static_cast<int>(dealt++ % static_cast<std::size_t>(num_folds));
      }
    }
  }
  return out;
}

}  // namespace slim
