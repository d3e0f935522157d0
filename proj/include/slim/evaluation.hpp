#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/model.hpp"
#include "slim/rational.hpp"

namespace slim {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t positives() const { return tp + fn; }
  std::int64_t negatives() const { return fp + tn; }
  /// tp / (tp + fn); 0 when there are no positives.
  Rational tpr() const;
  /// fp / (fp + tn); 0 when there are no negatives.
  Rational fpr() const;
  /// (W+ fn + W- fp) / N.
  Rational weighted_error(const Rational& w_plus, const Rational& w_minus) const;

  ConfusionCounts& operator+=(const ConfusionCounts& other);
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Counts under predict(). Throws DataError on a feature-count mismatch.
ConfusionCounts confusion(const ScoringSystem& model, const BinaryDataset& data);
ConfusionCounts confusion(const ScoringSystem& model, const BinaryDataset& data, std::span<const std::size_t> rows);

using RocCoordinate = std::pair<Rational, Rational>;  ///< (fpr, tpr)

/// Trapezoidal area under the points sorted by (fpr, tpr) with (0,0) and
/// (1,1) appended. Throws ConfigError for coordinates outside [0,1].
Rational auc(std::span<const RocCoordinate> points);

struct RocPoint {
  Rational w_plus;
  Rational fpr;
  Rational tpr;
  std::string model_id;
};

struct RocCurve {
  std::vector<RocPoint> points;
  Rational auc;

  static RocCurve from_points(std::vector<RocPoint> points);
  std::string to_json() const;
  std::string to_csv() const;
  /// Static scatter of the operating points with the chance diagonal.
  std::string to_svg(const std::string& title = "ROC") const;
};

enum class Binning { kEqualFrequency, kEqualWidth };

struct CalibrationBin {
  std::int64_t min_score = 0;  ///< smallest score present in the bin
  std::int64_t max_score = 0;  ///< largest score present in the bin
  std::int64_t count = 0;
  std::int64_t positives = 0;
  Rational rate() const;
};

struct CalibrationTable {
  Binning binning = Binning::kEqualFrequency;
  int requested_bins = 10;
  std::vector<CalibrationBin> bins;  ///< nonempty bins in ascending score order

  std::int64_t total() const;
  std::string to_json() const;
  std::string to_csv() const;
};

/// Buckets rows by model score. Equal-frequency bins close once they hold
/// their share of rows but never split rows with equal scores; equal-width
/// bins split [min score, max score] into k integer ranges. Empty bins are
/// dropped. Throws ConfigError if k < 1.
CalibrationTable calibration(const ScoringSystem& model, const BinaryDataset& data, int k = 10,
                             Binning binning = Binning::kEqualFrequency);
CalibrationTable calibration(const ScoringSystem& model, const BinaryDataset& data, std::span<const std::size_t> rows,
                             int k = 10, Binning binning = Binning::kEqualFrequency);

/// Validation-set operating point of a candidate model.
struct OperatingPoint {
  Rational w_plus;
  Rational fpr;
  Rational tpr;
  Rational weighted_error;
  std::string model_id;
};

enum class PickCriterion { kMaxTpr, kMinWeightedError };

/// Index of the best point with fpr <= max_fpr under `criterion`; ties go
/// to the lower fpr, then the smaller W+. Empty when no point qualifies.
std::optional<std::size_t> pick_at_decision_point(std::span<const OperatingPoint> points, const Rational& max_fpr,
                                                  PickCriterion criterion);

/// "76.6%" style rendering with one decimal.
std::string percent(const Rational& rate);

}  // namespace slim
