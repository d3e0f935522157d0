#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/rational.hpp"

namespace slim {

/// Finite coefficient lattice: lambda_j in [-coef_bound[j], coef_bound[j]]
/// and the intercept in [-intercept_bound, intercept_bound]. `margin` is the
/// gamma used by the per-example (general) formulation only.
struct LatticeSpec {
  std::vector<int> coef_bound;
  int intercept_bound = 100;
  Rational margin = 1;

  static LatticeSpec uniform(std::size_t num_features, int coef_bound = 10, int intercept_bound = 100);

  std::size_t num_features() const { return coef_bound.size(); }
  /// Largest attainable sum of |lambda_j| over j >= 1.
  std::int64_t max_l1() const;
  /// Number of points in the lattice including the intercept axis, saturating
  /// at UINT64_MAX.
  std::uint64_t cardinality() const;
  void validate(std::size_t num_features) const;
};

/// Class weights and penalties of the training objective.
struct PenaltyConfig {
  Rational w_plus = 1;
  Rational w_minus = 1;
  Rational c0 = 0;
  Rational epsilon = 0;
  int max_terms = 8;

  /// W+ given, W- = 2 - W+, C0 and epsilon set to half their admissible
  /// upper bounds. When min(W+, W-) = 0 the C0 bound degenerates to zero and
  /// max(W+, W-) is used in its place.
  static PenaltyConfig for_data(const Rational& w_plus, std::int64_t n, std::size_t p,
                                const LatticeSpec& lattice, int max_terms = 8);

  /// Throws ConfigError unless W+ + W- = 2, both weights are nonnegative,
  /// 0 < C0 < derive_c0_bound (skipped when a weight is zero), 0 < epsilon <
  /// derive_epsilon_bound, and max_terms >= 0.
  void validate(std::int64_t n, std::size_t p, const LatticeSpec& lattice) const;
};

struct Term {
  std::size_t feature = 0;
  int points = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Integer scoring system. score(x) = intercept + sum_j points_j * x_j and
/// the prediction is +1 iff score >= 1. The printed sheet shows the threshold
/// form "predict +1 if total points > -intercept".
struct ScoringSystem {
  int intercept = 0;
  std::vector<Term> terms;  ///< sorted by feature, nonzero points only
  std::vector<std::string> feature_names;  ///< whole feature space (length P)

  static ScoringSystem from_dense(int intercept, std::span<const int> coefficients,
                                  std::vector<std::string> feature_names);

  std::size_t num_features() const { return feature_names.size(); }
  std::vector<int> dense() const;
  int coefficient(std::size_t feature) const;
  std::int64_t l0() const { return static_cast<std::int64_t>(terms.size()); }
  std::int64_t l1() const;
  std::vector<std::size_t> support() const;
  /// Throws ConfigError if any coefficient leaves the lattice or the term
  /// count exceeds max_terms.
  void check_feasible(const LatticeSpec& lattice, int max_terms) const;

  friend bool operator==(const ScoringSystem&, const ScoringSystem&) = default;
};

/// Deterministic order used to break objective ties: coefficient vectors
/// compared lexicographically in feature order, then smaller |intercept|,
/// then smaller intercept.
bool tie_break_less(const ScoringSystem& a, const ScoringSystem& b);
bool tie_break_less(std::span<const int> a_coefs, int a_intercept, std::span<const int> b_coefs,
                    int b_intercept);

struct ObjectiveValue {
  Rational weighted_error;
  std::int64_t l0_count = 0;
  std::int64_t l1_sum = 0;
  Rational total;
  std::int64_t positive_errors = 0;  ///< rows with y=+1 scored <= 0
  std::int64_t negative_errors = 0;  ///< rows with y=-1 scored >= 1
};

/// Sum of points of active features, without the intercept.
std::int64_t points(const ScoringSystem& model, std::span<const std::uint8_t> pattern);
/// intercept + points. Throws DataError on a length mismatch.
std::int64_t score(const ScoringSystem& model, std::span<const std::uint8_t> pattern);
int predict(const ScoringSystem& model, std::span<const std::uint8_t> pattern);

ObjectiveValue objective(const ScoringSystem& model, const AggregatedDataset& data, const PenaltyConfig& cfg);

/// min(W-, W+) / (N * P). Throws ConfigError when both weights are zero.
Rational derive_c0_bound(const Rational& w_plus, const Rational& w_minus, std::int64_t n, std::size_t p);
/// min(1/N, C0) / sum_j coef_bound[j].
Rational derive_epsilon_bound(const Rational& c0, std::int64_t n, const LatticeSpec& lattice);

/// Tight Big-M of the aggregated loss rows: 1 + L0 + sum of active bounds for
/// a positive pattern, L0 + sum of active bounds for a negative one.
std::int64_t big_m_loss(std::span<const std::uint8_t> pattern, int label, const LatticeSpec& lattice);
/// max over the lattice of (gamma - y * score), the per-example Big-M.
Rational big_m_general(std::span<const std::uint8_t> pattern, int label, const LatticeSpec& lattice);

/// The objective scaled to integers: total * scale is an exact int64 for
/// every lattice model, so the search never touches rationals.
struct ScaledObjective {
  BigInt scale;
  std::int64_t positive_weight = 0;  ///< scale * W+ / N per positive error
  std::int64_t negative_weight = 0;  ///< scale * W- / N per negative error
  std::int64_t l0_weight = 0;        ///< scale * C0
  std::int64_t l1_weight = 0;        ///< scale * epsilon

  /// Throws std::overflow_error if the largest attainable scaled total does
  /// not fit comfortably in 62 bits.
  static ScaledObjective from(const PenaltyConfig& cfg, std::int64_t n, std::int64_t n_positive,
                              std::int64_t n_negative, std::size_t p, const LatticeSpec& lattice);

  Rational to_rational(std::int64_t scaled) const { return Rational(BigInt(scaled), scale); }
};

}  // namespace slim
