#pragma once

// Integer branch-and-bound over a coefficient lattice with the intercept
// eliminated by a threshold scan. Shared by the main solver and polishing;
// everything is in scaled int64 units.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "slim/dataset.hpp"

namespace slim::detail {

/// Distinct feature patterns ("units"). A unit that occurs in both classes
/// is a conflict pair; its positive and negative parts share one score.
struct SearchProblem {
  std::size_t num_features = 0;
  std::vector<int> coef_bound;
  int intercept_bound = 0;
  int max_terms = 0;
  std::int64_t l0_weight = 0;
  std::int64_t l1_weight = 0;

  std::vector<std::int64_t> positive_cost;  ///< cost if the unit's positives are misclassified
  std::vector<std::int64_t> negative_cost;  ///< cost if the unit's negatives are misclassified
  std::vector<std::vector<std::uint32_t>> column;  ///< units with x_j = 1, per feature
  std::vector<int> signal_sign;  ///< preferred first nonzero sign per feature
  std::vector<std::size_t> branch_order;  ///< features by descending |P(y=+1|x_j=1) - P(y=+1)|

  std::size_t num_units() const { return positive_cost.size(); }
};

/// `positive_weight` / `negative_weight` are per-row costs.
SearchProblem build_problem(const AggregatedDataset& data, std::span<const int> coef_bound, int intercept_bound,
                            std::int64_t positive_weight, std::int64_t negative_weight,
                            std::int64_t l0_weight, std::int64_t l1_weight, int max_terms);

struct Candidate {
  std::int64_t cost = 0;
  std::vector<int> coefs;
  int intercept = 0;
};

struct Sample {
  double seconds = 0;
  std::uint64_t nodes = 0;
  std::int64_t incumbent = 0;
  std::int64_t lower_bound = 0;
};

enum class StopReason { kCompleted, kGapReached, kTimeLimit, kNodeLimit };

struct SearchOptions {
  std::optional<double> time_limit_seconds;
  std::optional<std::uint64_t> node_limit;
  /// Stop once (incumbent - bound) <= num/den * max(incumbent, 1).
  std::int64_t gap_num = 0;
  std::int64_t gap_den = 1;
  /// Keep exploring nodes whose bound equals the incumbent so that ties are
  /// resolved by tie_break_less rather than discovery order.
  bool exact_ties = false;
  bool warm_start = true;
  /// Tighten node bounds by grouping units that agree on every undecided
  /// feature: such units share one unknown score offset, so their joint loss
  /// is a one-dimensional threshold problem. Pays off for few features.
  bool group_bound = false;
  std::size_t pool_capacity = 1;
  std::uint64_t sample_every = 4096;
  std::function<void(const Sample&)> on_sample;
  /// Optional starting incumbent (e.g. a model being polished).
  std::optional<Candidate> initial;
};

struct SearchResult {
  Candidate best;
  std::int64_t lower_bound = 0;
  std::uint64_t nodes = 0;
  double seconds = 0;
  StopReason reason = StopReason::kCompleted;
  std::vector<Candidate> pool;  ///< ascending by (cost, tie order)
  std::int64_t root_bound = 0;
};

SearchResult run_search(const SearchProblem& problem, const SearchOptions& options);

/// Lower bound on every completion of a partial assignment (nullopt =
/// undecided). Throws ConfigError when the fixed part already exceeds the
/// term cap or leaves the lattice.
std::int64_t partial_bound(const SearchProblem& problem, std::span<const std::optional<int>> partial);

/// Exact cost of a full assignment with its best intercept.
Candidate evaluate_exact(const SearchProblem& problem, std::span<const int> coefs);

}  // namespace slim::detail
