#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/model.hpp"
#include "slim/rational.hpp"

namespace slim {

struct TelemetrySample {
  double seconds = 0;
  std::uint64_t nodes = 0;
  Rational incumbent;
  Rational lower_bound;
};

struct SolveConfig {
  std::optional<double> time_limit_seconds = 60.0;
  std::size_t pool_size = 500;
  Rational gap_tolerance = 0;
  std::optional<std::uint64_t> node_limit;
  /// Resolve objective ties by tie_break_less at the cost of a larger tree.
  bool exact_ties = false;
  bool warm_start = true;
  std::uint64_t telemetry_every = 4096;
  std::function<void(const TelemetrySample&)> on_telemetry;

  /// Throws ConfigError unless pool_size >= 1, the time limit (if any) is
  /// positive and the gap tolerance is nonnegative.
  void validate() const;
};

enum class SolveStatus { kOptimal, kTimeLimit, kNodeLimit };

std::string to_string(SolveStatus status);

struct PoolEntry {
  ScoringSystem model;
  ObjectiveValue value;
};

/// Best distinct feasible models seen by a solve, ascending by total.
struct SolutionPool {
  std::vector<PoolEntry> entries;
  std::size_t capacity = 0;
};

struct SolveReport {
  ScoringSystem best;
  ObjectiveValue best_value;
  Rational best_objective;
  Rational lower_bound;
  Rational root_bound;
  /// (best - bound) / best, or best - bound when best = 0.
  Rational gap;
  std::uint64_t nodes_explored = 0;
  double wall_time = 0;
  SolveStatus status = SolveStatus::kOptimal;
};

struct SolveResult {
  SolveReport report;
  SolutionPool pool;
};

/// Minimizes weighted 0-1 loss + C0 * l0 + epsilon * l1 over the lattice
/// subject to at most cfg.max_terms nonzero coefficients. Single-threaded
/// and deterministic when limits are given as node counts.
SolveResult solve(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice,
                  const SolveConfig& scfg);

/// Sum over conflict pairs of min(W+ n_s, W- n_t) / N.
Rational conflict_lower_bound(const AggregatedDataset& data, const PenaltyConfig& cfg);

/// Lower bound on the objective of every lattice completion of `partial`
/// (nullopt entries are free) that respects the term cap.
Rational node_bound(std::span<const std::optional<int>> partial, const AggregatedDataset& data,
                    const PenaltyConfig& cfg, const LatticeSpec& lattice);

struct BruteForceResult {
  ScoringSystem model;
  ObjectiveValue value;
};

inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

/// Exhaustive enumeration of the lattice, ties broken by tie_break_less.
/// Throws ConfigError if the lattice has more than kBruteForceLimit points.
BruteForceResult brute_force_solve(const AggregatedDataset& data, const PenaltyConfig& cfg,
                                   const LatticeSpec& lattice);

}  // namespace slim
