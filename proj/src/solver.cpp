#include "slim/solver.hpp"

#include <algorithm>
#include <cstdlib>

#include "search.hpp"
#include "slim/errors.hpp"

namespace slim {

void SolveConfig::validate() const {
  if (pool_size < 1) throw ConfigError("pool size must be >= 1");
  if (time_limit_seconds && !(*time_limit_seconds > 0)) throw ConfigError("time limit must be positive");
  if (gap_tolerance < 0) throw ConfigError("gap tolerance must be nonnegative");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kTimeLimit:
      return "time_limit";
    case SolveStatus::kNodeLimit:
      return "node_limit";
  }
  return "unknown";
}

namespace {

void check_inputs(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice) {
  if (data.source_n < 1) throw DataError("dataset is empty");
  if (data.num_features() < 1) throw DataError("dataset has no features");
  lattice.validate(data.num_features());
  if (cfg.max_terms < 0) throw ConfigError("term cap must be nonnegative");
  cfg.validate(data.source_n, data.num_features(), lattice);
}

detail::SearchProblem make_problem(const AggregatedDataset& data, const ScaledObjective& scaled,
                                   const LatticeSpec& lattice, int max_terms) {
  return detail::build_problem(data, lattice.coef_bound, lattice.intercept_bound, scaled.positive_weight,
                               scaled.negative_weight, scaled.l0_weight, scaled.l1_weight, max_terms);
}

ScaledObjective scale_for(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice) {
  return ScaledObjective::from(cfg, data.source_n, data.num_positive(), data.num_negative(), data.num_features(),
                               lattice);
}

Rational relative_gap(const Rational& best, const Rational& bound) {
  const Rational diff = best - bound;
  return best > 0 ? diff / best : diff;
}

}  // namespace

SolveResult solve(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice,
                  const SolveConfig& scfg) {
  check_inputs(data, cfg, lattice);
  scfg.validate();
  const ScaledObjective scaled = scale_for(data, cfg, lattice);
  const auto problem = make_problem(data, scaled, lattice, cfg.max_terms);

  detail::SearchOptions opt;
  opt.time_limit_seconds = scfg.time_limit_seconds;
  opt.node_limit = scfg.node_limit;
  {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const BigInt num = numerator(scfg.gap_tolerance);
    const BigInt den = denominator(scfg.gap_tolerance);
    // Tolerances with huge terms are clamped; they only control early exit.
    if (den > BigInt(1) << 40 || num > BigInt(1) << 40) {
      opt.gap_num = static_cast<std::int64_t>(to_double(scfg.gap_tolerance) * (1LL << 30));
      opt.gap_den = 1LL << 30;
    } else {
      opt.gap_num = num.convert_to<std::int64_t>();
      opt.gap_den = den.convert_to<std::int64_t>();
    }
  }
  opt.exact_ties = scfg.exact_ties;
  opt.warm_start = scfg.warm_start;
  opt.group_bound = problem.num_features <= 16;
  opt.pool_capacity = scfg.pool_size;
  opt.sample_every = scfg.telemetry_every;
  if (scfg.on_telemetry) {
    opt.on_sample = [&](const detail::Sample& s) {
      scfg.on_telemetry(TelemetrySample{s.seconds, s.nodes, scaled.to_rational(s.incumbent),
                                        scaled.to_rational(s.lower_bound)});
    };
  }

  const detail::SearchResult found = detail::run_search(problem, opt);

  SolveResult out;
  const auto names = data.feature_names;
  out.report.best = ScoringSystem::from_dense(found.best.intercept, found.best.coefs, names);
  out.report.best_value = objective(out.report.best, data, cfg);
  out.report.best_objective = out.report.best_value.total;
  out.report.lower_bound = scaled.to_rational(found.lower_bound);
  out.report.root_bound = scaled.to_rational(found.root_bound);
  out.report.gap = relative_gap(out.report.best_objective, out.report.lower_bound);
  out.report.nodes_explored = found.nodes;
  out.report.wall_time = found.seconds;
  switch (found.reason) {
    case detail::StopReason::kCompleted:
    case detail::StopReason::kGapReached:
      out.report.status = SolveStatus::kOptimal;
      break;
    case detail::StopReason::kTimeLimit:
      out.report.status = SolveStatus::kTimeLimit;
      break;
    case detail::StopReason::kNodeLimit:
      out.report.status = SolveStatus::kNodeLimit;
      break;
  }
  if (out.report.gap <= scfg.gap_tolerance) out.report.status = SolveStatus::kOptimal;

  out.pool.capacity = scfg.pool_size;
  for (const auto& c : found.pool) {
    PoolEntry entry;
    entry.model = ScoringSystem::from_dense(c.intercept, c.coefs, names);
    entry.value = objective(entry.model, data, cfg);
    out.pool.entries.push_back(std::move(entry));
  }
  return out;
}

Rational conflict_lower_bound(const AggregatedDataset& data, const PenaltyConfig& cfg) {
  if (data.source_n < 1) return Rational(0);
  Rational total = 0;
  for (const auto& pair : data.conflict_pairs) {
    const Rational pos = cfg.w_plus * data.positive_patterns.at(pair.positive_index).count;
    const Rational neg = cfg.w_minus * data.negative_patterns.at(pair.negative_index).count;
    total += std::min(pos, neg);
  }
  return total / Rational(BigInt(data.source_n));
}

Rational node_bound(std::span<const std::optional<int>> partial, const AggregatedDataset& data,
                    const PenaltyConfig& cfg, const LatticeSpec& lattice) {
  check_inputs(data, cfg, lattice);
  const ScaledObjective scaled = scale_for(data, cfg, lattice);
  const auto problem = make_problem(data, scaled, lattice, cfg.max_terms);
  return scaled.to_rational(detail::partial_bound(problem, partial));
}

BruteForceResult brute_force_solve(const AggregatedDataset& data, const PenaltyConfig& cfg,
                                   const LatticeSpec& lattice) {
  check_inputs(data, cfg, lattice);
  if (lattice.cardinality() > kBruteForceLimit) {
    throw ConfigError("lattice has more than " + std::to_string(kBruteForceLimit) + " points");
  }
  const std::size_t p = data.num_features();
  const Rational n(BigInt(data.source_n));
  const Rational pos_cost = cfg.w_plus / n;
  const Rational neg_cost = cfg.w_minus / n;

  std::vector<int> coefs(p);
  for (std::size_t j = 0; j < p; ++j) coefs[j] = -lattice.coef_bound[j];

  std::optional<Rational> best_total;
  std::vector<int> best_coefs;
  int best_intercept = 0;
  std::vector<std::int64_t> pos_points(data.positive_patterns.size());
  std::vector<std::int64_t> neg_points(data.negative_patterns.size());

  for (;;) {
    std::int64_t l0 = 0;
    std::int64_t l1 = 0;
    for (int c : coefs) {
      l0 += c != 0;
      l1 += std::abs(c);
    }
    if (l0 <= cfg.max_terms) {
      auto dot = [&](const std::vector<std::uint8_t>& pattern) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < p; ++j) s += pattern[j] ? coefs[j] : 0;
        return s;
      };
      for (std::size_t s = 0; s < pos_points.size(); ++s) pos_points[s] = dot(data.positive_patterns[s].pattern);
      for (std::size_t t = 0; t < neg_points.size(); ++t) neg_points[t] = dot(data.negative_patterns[t].pattern);
      const Rational penalty = cfg.c0 * l0 + cfg.epsilon * l1;
      for (int b = -lattice.intercept_bound; b <= lattice.intercept_bound; ++b) {
        std::int64_t pos_err = 0;
        std::int64_t neg_err = 0;
        for (std::size_t s = 0; s < pos_points.size(); ++s) {
          if (b + pos_points[s] <= 0) pos_err += data.positive_patterns[s].count;
        }
        for (std::size_t t = 0; t < neg_points.size(); ++t) {
          if (b + neg_points[t] >= 1) neg_err += data.negative_patterns[t].count;
        }
        const Rational total = pos_cost * pos_err + neg_cost * neg_err + penalty;
        if (!best_total || total < *best_total ||
            (total == *best_total && tie_break_less(coefs, b, best_coefs, best_intercept))) {
          best_total = total;
          best_coefs = coefs;
          best_intercept = b;
        }
      }
    }
    std::size_t j = 0;
    while (j < p && coefs[j] == lattice.coef_bound[j]) {
      coefs[j] = -lattice.coef_bound[j];
      ++j;
    }
    if (j == p) break;
    ++coefs[j];
  }

  BruteForceResult out;
  out.model = ScoringSystem::from_dense(best_intercept, best_coefs, data.feature_names);
  out.value = objective(out.model, data, cfg);
  return out;
}

}  // namespace slim
