#include "slim/polish.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "search.hpp"
#include "slim/errors.hpp"

namespace slim {

ActiveSet ActiveSet::of(const ScoringSystem& model) {
  ActiveSet out;
  for (const auto& t : model.terms) out.indices.push_back(t.feature);
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  return out;
}

AggregatedDataset project_active(const AggregatedDataset& data, const ActiveSet& active) {
  for (std::size_t j : active.indices) {
    if (j >= data.num_features()) throw ConfigError("active feature index out of range");
  }
  AggregatedDataset out;
  out.source_n = data.source_n;
  for (std::size_t j : active.indices) out.feature_names.push_back(data.feature_names[j]);

  auto project = [&](const std::vector<std::uint8_t>& pattern) {
    std::vector<std::uint8_t> reduced;
    reduced.reserve(active.size());
    for (std::size_t j : active.indices) reduced.push_back(pattern[j]);
    return reduced;
  };
  auto key_of = [](const std::vector<std::uint8_t>& pattern) {
    return std::string(pattern.begin(), pattern.end());
  };
  auto fold = [&](const std::vector<PatternCount>& source, std::vector<PatternCount>& target,
                  std::unordered_map<std::string, std::size_t>& index) {
    for (const auto& pc : source) {
      auto reduced = project(pc.pattern);
      auto [it, inserted] = index.try_emplace(key_of(reduced), target.size());
      if (inserted) {
        target.push_back(PatternCount{std::move(reduced), pc.count});
      } else {
        target[it->second].count += pc.count;
      }
    }
  };
  std::unordered_map<std::string, std::size_t> pos_index;
  std::unordered_map<std::string, std::size_t> neg_index;
  fold(data.positive_patterns, out.positive_patterns, pos_index);
  fold(data.negative_patterns, out.negative_patterns, neg_index);
  for (std::size_t t = 0; t < out.negative_patterns.size(); ++t) {
    const auto it = pos_index.find(key_of(out.negative_patterns[t].pattern));
    if (it != pos_index.end()) out.conflict_pairs.push_back(ConflictPair{it->second, t});
  }
  std::sort(out.conflict_pairs.begin(), out.conflict_pairs.end(),
            [](const ConflictPair& a, const ConflictPair& b) { return a.positive_index < b.positive_index; });
  return out;
}

PolishResult polish(const ScoringSystem& model, const AggregatedDataset& data, const PenaltyConfig& cfg,
                    const LatticeSpec& lattice, const PolishConfig& pcfg) {
  if (model.num_features() != data.num_features()) throw DataError("model and data dimensions differ");
  lattice.validate(data.num_features());
  model.check_feasible(lattice, cfg.max_terms);
  if (cfg.w_plus < 0 || cfg.w_minus < 0 || (cfg.w_plus == 0 && cfg.w_minus == 0)) {
    throw ConfigError("class weights must be nonnegative and not both zero");
  }
  const ActiveSet active = ActiveSet::of(model);
  if (active.size() > pcfg.max_active) {
    throw ConfigError("active set of " + std::to_string(active.size()) + " features exceeds the polish cap of " +
                      std::to_string(pcfg.max_active));
  }

  const AggregatedDataset reduced = project_active(data, active);
  std::vector<int> bounds;
  std::int64_t k = 1;
  for (std::size_t j : active.indices) {
    bounds.push_back(lattice.coef_bound[j]);
    k += lattice.coef_bound[j];
  }

  // Loss dominates: one unit of weighted loss outweighs any sum of |points|.
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const BigInt d = lcm(denominator(cfg.w_plus), denominator(cfg.w_minus));
  const BigInt pw = numerator(cfg.w_plus * Rational(d));
  const BigInt nw = numerator(cfg.w_minus * Rational(d));
  if (BigInt(k) * (pw * reduced.num_positive() + nw * reduced.num_negative()) >= (BigInt(1) << 61)) {
    throw std::overflow_error("polishing weights do not fit in 64-bit arithmetic");
  }
  const auto problem = detail::build_problem(reduced, bounds, lattice.intercept_bound,
                                             k * pw.convert_to<std::int64_t>(), k * nw.convert_to<std::int64_t>(),
                                             0, 1, static_cast<int>(active.size()));

  std::vector<int> start;
  for (std::size_t j : active.indices) start.push_back(model.coefficient(j));

  detail::SearchOptions opt;
  opt.time_limit_seconds = pcfg.time_limit_seconds;
  opt.exact_ties = true;
  opt.warm_start = false;
  opt.group_bound = true;
  opt.pool_capacity = 0;
  opt.initial = detail::evaluate_exact(problem, start);
  const auto found = detail::run_search(problem, opt);

  std::vector<int> dense(data.num_features(), 0);
  for (std::size_t a = 0; a < active.size(); ++a) dense[active.indices[a]] = found.best.coefs[a];
  PolishResult out;
  out.model = ScoringSystem::from_dense(found.best.intercept, dense, data.feature_names);
  out.value = objective(out.model, data, cfg);
  out.optimal = found.reason == detail::StopReason::kCompleted;
  return out;
}

}  // namespace slim
