#include "search.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "slim/errors.hpp"
#include "slim/model.hpp"

namespace slim::detail {

SearchProblem build_problem(const AggregatedDataset& data, std::span<const int> coef_bound, int intercept_bound,
                            std::int64_t positive_weight, std::int64_t negative_weight,
                            std::int64_t l0_weight, std::int64_t l1_weight, int max_terms) {
  const std::size_t p = data.num_features();
  if (coef_bound.size() != p) throw ConfigError("lattice and data dimensions differ");
  SearchProblem prob;
  prob.num_features = p;
  prob.coef_bound.assign(coef_bound.begin(), coef_bound.end());
  prob.max_terms = std::min<int>(max_terms, static_cast<int>(p));
  // Intercepts beyond the largest reachable feature score classify every
  // row alike, and the scan prefers the smaller |intercept| on ties.
  std::vector<int> sorted_bounds(coef_bound.begin(), coef_bound.end());
  std::sort(sorted_bounds.begin(), sorted_bounds.end(), std::greater<>());
  std::int64_t reach = 1;
  for (int k = 0; k < prob.max_terms; ++k) reach += sorted_bounds[k];
  prob.intercept_bound = static_cast<int>(std::min<std::int64_t>(intercept_bound, reach));
  prob.l0_weight = l0_weight;
  prob.l1_weight = l1_weight;
  prob.column.assign(p, {});

  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::int64_t> pos_count;
  std::vector<std::int64_t> neg_count;
  auto add = [&](const PatternCount& pc, bool positive) {
    std::string key(reinterpret_cast<const char*>(pc.pattern.data()), pc.pattern.size());
    auto [it, inserted] = index.try_emplace(std::move(key), static_cast<std::uint32_t>(pos_count.size()));
    const std::uint32_t u = it->second;
    if (inserted) {
      pos_count.push_back(0);
      neg_count.push_back(0);
      for (std::size_t j = 0; j < p; ++j) {
        if (pc.pattern[j]) prob.column[j].push_back(u);
      }
    }
    (positive ? pos_count : neg_count)[u] += pc.count;
  };
  for (const auto& s : data.positive_patterns) add(s, true);
  for (const auto& t : data.negative_patterns) add(t, false);

  const std::size_t units = pos_count.size();
  prob.positive_cost.resize(units);
  prob.negative_cost.resize(units);
  std::int64_t total_pos = 0;
  std::int64_t total = 0;
  for (std::size_t u = 0; u < units; ++u) {
    prob.positive_cost[u] = positive_weight * pos_count[u];
    prob.negative_cost[u] = negative_weight * neg_count[u];
    total_pos += pos_count[u];
    total += pos_count[u] + neg_count[u];
  }

  const double base_rate = total > 0 ? static_cast<double>(total_pos) / static_cast<double>(total) : 0.0;
  std::vector<double> signal(p, 0.0);
  prob.signal_sign.assign(p, 1);
  for (std::size_t j = 0; j < p; ++j) {
    std::int64_t active = 0;
    std::int64_t active_pos = 0;
    for (std::uint32_t u : prob.column[j]) {
      active += pos_count[u] + neg_count[u];
      active_pos += pos_count[u];
    }
    if (active == 0) continue;
    const double diff = static_cast<double>(active_pos) / static_cast<double>(active) - base_rate;
    signal[j] = std::abs(diff);
    prob.signal_sign[j] = diff >= 0 ? 1 : -1;
  }
  prob.branch_order.resize(p);
  for (std::size_t j = 0; j < p; ++j) prob.branch_order[j] = j;
  std::stable_sort(prob.branch_order.begin(), prob.branch_order.end(),
                   [&](std::size_t a, std::size_t b) { return signal[a] > signal[b]; });
  return prob;
}

namespace {

using Clock = std::chrono::steady_clock;

struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    return tie_break_less(a.coefs, a.intercept, b.coefs, b.intercept);
  }
};

std::string candidate_key(std::span<const int> coefs, int intercept) {
  std::string key(reinterpret_cast<const char*>(coefs.data()), coefs.size() * sizeof(int));
  key.append(reinterpret_cast<const char*>(&intercept), sizeof(int));
  return key;
}

class Searcher {
 public:
  Searcher(const SearchProblem& prob, const SearchOptions& opt)
      : prob_(prob), opt_(opt), start_(Clock::now()) {
    const std::size_t units = prob.num_units();
    fixed_.assign(units, 0);
    cap_.assign(units, 0);
    excess_pos_.resize(units);
    excess_neg_.resize(units);
    for (std::size_t u = 0; u < units; ++u) {
      const std::int64_t m = std::min(prob.positive_cost[u], prob.negative_cost[u]);
      base_ += m;
      excess_pos_[u] = prob.positive_cost[u] - m;
      excess_neg_[u] = prob.negative_cost[u] - m;
    }
    for (std::size_t j = 0; j < prob.num_features; ++j) {
      for (std::uint32_t u : prob.column[j]) cap_[u] += prob.coef_bound[j];
    }
    coef_.assign(prob.num_features, 0);
    const std::size_t width = 2 * static_cast<std::size_t>(prob.intercept_bound) + 1;
    scan_pos_.assign(width, 0);
    scan_neg_.assign(width, 0);
    if (opt.time_limit_seconds) {
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(*opt.time_limit_seconds));
    }
    best_.cost = std::numeric_limits<std::int64_t>::max();
  }

  struct Scan {
    std::int64_t loss = 0;
    int intercept = 0;
  };

  // Minimum over the intercept of the loss that is certain for every
  // completion: unit u's feature score lies in [fixed-c, fixed+c] with
  // c = min(cap[u], top_sum). With top_sum = 0 this is the exact loss.
  Scan scan(std::int64_t top_sum) {
    const int bound = prob_.intercept_bound;
    const int last = 2 * bound;
    std::fill(scan_pos_.begin(), scan_pos_.end(), 0);
    std::fill(scan_neg_.begin(), scan_neg_.end(), 0);
    const std::size_t units = fixed_.size();
    for (std::size_t u = 0; u < units; ++u) {
      const std::int64_t c = std::min<std::int64_t>(cap_[u], top_sum);
      if (const std::int64_t e = excess_pos_[u]; e != 0) {
        // Positives are lost for every intercept <= -hi.
        const std::int64_t v = -(fixed_[u] + c);
        if (v >= bound) {
          scan_pos_[last] += e;
        } else if (v >= -bound) {
          scan_pos_[v + bound] += e;
        }
      }
      if (const std::int64_t e = excess_neg_[u]; e != 0) {
        // Negatives are lost for every intercept >= 1 - lo.
        const std::int64_t v = 1 - (fixed_[u] - c);
        if (v <= -bound) {
          scan_neg_[0] += e;
        } else if (v <= bound) {
          scan_neg_[v + bound] += e;
        }
      }
    }
    for (int i = last - 1; i >= 0; --i) scan_pos_[i] += scan_pos_[i + 1];
    for (int i = 1; i <= last; ++i) scan_neg_[i] += scan_neg_[i - 1];
    Scan best{std::numeric_limits<std::int64_t>::max(), 0};
    for (int i = 0; i <= last; ++i) {
      const std::int64_t cost = scan_pos_[i] + scan_neg_[i];
      const int intercept = i - bound;
      if (cost < best.loss ||
          (cost == best.loss && (std::abs(intercept) < std::abs(best.intercept) ||
                                 (std::abs(intercept) == std::abs(best.intercept) && intercept < best.intercept)))) {
        best = {cost, intercept};
      }
    }
    best.loss += base_;
    return best;
  }

  // Loss bound at `depth` that also couples units agreeing on all undecided
  // features. Each group's score offset is free within +-c around the
  // intercept; singletons reduce to the interval scan.
  std::int64_t grouped_loss(std::size_t depth, std::int64_t top_sum) {
    const Grouping& g = groupings_[depth];
    const int bound = prob_.intercept_bound;
    const int last = 2 * bound;
    std::fill(scan_pos_.begin(), scan_pos_.end(), 0);
    std::fill(scan_neg_.begin(), scan_neg_.end(), 0);
    std::fill(group_total_.begin(), group_total_.end(), 0);
    std::int64_t constant = 0;
    for (std::uint32_t u : g.singles) {
      const std::int64_t c = std::min<std::int64_t>(cap_[u], top_sum);
      constant += std::min(prob_.positive_cost[u], prob_.negative_cost[u]);
      if (const std::int64_t e = excess_pos_[u]; e != 0) {
        const std::int64_t v = -(fixed_[u] + c);
        if (v >= bound) {
          scan_pos_[last] += e;
        } else if (v >= -bound) {
          scan_pos_[v + bound] += e;
        }
      }
      if (const std::int64_t e = excess_neg_[u]; e != 0) {
        const std::int64_t v = 1 - (fixed_[u] - c);
        if (v <= -bound) {
          scan_neg_[0] += e;
        } else if (v <= bound) {
          scan_neg_[v + bound] += e;
        }
      }
    }
    for (int i = last - 1; i >= 0; --i) scan_pos_[i] += scan_pos_[i + 1];
    for (int i = 1; i <= last; ++i) scan_neg_[i] += scan_neg_[i - 1];

    for (std::size_t k = 0; k + 1 < g.starts.size(); ++k) {
      const std::span<const std::uint32_t> members(g.members.data() + g.starts[k], g.starts[k + 1] - g.starts[k]);
      const std::int64_t c = std::min<std::int64_t>(cap_[members.front()], top_sum);
      // curve_[i]: group loss at shared offset t = i - bound - c. Positives
      // are lost below 1 - fixed, negatives from there on.
      const std::size_t len = static_cast<std::size_t>(2 * bound + 2 * c + 1);
      curve_.assign(len, 0);
      std::int64_t start = 0;
      for (std::uint32_t u : members) {
        const std::int64_t wp = prob_.positive_cost[u];
        const std::int64_t wn = prob_.negative_cost[u];
        start += wp;
        const std::int64_t i = 1 - fixed_[u] + bound + c;
        if (i <= 0) {
          start += wn - wp;
        } else if (i < static_cast<std::int64_t>(len)) {
          curve_[i] += wn - wp;
        }
      }
      curve_[0] += start;
      for (std::size_t i = 1; i < len; ++i) curve_[i] += curve_[i - 1];
      // Sliding minimum over windows of width 2c+1, one per intercept.
      window_.clear();
      const std::size_t width = static_cast<std::size_t>(2 * c + 1);
      for (std::size_t i = 0; i < len; ++i) {
        while (!window_.empty() && curve_[window_.back()] >= curve_[i]) window_.pop_back();
        window_.push_back(i);
        if (i + 1 < width) continue;
        const std::size_t a = i + 1 - width;
        while (window_.front() < a) window_.pop_front();
        group_total_[a] += curve_[window_.front()];
      }
    }
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int i = 0; i <= last; ++i) best = std::min(best, scan_pos_[i] + scan_neg_[i] + group_total_[i]);
    return best + constant;
  }

  // Certain loss of every completion below a node at `depth`.
  std::int64_t node_loss(std::size_t depth, int remaining) {
    const std::int64_t top = depth_top_sum(depth, remaining);
    if (depth < groupings_.size() && !groupings_[depth].starts.empty()) {
      return std::max(grouped_loss(depth, top), scan(top).loss);
    }
    return scan(top).loss;
  }

  std::int64_t penalty() const { return prob_.l0_weight * l0_ + prob_.l1_weight * l1_; }

  void assign(std::size_t j, int v) {
    const int lam = prob_.coef_bound[j];
    for (std::uint32_t u : prob_.column[j]) {
      fixed_[u] += v;
      cap_[u] -= lam;
    }
    coef_[j] = v;
    if (v != 0) {
      ++l0_;
      l1_ += std::abs(v);
    }
  }

  void unassign(std::size_t j, int v) {
    const int lam = prob_.coef_bound[j];
    for (std::uint32_t u : prob_.column[j]) {
      fixed_[u] -= v;
      cap_[u] += lam;
    }
    coef_[j] = 0;
    if (v != 0) {
      --l0_;
      l1_ -= std::abs(v);
    }
  }

  // Shift of a decided coefficient (warm start); capacities untouched.
  void shift(std::size_t j, int from, int to) {
    const int delta = to - from;
    for (std::uint32_t u : prob_.column[j]) fixed_[u] += delta;
    coef_[j] = to;
    l0_ += (to != 0) - (from != 0);
    l1_ += std::abs(to) - std::abs(from);
  }

  std::int64_t top_sum(std::span<const int> undecided_bounds_desc, int remaining) const {
    std::int64_t total = 0;
    for (int k = 0; k < remaining && k < static_cast<int>(undecided_bounds_desc.size()); ++k) {
      total += undecided_bounds_desc[k];
    }
    return total;
  }

  std::int64_t bound_for(std::span<const std::optional<int>> partial) {
    if (partial.size() != prob_.num_features) throw ConfigError("partial assignment has the wrong length");
    std::vector<int> undecided;
    for (std::size_t j = 0; j < partial.size(); ++j) {
      if (!partial[j]) {
        undecided.push_back(prob_.coef_bound[j]);
        continue;
      }
      if (std::abs(*partial[j]) > prob_.coef_bound[j]) throw ConfigError("partial assignment leaves the lattice");
      assign(j, *partial[j]);
    }
    if (l0_ > prob_.max_terms) throw ConfigError("partial assignment exceeds the term cap");
    std::sort(undecided.begin(), undecided.end(), std::greater<>());
    return scan(top_sum(undecided, prob_.max_terms - l0_)).loss + penalty();
  }

  Candidate evaluate(std::span<const int> coefs) {
    for (std::size_t j = 0; j < coefs.size(); ++j) assign(j, coefs[j]);
    const Scan s = scan(0);
    Candidate c{s.loss + penalty(), std::vector<int>(coefs.begin(), coefs.end()), s.intercept};
    for (std::size_t j = 0; j < coefs.size(); ++j) unassign(j, coefs[j]);
    return c;
  }

  SearchResult run() {
    if (opt_.initial) consider(opt_.initial->cost, opt_.initial->coefs, opt_.initial->intercept);
    {
      const Scan s = scan(0);
      consider(s.loss, coef_, s.intercept);
    }
    prepare_top_sums();
    prepare_groups();
    root_bound_ = node_loss(0, prob_.max_terms);
    lower_bound_ = std::min(root_bound_, best_.cost);

    if (opt_.warm_start) warm_start();

    if (!stopped_) {
      frames_.resize(prob_.num_features + 1);
      explore(0, root_bound_);
    }
    SearchResult result;
    result.nodes = nodes_;
    result.seconds = elapsed();
    if (!stopped_) {
      reason_ = StopReason::kCompleted;
      lower_bound_ = best_.cost;
    }
    result.reason = reason_;
    result.best = best_;
    result.lower_bound = std::min(lower_bound_, best_.cost);
    result.root_bound = root_bound_;
    result.pool.assign(pool_.begin(), pool_.end());
    emit_sample();
    return result;
  }

 private:
  void prepare_top_sums() {
    const std::size_t p = prob_.num_features;
    suffix_desc_.assign(p + 1, {});
    for (std::size_t d = 0; d <= p; ++d) {
      auto& list = suffix_desc_[d];
      for (std::size_t k = d; k < p; ++k) list.push_back(prob_.coef_bound[prob_.branch_order[k]]);
      std::sort(list.begin(), list.end(), std::greater<>());
      for (std::size_t k = 1; k < list.size(); ++k) list[k] += list[k - 1];
    }
  }

  // Per depth, units keyed by their undecided sub-pattern. Depths with no
  // multi-unit group keep `starts` empty and use the plain scan.
  void prepare_groups() {
    const std::size_t p = prob_.num_features;
    if (!opt_.group_bound || p >= 64) return;
    const std::size_t units = prob_.num_units();
    std::vector<std::uint64_t> mask(units, 0);
    for (std::size_t k = 0; k < p; ++k) {
      for (std::uint32_t u : prob_.column[prob_.branch_order[k]]) mask[u] |= std::uint64_t{1} << k;
    }
    groupings_.assign(p, {});
    std::vector<std::uint32_t> order(units);
    for (std::size_t d = 1; d < p; ++d) {
      for (std::size_t u = 0; u < units; ++u) order[u] = static_cast<std::uint32_t>(u);
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::pair(mask[a] >> d, a) < std::pair(mask[b] >> d, b);
      });
      Grouping& g = groupings_[d];
      for (std::size_t i = 0; i < units;) {
        std::size_t e = i + 1;
        while (e < units && (mask[order[e]] >> d) == (mask[order[i]] >> d)) ++e;
        if (e - i == 1) {
          g.singles.push_back(order[i]);
        } else {
          if (g.starts.empty()) g.starts.push_back(0);
          g.members.insert(g.members.end(), order.begin() + i, order.begin() + e);
          g.starts.push_back(static_cast<std::uint32_t>(g.members.size()));
        }
        i = e;
      }
    }
    group_total_.assign(2 * static_cast<std::size_t>(prob_.intercept_bound) + 1, 0);
  }

  // Sum of the `remaining` largest bounds among features not yet decided at `depth`.
  std::int64_t depth_top_sum(std::size_t depth, int remaining) const {
    const auto& prefix = suffix_desc_[depth];
    if (remaining <= 0 || prefix.empty()) return 0;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(remaining), prefix.size());
    return prefix[k - 1];
  }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  bool limit_hit() {
    if (opt_.node_limit && nodes_ >= *opt_.node_limit) {
      reason_ = StopReason::kNodeLimit;
      return true;
    }
    if (deadline_ && Clock::now() >= *deadline_) {
      reason_ = StopReason::kTimeLimit;
      return true;
    }
    return false;
  }

  bool prunable(std::int64_t bound) const {
    return opt_.exact_ties ? bound > best_.cost : bound >= best_.cost;
  }

  void consider(std::int64_t cost, std::span<const int> coefs, int intercept) {
    if (cost < best_.cost || (cost == best_.cost && tie_break_less(coefs, intercept, best_.coefs, best_.intercept))) {
      best_.cost = cost;
      best_.coefs.assign(coefs.begin(), coefs.end());
      best_.intercept = intercept;
      improved_ = true;
    }
    if (opt_.pool_capacity == 0) return;
    if (pool_.size() >= opt_.pool_capacity) {
      const Candidate& worst = *pool_.rbegin();
      if (cost > worst.cost ||
          (cost == worst.cost && !tie_break_less(coefs, intercept, worst.coefs, worst.intercept))) {
        return;
      }
    }
    std::string key = candidate_key(coefs, intercept);
    if (pool_keys_.contains(key)) return;
    pool_.insert(Candidate{cost, std::vector<int>(coefs.begin(), coefs.end()), intercept});
    pool_keys_.insert(std::move(key));
    if (pool_.size() > opt_.pool_capacity) {
      auto last = std::prev(pool_.end());
      pool_keys_.erase(candidate_key(last->coefs, last->intercept));
      pool_.erase(last);
    }
  }

  void emit_sample() {
    if (!opt_.on_sample) return;
    opt_.on_sample(Sample{elapsed(), nodes_, best_.cost, std::min(lower_bound_, best_.cost)});
  }

  // Valid bound over all unexplored work, given that frame `active` is in
  // the middle of building its children.
  void refresh_lower_bound(std::size_t active) {
    std::int64_t bound = best_.cost;
    for (std::size_t k = 0; k < active; ++k) {
      const auto& f = frames_[k];
      for (std::size_t i = f.next; i < f.children.size(); ++i) bound = std::min(bound, f.children[i].second);
    }
    bound = std::min(bound, frames_[active].node_bound);
    lower_bound_ = std::max(lower_bound_, bound);
  }

  bool gap_reached() const {
    if (opt_.gap_num <= 0) return false;
    const __int128 gap = static_cast<__int128>(best_.cost) - lower_bound_;
    const __int128 denom = std::max<std::int64_t>(best_.cost, 1);
    return gap * opt_.gap_den <= static_cast<__int128>(opt_.gap_num) * denom;
  }

  // Counts one node and reports whether the search must stop.
  bool tick(std::size_t active) {
    ++nodes_;
    const bool sample_due = opt_.sample_every > 0 && nodes_ % opt_.sample_every == 0;
    if (sample_due || improved_ || (opt_.gap_num > 0 && nodes_ % 256 == 0)) {
      refresh_lower_bound(active);
      if (sample_due || improved_) emit_sample();
      improved_ = false;
      if (gap_reached()) {
        reason_ = StopReason::kGapReached;
        stopped_ = true;
        return true;
      }
    }
    if (limit_hit()) {
      refresh_lower_bound(active);
      stopped_ = true;
      return true;
    }
    return false;
  }

  std::vector<int> value_order(std::size_t j) const {
    std::vector<int> values{0};
    const int s = prob_.signal_sign[j];
    for (int k = 1; k <= prob_.coef_bound[j]; ++k) {
      values.push_back(s * k);
      values.push_back(-s * k);
    }
    return values;
  }

  struct Frame {
    std::int64_t node_bound = 0;
    std::vector<std::pair<int, std::int64_t>> children;
    std::size_t next = 0;
  };

  void explore(std::size_t depth, std::int64_t node_bound) {
    Frame& frame = frames_[depth];
    frame.node_bound = node_bound;
    frame.children.clear();
    frame.next = 0;
    const int remaining = prob_.max_terms - l0_;
    if (depth == prob_.num_features || remaining <= 0) return;

    const std::size_t j = prob_.branch_order[depth];
    for (int v : value_order(j)) {
      assign(j, v);
      if (v != 0) {
        const Scan exact = scan(0);
        consider(exact.loss + penalty(), coef_, exact.intercept);
      }
      const int child_remaining = prob_.max_terms - l0_;
      const std::int64_t child_bound = node_loss(depth + 1, child_remaining) + penalty();
      unassign(j, v);
      frame.children.emplace_back(v, child_bound);
      if (tick(depth)) return;
    }
    frame.node_bound = best_.cost;  // children now cover the subtree

    for (std::size_t i = 0; i < frame.children.size(); ++i) {
      const auto [v, child_bound] = frame.children[i];
      frame.next = i + 1;
      if (prunable(child_bound)) continue;
      assign(j, v);
      explore(depth + 1, child_bound);
      unassign(j, v);
      if (stopped_) return;
    }
  }

  void warm_start() {
    // Best-improvement coordinate moves from the all-zero model.
    std::int64_t current = best_.cost;
    {
      const Scan s = scan(0);
      current = s.loss + penalty();
    }
    // Capacities are irrelevant here; every coefficient counts as decided.
    std::vector<std::int32_t> saved_cap = cap_;
    std::fill(cap_.begin(), cap_.end(), 0);
    for (int step = 0; step < 4 * static_cast<int>(prob_.num_features) + 8; ++step) {
      std::int64_t best_cost = current;
      std::size_t best_j = prob_.num_features;
      int best_v = 0;
      for (std::size_t j : prob_.branch_order) {
        const int from = coef_[j];
        for (int v : value_order(j)) {
          if (v == from) continue;
          if (from == 0 && v != 0 && l0_ >= prob_.max_terms) continue;
          shift(j, from, v);
          const Scan s = scan(0);
          const std::int64_t cost = s.loss + penalty();
          consider(cost, coef_, s.intercept);
          shift(j, v, from);
          if (cost < best_cost) {
            best_cost = cost;
            best_j = j;
            best_v = v;
          }
        }
        if (deadline_ && Clock::now() >= *deadline_) {
          best_j = prob_.num_features;
          reason_ = StopReason::kTimeLimit;
          stopped_ = true;
          break;
        }
      }
      if (best_j == prob_.num_features) break;
      shift(best_j, coef_[best_j], best_v);
      current = best_cost;
    }
    for (std::size_t j = 0; j < prob_.num_features; ++j) {
      if (coef_[j] != 0) shift(j, coef_[j], 0);
    }
    cap_ = std::move(saved_cap);
    improved_ = false;
  }

  const SearchProblem& prob_;
  const SearchOptions& opt_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;

  std::vector<std::int32_t> fixed_;
  std::vector<std::int32_t> cap_;
  std::vector<std::int64_t> excess_pos_;
  std::vector<std::int64_t> excess_neg_;
  std::int64_t base_ = 0;
  std::vector<std::int64_t> scan_pos_;
  std::vector<std::int64_t> scan_neg_;
  std::vector<int> coef_;
  int l0_ = 0;
  std::int64_t l1_ = 0;

  std::vector<std::vector<std::int64_t>> suffix_desc_;
  struct Grouping {
    std::vector<std::uint32_t> singles;
    std::vector<std::uint32_t> members;  ///< multi-unit groups, contiguous
    std::vector<std::uint32_t> starts;   ///< group k is members[starts[k], starts[k+1])
  };
  std::vector<Grouping> groupings_;
  std::vector<std::int64_t> group_total_;
  std::vector<std::int64_t> curve_;
  std::deque<std::size_t> window_;
  std::vector<Frame> frames_;

  Candidate best_;
  std::set<Candidate, CandidateLess> pool_;
  std::unordered_set<std::string> pool_keys_;
  std::int64_t root_bound_ = 0;
  std::int64_t lower_bound_ = std::numeric_limits<std::int64_t>::min();
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  bool improved_ = false;
  StopReason reason_ = StopReason::kCompleted;
};

}  // namespace

SearchResult run_search(const SearchProblem& problem, const SearchOptions& options) {
  Searcher searcher(problem, options);
  return searcher.run();
}

std::int64_t partial_bound(const SearchProblem& problem, std::span<const std::optional<int>> partial) {
  SearchOptions options;
  Searcher searcher(problem, options);
  return searcher.bound_for(partial);
}

Candidate evaluate_exact(const SearchProblem& problem, std::span<const int> coefs) {
  if (coefs.size() != problem.num_features) throw ConfigError("coefficient vector has the wrong length");
  SearchOptions options;
  Searcher searcher(problem, options);
  return searcher.evaluate(coefs);
}

}  // namespace slim::detail
