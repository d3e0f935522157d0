#include "slim/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "slim/errors.hpp"

namespace slim {

LatticeSpec LatticeSpec::uniform(std::size_t num_features, int coef_bound, int intercept_bound) {
  LatticeSpec spec;
  spec.coef_bound.assign(num_features, coef_bound);
  spec.intercept_bound = intercept_bound;
  return spec;
}

std::int64_t LatticeSpec::max_l1() const {
  std::int64_t total = 0;
  for (int b : coef_bound) total += b;
  return total;
}

std::uint64_t LatticeSpec::cardinality() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 2 * static_cast<std::uint64_t>(intercept_bound) + 1;
  for (int b : coef_bound) {
    const std::uint64_t width = 2 * static_cast<std::uint64_t>(b) + 1;
    if (total > kMax / width) return kMax;
    total *= width;
  }
  return total;
}

void LatticeSpec::validate(std::size_t num_features) const {
  if (coef_bound.size() != num_features) {
    throw ConfigError("lattice has " + std::to_string(coef_bound.size()) + " coefficient bounds for " +
                      std::to_string(num_features) + " features");
  }
  for (int b : coef_bound) {
    if (b < 1) throw ConfigError("coefficient bounds must be >= 1");
  }
  if (intercept_bound < 1) throw ConfigError("intercept bound must be >= 1");
  if (!(margin > 0 && margin <= 1)) throw ConfigError("margin must lie in (0, 1]");
}

PenaltyConfig PenaltyConfig::for_data(const Rational& w_plus, std::int64_t n, std::size_t p,
                                      const LatticeSpec& lattice, int max_terms) {
  if (w_plus < 0 || w_plus > 2) throw ConfigError("W+ must lie in [0, 2]");
  PenaltyConfig cfg;
  cfg.w_plus = w_plus;
  cfg.w_minus = 2 - w_plus;
  cfg.max_terms = max_terms;
  Rational c0_bound = derive_c0_bound(cfg.w_plus, cfg.w_minus, n, p);
  if (c0_bound == 0) {
    c0_bound = std::max(cfg.w_plus, cfg.w_minus) / Rational(BigInt(n) * BigInt(p));
  }
  cfg.c0 = c0_bound / 2;
  cfg.epsilon = derive_epsilon_bound(cfg.c0, n, lattice) / 2;
  return cfg;
}

void PenaltyConfig::validate(std::int64_t n, std::size_t p, const LatticeSpec& lattice) const {
  if (w_plus < 0 || w_minus < 0) throw ConfigError("class weights must be nonnegative");
  if (w_plus + w_minus != 2) throw ConfigError("class weights must satisfy W+ + W- = 2");
  if (max_terms < 0) throw ConfigError("max_terms must be nonnegative");
  if (!(c0 > 0)) throw ConfigError("C0 must be positive");
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (w_plus > 0 && w_minus > 0) {
    const Rational bound = derive_c0_bound(w_plus, w_minus, n, p);
    if (!(c0 < bound)) {
      throw ConfigError("C0 = " + to_string(c0) + " is not below min(W+,W-)/(N*P) = " + to_string(bound));
    }
  }
  const Rational eps_bound = derive_epsilon_bound(c0, n, lattice);
  if (!(epsilon < eps_bound)) {
    throw ConfigError("epsilon = " + to_string(epsilon) + " is not below " + to_string(eps_bound));
  }
}

ScoringSystem ScoringSystem::from_dense(int intercept, std::span<const int> coefficients,
                                        std::vector<std::string> feature_names) {
  if (coefficients.size() != feature_names.size()) {
    throw DataError("coefficient vector and feature names differ in length");
  }
  ScoringSystem model;
  model.intercept = intercept;
  model.feature_names = std::move(feature_names);
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    if (coefficients[j] != 0) model.terms.push_back(Term{j, coefficients[j]});
  }
  return model;
}

std::vector<int> ScoringSystem::dense() const {
  std::vector<int> out(num_features(), 0);
  for (const auto& t : terms) out.at(t.feature) = t.points;
  return out;
}

int ScoringSystem::coefficient(std::size_t feature) const {
  for (const auto& t : terms) {
    if (t.feature == feature) return t.points;
  }
  return 0;
}

std::int64_t ScoringSystem::l1() const {
  std::int64_t total = 0;
  for (const auto& t : terms) total += std::abs(t.points);
  return total;
}

std::vector<std::size_t> ScoringSystem::support() const {
  std::vector<std::size_t> out;
  for (const auto& t : terms) out.push_back(t.feature);
  return out;
}

void ScoringSystem::check_feasible(const LatticeSpec& lattice, int max_terms) const {
  if (lattice.num_features() != num_features()) throw ConfigError("model and lattice dimensions differ");
  if (std::abs(intercept) > lattice.intercept_bound) throw ConfigError("intercept outside the lattice");
  for (const auto& t : terms) {
    if (t.feature >= num_features()) throw ConfigError("term feature index out of range");
    if (t.points == 0) throw ConfigError("zero-point term");
    if (std::abs(t.points) > lattice.coef_bound[t.feature]) {
      throw ConfigError("coefficient of '" + feature_names[t.feature] + "' outside the lattice");
    }
  }
  if (l0() > max_terms) throw ConfigError("model has more than " + std::to_string(max_terms) + " terms");
}

bool tie_break_less(std::span<const int> a_coefs, int a_intercept, std::span<const int> b_coefs,
                    int b_intercept) {
  const auto cmp = std::lexicographical_compare_three_way(a_coefs.begin(), a_coefs.end(), b_coefs.begin(),
                                                          b_coefs.end());
  if (cmp != 0) return cmp < 0;
  if (std::abs(a_intercept) != std::abs(b_intercept)) return std::abs(a_intercept) < std::abs(b_intercept);
  return a_intercept < b_intercept;
}

bool tie_break_less(const ScoringSystem& a, const ScoringSystem& b) {
  const auto da = a.dense();
  const auto db = b.dense();
  return tie_break_less(da, a.intercept, db, b.intercept);
}

std::int64_t points(const ScoringSystem& model, std::span<const std::uint8_t> pattern) {
  if (pattern.size() != model.num_features()) {
    throw DataError("pattern has " + std::to_string(pattern.size()) + " features, model expects " +
                    std::to_string(model.num_features()));
  }
  std::int64_t total = 0;
  for (const auto& t : model.terms) {
    if (pattern[t.feature]) total += t.points;
  }
  return total;
}

std::int64_t score(const ScoringSystem& model, std::span<const std::uint8_t> pattern) {
  return model.intercept + points(model, pattern);
}

int predict(const ScoringSystem& model, std::span<const std::uint8_t> pattern) {
  return score(model, pattern) >= 1 ? 1 : -1;
}

ObjectiveValue objective(const ScoringSystem& model, const AggregatedDataset& data, const PenaltyConfig& cfg) {
  if (model.num_features() != data.num_features()) {
    throw DataError("model has " + std::to_string(model.num_features()) + " features, data has " +
                    std::to_string(data.num_features()));
  }
  if (data.source_n <= 0) throw DataError("objective needs a nonempty dataset");
  ObjectiveValue out;
  for (const auto& s : data.positive_patterns) {
    if (score(model, s.pattern) <= 0) out.positive_errors += s.count;
  }
  for (const auto& t : data.negative_patterns) {
    if (score(model, t.pattern) >= 1) out.negative_errors += t.count;
  }
  const Rational n(BigInt(data.source_n));
  out.weighted_error = cfg.w_plus * out.positive_errors / n + cfg.w_minus * out.negative_errors / n;
  out.l0_count = model.l0();
  out.l1_sum = model.l1();
  out.total = out.weighted_error + cfg.c0 * out.l0_count + cfg.epsilon * out.l1_sum;
  return out;
}

Rational derive_c0_bound(const Rational& w_plus, const Rational& w_minus, std::int64_t n, std::size_t p) {
  if (n < 1 || p < 1) throw ConfigError("N and P must be >= 1");
  if (w_plus < 0 || w_minus < 0) throw ConfigError("class weights must be nonnegative");
  if (w_plus == 0 && w_minus == 0) throw ConfigError("class weights are both zero");
  return std::min(w_plus, w_minus) / Rational(BigInt(n) * BigInt(p));
}

Rational derive_epsilon_bound(const Rational& c0, std::int64_t n, const LatticeSpec& lattice) {
  if (!(c0 > 0)) throw ConfigError("C0 must be positive");
  if (n < 1) throw ConfigError("N must be >= 1");
  const Rational inv_n(BigInt(1), BigInt(n));
  return std::min(inv_n, c0) / Rational(BigInt(lattice.max_l1()));
}

std::int64_t big_m_loss(std::span<const std::uint8_t> pattern, int label, const LatticeSpec& lattice) {
  if (pattern.size() != lattice.num_features()) throw DataError("pattern and lattice dimensions differ");
  std::int64_t m = lattice.intercept_bound;
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    if (pattern[j]) m += lattice.coef_bound[j];
  }
  return label == 1 ? m + 1 : m;
}

Rational big_m_general(std::span<const std::uint8_t> pattern, int /*label*/, const LatticeSpec& lattice) {
  if (pattern.size() != lattice.num_features()) throw DataError("pattern and lattice dimensions differ");
  // The lattice is symmetric, so max(-y * score) is the same for either label.
  std::int64_t m = lattice.intercept_bound;
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    if (pattern[j]) m += lattice.coef_bound[j];
  }
  return lattice.margin + m;
}

ScaledObjective ScaledObjective::from(const PenaltyConfig& cfg, std::int64_t n, std::int64_t n_positive,
                                      std::int64_t n_negative, std::size_t p, const LatticeSpec& lattice) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const Rational pos = cfg.w_plus / Rational(BigInt(n));
  const Rational neg = cfg.w_minus / Rational(BigInt(n));
  BigInt scale = denominator(pos);
  scale = lcm(scale, denominator(neg));
  scale = lcm(scale, denominator(cfg.c0));
  scale = lcm(scale, denominator(cfg.epsilon));

  const auto scaled = [&](const Rational& r) -> BigInt {
    const Rational v = r * Rational(scale);
    return numerator(v);
  };
  const BigInt pw = scaled(pos);
  const BigInt nw = scaled(neg);
  const BigInt l0w = scaled(cfg.c0);
  const BigInt l1w = scaled(cfg.epsilon);
  const BigInt worst = pw * n_positive + nw * n_negative + l0w * static_cast<std::int64_t>(p) +
                       l1w * lattice.max_l1();
  if (worst >= (BigInt(1) << 61)) {
    throw std::overflow_error("objective scale " + scale.str() + " does not fit in 64-bit arithmetic");
  }
  ScaledObjective out;
  out.scale = scale;
  out.positive_weight = pw.convert_to<std::int64_t>();
  out.negative_weight = nw.convert_to<std::int64_t>();
  out.l0_weight = l0w.convert_to<std::int64_t>();
  out.l1_weight = l1w.convert_to<std::int64_t>();
  return out;
}

}  // namespace slim
