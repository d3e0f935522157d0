#include "slim/synth.hpp"

#include <algorithm>
#include <cmath>

#include "slim/errors.hpp"
#include "slim/random.hpp"

namespace slim {

BinaryDataset synth_generate(const SynthSpec& spec, std::size_t n, std::uint64_t seed,
                             std::vector<double>& true_probability) {
  const std::size_t p = spec.marginals.size();
  if (n < 1) throw ConfigError("synthetic dataset needs N >= 1");
  if (p == 0) throw ConfigError("synthetic dataset needs at least one feature");
  if (spec.weights.size() != p) throw ConfigError("weights and marginals differ in length");
  for (double m : spec.marginals) {
    if (!(m > 0.0 && m < 1.0)) throw ConfigError("marginals must lie in (0, 1)");
  }
  std::vector<FeatureSpec> features;
  for (std::size_t j = 0; j < p; ++j) {
    std::string name = j < spec.names.size() ? spec.names[j] : "x" + std::to_string(j + 1);
    features.push_back(FeatureSpec{std::move(name), FeatureKind::kBinary, {}});
  }

  SeededRng rng(seed);
  std::vector<std::uint8_t> x(n * p);
  std::vector<int> y(n);
  true_probability.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double margin = spec.bias;
    for (std::size_t j = 0; j < p; ++j) {
      const bool on = rng.bernoulli(spec.marginals[j]);
      x[i * p + j] = on ? 1 : 0;
      if (on) margin += spec.weights[j];
    }
    const double prob = 1.0 / (1.0 + std::exp(-margin));
    true_probability[i] = prob;
    y[i] = rng.bernoulli(prob) ? 1 : -1;
  }
  return BinaryDataset(std::move(features), std::move(x), std::move(y));
}

BinaryDataset synth_generate(const SynthSpec& spec, std::size_t n, std::uint64_t seed) {
  std::vector<double> unused;
  return synth_generate(spec, n, seed, unused);
}

BinaryDataset synth_planted(const ScoringSystem& truth, std::size_t n, std::uint64_t seed, double marginal) {
  if (n < 1) throw ConfigError("synthetic dataset needs N >= 1");
  if (!(marginal > 0.0 && marginal < 1.0)) throw ConfigError("marginal must lie in (0, 1)");
  const std::size_t p = truth.num_features();
  std::vector<FeatureSpec> features;
  for (const auto& name : truth.feature_names) features.push_back(FeatureSpec{name, FeatureKind::kBinary, {}});
  SeededRng rng(seed);
  std::vector<std::uint8_t> x(n * p);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) x[i * p + j] = rng.bernoulli(marginal) ? 1 : 0;
    y[i] = predict(truth, std::span<const std::uint8_t>(x.data() + i * p, p));
  }
  return BinaryDataset(std::move(features), std::move(x), std::move(y));
}

const std::vector<NamedMarginal>& recidivism_input_variables() {
  static const std::vector<NamedMarginal> table = {
      {"female", 0.06},
      {"prior_alcohol_abuse", 0.20},
      {"prior_drug_abuse", 0.16},
      {"age_at_release<=17", 0.00},
      {"age_at_release_18_to_24", 0.19},
      {"age_at_release_25_to_29", 0.21},
      {"age_at_release_30_to_39", 0.38},
      {"age_at_release>=40", 0.21},
      {"released_unconditional", 0.11},
      {"released_conditional", 0.87},
      {"time_served<=6mo", 0.23},
      {"time_served_7_to_12mo", 0.20},
      {"time_served_13_to_24mo", 0.23},
      {"time_served_25_to_60mo", 0.25},
      {"time_served>=61mo", 0.10},
      {"infraction_in_prison", 0.24},
      {"age_1st_arrest<=17", 0.14},
      {"age_1st_arrest_18_to_24", 0.61},
      {"age_1st_arrest_25_to_29", 0.10},
      {"age_1st_arrest_30_to_39", 0.09},
      {"age_1st_arrest>=40", 0.04},
      {"age_1st_confinement<=17", 0.03},
      {"age_1st_confinement_18_to_24", 0.46},
      {"age_1st_confinement_25_to_29", 0.18},
      {"age_1st_confinement_30_to_39", 0.21},
      {"age_1st_confinement>=40", 0.12},
      {"prior_arrest_for_drug", 0.47},
      {"prior_arrest_for_property", 0.67},
      {"prior_arrest_for_public_order", 0.62},
      {"prior_arrest_for_general_violence", 0.52},
      {"prior_arrest_for_domestic_violence", 0.04},
      {"prior_arrest_for_sexual_violence", 0.03},
      {"prior_arrest_for_fatal_violence", 0.01},
      {"prior_arrest_for_multiple_types", 0.77},
      {"prior_arrest_for_felony", 0.84},
      {"prior_arrest_for_misdemeanor", 0.49},
      {"prior_arrest_for_local_ordinance", 0.01},
      {"prior_arrest_with_firearms_involved", 0.09},
      {"prior_arrest_with_child_involved", 0.17},
      {"no_prior_arrests", 0.12},
      {"prior_arrests>=1", 0.88},
      {"prior_arrests>=2", 0.78},
      {"prior_arrests>=5", 0.60},
      {"multiple_prior_prison_time", 0.43},
      {"any_prior_jail_time", 0.47},
      {"multiple_prior_jail_time", 0.29},
      {"any_prior_probation_or_fine", 0.42},
      {"multiple_prior_probation_or_fine", 0.22},
  };
  return table;
}

namespace {

// Exact P(y=+1) under independent features, enumerating only the features
// that carry weight.
double expected_prevalence(const SynthSpec& spec, double bias) {
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < spec.weights.size(); ++j) {
    if (spec.weights[j] != 0.0) active.push_back(j);
  }
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << active.size()); ++mask) {
    double prob = 1.0;
    double margin = bias;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t j = active[k];
      if (mask & (1u << k)) {
        prob *= spec.marginals[j];
        margin += spec.weights[j];
      } else {
        prob *= 1.0 - spec.marginals[j];
      }
    }
    total += prob / (1.0 + std::exp(-margin));
  }
  return total;
}

}  // namespace

SynthSpec recidivism_like_spec(double prevalence) {
  if (!(prevalence > 0.0 && prevalence < 1.0)) throw ConfigError("prevalence must lie in (0, 1)");
  SynthSpec spec;
  for (const auto& v : recidivism_input_variables()) {
    spec.names.emplace_back(v.name);
    spec.marginals.push_back(std::max(v.marginal, 0.005));
    spec.weights.push_back(0.0);
  }
  // A handful of risk factors carry signal so the learning problem is not trivial.
  const std::pair<const char*, double> signal[] = {
      {"age_at_release_18_to_24", 0.9},  {"prior_arrests>=5", 0.8},
      {"prior_arrest_for_misdemeanor", 0.4}, {"no_prior_arrests", -0.9},
      {"age_at_release>=40", -0.7},      {"multiple_prior_jail_time", 0.5},
  };
  for (const auto& [name, w] : signal) {
    const auto it = std::find(spec.names.begin(), spec.names.end(), name);
    spec.weights[static_cast<std::size_t>(it - spec.names.begin())] = w;
  }
  double lo = -20.0;
  double hi = 20.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (expected_prevalence(spec, mid) < prevalence ? lo : hi) = mid;
  }
  spec.bias = 0.5 * (lo + hi);
  return spec;
}

}  // namespace slim
