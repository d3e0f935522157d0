#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/model.hpp"

namespace slim {

/// Independent Bernoulli features with labels drawn from a logistic model
/// P(y=+1 | x) = 1 / (1 + exp(-(bias + weights . x))).
struct SynthSpec {
  std::vector<std::string> names;
  std::vector<double> marginals;  ///< P(x_j = 1), each in (0,1)
  std::vector<double> weights;    ///< same length as marginals
  double bias = 0.0;
};

/// Deterministic given `seed`. Throws ConfigError on bad marginals or N < 1.
BinaryDataset synth_generate(const SynthSpec& spec, std::size_t n, std::uint64_t seed);

/// Same draw as synth_generate but also returns the true P(y=+1 | x_i).
BinaryDataset synth_generate(const SynthSpec& spec, std::size_t n, std::uint64_t seed,
                             std::vector<double>& true_probability);

/// 48 binary recidivism risk factors with realistic marginal frequencies.
/// Zero marginals are floored at 0.005
/// so every feature can be drawn.
struct NamedMarginal {
  const char* name;
  double marginal;
};
const std::vector<NamedMarginal>& recidivism_input_variables();

/// Table-of-inputs marginals with zero weights and a bias chosen so that
/// P(y=+1) = `prevalence`.
SynthSpec recidivism_like_spec(double prevalence = 0.59);

/// Noiseless data labelled by `truth`: features are independent
/// Bernoulli(marginal) and y = predict(truth, x). Throws ConfigError when
/// the marginal is outside (0,1) or N < 1.
BinaryDataset synth_planted(const ScoringSystem& truth, std::size_t n, std::uint64_t seed, double marginal = 0.5);

}  // namespace slim
