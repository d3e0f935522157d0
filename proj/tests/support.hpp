#pragma once

// Fixtures and independent oracles shared by the unit tests. Nothing here
// calls into the solver; the oracles recompute everything row by row.

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/model.hpp"
#include "slim/random.hpp"
#include "slim/rational.hpp"

namespace slim::testing {

/// The four-pattern dataset where y = +1 iff a1 = a2 = 0.
inline BinaryDataset a1a2_dataset() {
  return BinaryDataset::from_rows({"a1", "a2"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {1, -1, -1, -1});
}

inline BinaryDataset random_dataset(SeededRng& rng, std::size_t n, std::size_t p, double density = 0.5) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back("f" + std::to_string(j));
  std::vector<std::vector<int>> rows(n, std::vector<int>(p));
  std::vector<int> labels(n);
  bool have_pos = false;
  bool have_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) rows[i][j] = rng.bernoulli(density) ? 1 : 0;
    labels[i] = rng.bernoulli(0.5) ? 1 : -1;
    (labels[i] == 1 ? have_pos : have_neg) = true;
  }
  if (!have_pos) labels[0] = 1;
  if (!have_neg) labels[n - 1] = -1;
  return BinaryDataset::from_rows(names, rows, labels);
}

/// Random dataset drawn from a small pool of patterns so duplicates and
/// conflicts are common.
inline BinaryDataset duplicated_dataset(SeededRng& rng, std::size_t n, std::size_t p, std::size_t distinct) {
  std::vector<std::vector<int>> pool(distinct, std::vector<int>(p));
  for (auto& row : pool) {
    for (auto& v : row) v = rng.bernoulli(0.5) ? 1 : 0;
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back("f" + std::to_string(j));
  std::vector<std::vector<int>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(pool[rng.below(distinct)]);
    labels.push_back(i == 0 ? 1 : i == 1 ? -1 : (rng.bernoulli(0.5) ? 1 : -1));
  }
  return BinaryDataset::from_rows(names, rows, labels);
}

inline std::vector<int> random_coefficients(SeededRng& rng, const LatticeSpec& lattice) {
  std::vector<int> c(lattice.num_features());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const int b = lattice.coef_bound[j];
    c[j] = static_cast<int>(rng.below(2 * b + 1)) - b;
  }
  return c;
}

/// Objective recomputed from raw rows with the additive score convention.
inline Rational row_objective(const BinaryDataset& data, int intercept, const std::vector<int>& coefs,
                              const PenaltyConfig& cfg) {
  Rational total = 0;
  const Rational n(BigInt(data.num_rows()));
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    std::int64_t s = intercept;
    for (std::size_t j = 0; j < coefs.size(); ++j) s += coefs[j] * data.at(i, j);
    if (data.label(i) == 1 && s <= 0) total += cfg.w_plus / n;
    if (data.label(i) == -1 && s >= 1) total += cfg.w_minus / n;
  }
  for (int c : coefs) {
    if (c != 0) total += cfg.c0 + cfg.epsilon * std::abs(c);
  }
  return total;
}

/// Weighted 0-1 loss only, from raw rows.
inline Rational row_loss(const BinaryDataset& data, int intercept, const std::vector<int>& coefs,
                         const PenaltyConfig& cfg) {
  PenaltyConfig loss_only = cfg;
  loss_only.c0 = 0;
  loss_only.epsilon = 0;
  return row_objective(data, intercept, coefs, loss_only);
}

/// Calls f(coefs) for every coefficient vector of the lattice restricted to
/// `free` (other coordinates stay 0).
template <typename F>
void for_each_lattice_point(const LatticeSpec& lattice, const std::vector<std::size_t>& free, F&& f) {
  std::vector<int> coefs(lattice.num_features(), 0);
  for (std::size_t j : free) coefs[j] = -lattice.coef_bound[j];
  for (;;) {
    f(static_cast<const std::vector<int>&>(coefs));
    std::size_t k = 0;
    while (k < free.size() && coefs[free[k]] == lattice.coef_bound[free[k]]) {
      coefs[free[k]] = -lattice.coef_bound[free[k]];
      ++k;
    }
    if (k == free.size()) return;
    ++coefs[free[k]];
  }
}

struct OracleInstance {
  BinaryDataset data;
  LatticeSpec lattice;
  PenaltyConfig cfg;
};

/// The seeded oracle suite: N <= 40, P <= 4, coefficient bounds <= 2,
/// intercept bound <= 4, penalties at half their admissible bounds.
inline std::vector<OracleInstance> oracle_suite(std::size_t count = 50, std::uint64_t seed = 20240611) {
  SeededRng rng(seed);
  std::vector<OracleInstance> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = 4 + rng.below(37);
    const std::size_t p = 1 + rng.below(4);
    BinaryDataset data = (k % 2 == 0) ? random_dataset(rng, n, p) : duplicated_dataset(rng, n, p, 1 + rng.below(6));
    LatticeSpec lattice;
    for (std::size_t j = 0; j < p; ++j) lattice.coef_bound.push_back(1 + static_cast<int>(rng.below(2)));
    lattice.intercept_bound = 1 + static_cast<int>(rng.below(4));
    const std::int64_t w_tenths = 1 + static_cast<std::int64_t>(rng.below(19));
    const int max_terms = 1 + static_cast<int>(rng.below(p));
    PenaltyConfig cfg = PenaltyConfig::for_data(make_rational(w_tenths, 10), static_cast<std::int64_t>(n), p,
                                                lattice, max_terms);
    out.push_back(OracleInstance{std::move(data), std::move(lattice), std::move(cfg)});
  }
  return out;
}

}  // namespace slim::testing
