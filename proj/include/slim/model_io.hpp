#pragma once

#include <map>
#include <string>
#include <vector>

#include "slim/model.hpp"
#include "slim/solver.hpp"

namespace slim {

/// A model plus the lattice and penalties it was trained under.
struct ModelDocument {
  ScoringSystem model;
  LatticeSpec lattice;
  PenaltyConfig config;
  std::map<std::string, std::string> provenance;
};

/// {intercept, terms:[{feature, index, points}], features, lattice, config,
/// provenance}. Rationals are written exactly as "a/b" strings. The output
/// is a pure function of the document.
std::string to_json(const ModelDocument& doc);
/// Throws DataError on malformed documents.
ModelDocument model_from_json(const std::string& text);

std::string to_json(const SolveReport& report);

/// Points table: one row per term (largest points first), a SCORE row and
/// the threshold line "PREDICT <outcome> IF SCORE > t" with t = -intercept.
std::string format_sheet(const ScoringSystem& model, const std::string& outcome = "Y = +1");
/// Inverse of format_sheet. Throws DataError on unknown features or a
/// malformed sheet.
ScoringSystem parse_sheet(const std::string& text, const std::vector<std::string>& feature_names);

}  // namespace slim
