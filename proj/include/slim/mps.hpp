#pragma once

#include <optional>
#include <string>

#include "slim/dataset.hpp"
#include "slim/model.hpp"
#include "slim/polish.hpp"

namespace slim {

enum class MpsVariant {
  kGeneral,     ///< one loss row per example, symmetric margin gamma
  kAggregated,  ///< one loss row per distinct pattern plus conflict rows
  kPolish,      ///< aggregated loss over the active set, no penalty terms
};

MpsVariant parse_mps_variant(const std::string& name);
std::string to_string(MpsVariant variant);

/// Fixed-format MPS text for the chosen formulation. The objective is
/// multiplied by an integer scale (written in a comment line) so every
/// coefficient is integral; divide the solver's objective by it to recover
/// the exact value. kPolish requires `active`.
std::string export_mps(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice,
                       MpsVariant variant, const std::optional<ActiveSet>& active = std::nullopt);

/// Objective scale used by export_mps for the given inputs.
BigInt mps_objective_scale(const AggregatedDataset& data, const PenaltyConfig& cfg, const LatticeSpec& lattice,
                           MpsVariant variant);

}  // namespace slim
