#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "radar/ast.hpp"
#include "radar/design_space.hpp"

namespace radar {

// Shape of a synthetic model. Counts are exact in the output: `objectives`
// objective declarations, `decisions` decision blocks, each with exactly
// `options_per_decision` options. `min_variables` is a lower bound on the
// number of variable definitions, met by padding with pass-through
// intermediates on the objective path.
struct GeneratorConfig {
  int objectives = 2;
  int decisions = 10;
  int options_per_decision = 3;
  int min_variables = 0;
  bool with_dependencies = false;
  uint64_t seed = 0;
};

// Builds a random model that always passes analysis and always simulates to
// finite values: no division or exponentiation, distribution arguments from
// safe ranges, every decision reachable from every objective. Deterministic
// in (config, seed). Throws ConfigError when a count is out of bounds
// (objectives 1..16, decisions 0..32, options 1..16).
ModelAst generate(const GeneratorConfig& config);

struct SuiteEntry {
  GeneratorConfig config;
  ModelAst model;
  DesignSpaceSize size;
};

// One model per config, with its design-space size (computed without
// enumeration, so oversized sweep entries are still reported).
std::vector<SuiteEntry> generate_suite(std::span<const GeneratorConfig> plan);

}  // namespace radar
