#pragma once

#include <string>

#include "radar/analysis.hpp"
#include "radar/semantics.hpp"

namespace radar {

// %.17g — enough digits that distinct doubles never collide in output.
std::string fmt17(double value);

// Pareto front as CSV: one row per shortlisted solution with its option
// bindings (empty cell = decision inactive in that solution) and mean
// objective values. Deterministic given identical analysis results.
std::string render_front_csv(const SemanticModel& model, const AnalysisResult& result);

// Value-of-information table as CSV: one EVTPI row, one EVPPI row per
// parameter in declaration order.
std::string render_voi_csv(const AnalysisResult& result);

}  // namespace radar
