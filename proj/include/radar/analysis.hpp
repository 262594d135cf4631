#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radar/simulation.hpp"

namespace radar {

// true iff `a` is at least as good as `b` on every objective and strictly
// better on at least one
bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> dirs);

// Indices (ascending) of the solutions whose mean vectors no other solution
// dominates. `means` is row-major [n_solutions x n_objectives].
std::vector<size_t> pareto_shortlist(const double* means, size_t n_solutions,
                                     size_t n_objectives, std::span<const Direction> dirs);

// ceil(sqrt(n_runs)) — the default EVPPI bin count
size_t default_bin_count(size_t n_runs);

// negatives within rounding distance of zero collapse to zero
double clamp_voi(double value);

// Expected value of total perfect information:
//   mean over runs of the best strategy per run, minus the best strategy on
//   mean net benefit. Non-negative up to rounding; tiny negatives clamp.
double evtpi(const NbMatrix& nb);

// Binning EVPPI estimator: runs are sorted by the parameter draw x (run
// index breaking ties), split into `bin_count` equal-size bins, and the best
// per-bin strategy replaces the per-run best. bin_count == 1 recovers
// exactly zero; bin_count == n_runs recovers EVTPI up to rounding.
double evppi(const NbMatrix& nb, std::span<const double> x, size_t bin_count);

struct ParamVoi {
  std::string parameter;
  double value = 0;  // raw estimate; clamp_voi / reporting layers may round
};

struct VoiReport {
  std::string objective;
  size_t strategies = 0;
  size_t bin_count = 0;
  double evtpi_value = 0;
  std::vector<ParamVoi> evppi_values;  // parameter declaration order
};

enum AnalysisStep : int {
  kStepDesignSpace = 0,
  kStepSimulation = 1,
  kStepShortlist = 2,
  kStepVoi = 3,
};

const char* step_name(int step);

struct StepTimings {
  std::array<double, 4> seconds{};
  std::array<size_t, 4> mem_peak{};   // allocator high-water delta per step
  std::array<size_t, 4> rss_after{};  // resident set at step exit
  int completed_steps = 0;
  bool timed_out = false;

  double total_seconds() const;
  size_t total_mem() const;
};

struct AnalysisConfig {
  RandomPlan plan;
  SimOptions sim;
  size_t design_space_cap = kDefaultDesignSpaceCap;
  std::optional<std::string> voi_objective;  // default: first declared objective
  size_t bin_count = 0;                      // 0 = ceil(sqrt(n_runs))
  bool compute_voi = true;
  double deadline_seconds = 0;  // whole pipeline, 0 = unlimited
};

struct AnalysisResult {
  DesignSpace design_space;
  SimulationResult sim;
  std::vector<size_t> shortlist;  // ascending solution indices
  std::optional<VoiReport> voi;
  StepTimings timings;
};

// The four-step pipeline: enumerate, simulate, shortlist, value of
// information. A deadline overrun marks timings.timed_out and returns the
// completed prefix instead of throwing; every other error propagates.
AnalysisResult run_analysis(const SemanticModel& model, const AnalysisConfig& config = {});

}  // namespace radar
