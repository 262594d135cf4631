#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radar/analysis.hpp"
#include "radar/generator.hpp"

namespace radar {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  size_t n = 0;
  bool valid = false;  // requires >= 3 points
};

// Ordinary least squares of y on x; `valid` unless fewer than 3 points or a
// degenerate x range.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

struct BenchPoint {
  double x = 0;          // the series' independent variable
  size_t n_runs = 0;
  double ds_size = 0;
  SimMode mode = SimMode::Streaming;  // effective mode of the measured run
  int repeats = 1;       // measured runs behind this point (median taken)
  StepTimings timings;
};

struct ScalingSeries {
  std::string x_name;
  std::vector<BenchPoint> points;
  LinearFit time_fit;  // total seconds vs x, completed points only
  LinearFit mem_fit;   // peak step allocator delta vs x
  bool truncated = false;  // a timeout stopped the series early

  std::vector<double> total_time_ratios() const;  // successive point ratios
};

struct PercentTable {
  std::array<double, 4> time_share{};  // percent, sums to ~100
  std::array<double, 4> mem_share{};
  size_t models = 0;
};

struct BenchOptions {
  double point_budget_seconds = 3600;  // per-point wall clock cutoff
  // Points whose first run finishes within this threshold are re-measured
  // (one warm-up at series start, median of three); slower points keep the
  // single measurement so a series cannot blow its budget.
  double repeat_threshold_seconds = 20;
  int workers = 1;
  uint64_t sim_seed = 0;
};

// One instrumented pipeline run: per-step seconds, allocator high-water
// deltas, and RSS. A budget overrun yields timed_out with the completed
// prefix.
StepTimings measure(const SemanticModel& model, const RandomPlan& plan, SimMode mode,
                    double budget_seconds = 3600, int workers = 1);

// Total time vs number of simulation runs, on one fixed generated model,
// doubling N from n_start. Streaming mode throughout so every point exercises
// identical retention behavior. Requires doublings >= 3 (else ConfigError).
ScalingSeries run_rq1(const GeneratorConfig& shape, size_t n_start, int doublings,
                      const BenchOptions& options = {});

// Total time vs design-space size over a sweep of generated models with
// strictly increasing |DS| (else ConfigError; empty sweep is an error too).
// A timeout records the point and truncates the sweep.
ScalingSeries run_rq2(std::span<const GeneratorConfig> sweep, size_t n_runs,
                      const BenchOptions& options = {});

// Total time vs objective count on fixed decisions/options; counts must be
// ascending and non-empty.
ScalingSeries run_rq3(std::span<const int> objective_counts, const GeneratorConfig& shape,
                      size_t n_runs, const BenchOptions& options = {});

// Mean per-step shares of time and memory across measured models (completed
// steps only). Requires at least one row with nonzero totals.
PercentTable run_rq4(std::span<const StepTimings> rows);

// Free-text host summary: CPU model, logical cores, total RAM.
std::string machine_descriptor();

struct BenchmarkReport {
  std::string machine;
  int workers = 1;
  std::string scale;  // "desk" or "paper"
  std::vector<std::pair<std::string, ScalingSeries>> series;  // ("rq1", ...)
  PercentTable shares;
  bool has_shares = false;
};

// Canned configurations.
GeneratorConfig rq1_shape();
std::vector<GeneratorConfig> rq2_sweep(bool paper_scale);
GeneratorConfig rq3_shape(bool paper_scale);
std::vector<int> rq3_objective_counts();
size_t rq1_n_start(bool paper_scale);
int rq1_doublings(bool paper_scale);
size_t rq_n_runs(bool paper_scale);  // N for RQ2/RQ3 points

// rqN.csv: one row per point, config columns then per-step seconds and bytes.
std::string render_series_csv(const ScalingSeries& series);
// report.md: fits, ratios, and the RQ4 share table.
std::string render_report_md(const BenchmarkReport& report);

}  // namespace radar
