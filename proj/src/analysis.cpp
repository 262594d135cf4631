#include "radar/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "radar/mem_tracker.hpp"

namespace radar {

bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> dirs) {
  if (a.size() != b.size() || a.size() != dirs.size()) {
    throw LengthMismatchError("objective vectors have mismatched lengths");
  }
  bool strict = false;
  for (size_t k = 0; k < a.size(); ++k) {
    if (dirs[k] == Direction::Max) {
      if (a[k] < b[k]) return false;
      if (a[k] > b[k]) strict = true;
    } else {
      if (a[k] > b[k]) return false;
      if (a[k] < b[k]) strict = true;
    }
  }
  return strict;
}

std::vector<size_t> pareto_shortlist(const double* means, size_t n_solutions,
                                     size_t n_objectives,
                                     std::span<const Direction> dirs) {
  if (dirs.size() != n_objectives) {
    throw LengthMismatchError("direction vector does not match objective count");
  }
  std::vector<size_t> archive;
  for (size_t s = 0; s < n_solutions; ++s) {
    std::span<const double> cand(means + s * n_objectives, n_objectives);
    bool dominated = false;
    for (size_t idx : archive) {
      std::span<const double> row(means + idx * n_objectives, n_objectives);
      if (dominates(row, cand, dirs)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    archive.erase(std::remove_if(archive.begin(), archive.end(),
                                 [&](size_t idx) {
                                   std::span<const double> row(
                                       means + idx * n_objectives, n_objectives);
                                   return dominates(cand, row, dirs);
                                 }),
                  archive.end());
    archive.push_back(s);
  }
  std::sort(archive.begin(), archive.end());
  return archive;
}

size_t default_bin_count(size_t n_runs) {
  return static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(n_runs))));
}

double clamp_voi(double value) {
  return (value < 0 && value >= -1e-12) ? 0.0 : value;
}

namespace {

// Kahan–Babuška (Neumaier) compensated sum; keeps the row-maxima totals
// order-insensitive to well below the published tolerances.
struct CompensatedSum {
  double sum = 0;
  double comp = 0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace

double evtpi(const NbMatrix& nb) {
  size_t n = nb.n_runs;
  size_t j = nb.num_strategies();
  if (j == 0) throw ConfigError("net-benefit matrix has no strategies");
  if (n == 0) throw ConfigError("net-benefit matrix has no runs");

  // column sums use the same compensated accumulation as the row-maxima sum,
  // so a single-strategy matrix yields exactly zero
  std::vector<CompensatedSum> colsum(j);
  CompensatedSum best_per_run;
  for (size_t i = 0; i < n; ++i) {
    const double* row = nb.values.data() + i * j;
    double m = row[0];
    colsum[0].add(row[0]);
    for (size_t k = 1; k < j; ++k) {
      colsum[k].add(row[k]);
      if (row[k] > m) m = row[k];
    }
    best_per_run.add(m);
  }
  double best_col = colsum[0].value();
  for (size_t k = 1; k < j; ++k) best_col = std::max(best_col, colsum[k].value());
  double dn = static_cast<double>(n);
  return clamp_voi(best_per_run.value() / dn - best_col / dn);
}

double evppi(const NbMatrix& nb, std::span<const double> x, size_t bin_count) {
  size_t n = nb.n_runs;
  size_t j = nb.num_strategies();
  if (j == 0) throw ConfigError("net-benefit matrix has no strategies");
  if (n == 0) throw ConfigError("net-benefit matrix has no runs");
  if (x.size() != n) {
    throw LengthMismatchError("parameter draw vector has " + std::to_string(x.size()) +
                              " entries for " + std::to_string(n) + " runs");
  }
  if (bin_count == 0) throw ConfigError("bin_count must be at least 1");
  size_t bins = std::min(bin_count, n);

  // sort runs by draw value, run index breaking ties, then assign each run
  // the bin of its sorted position: bin b covers positions
  // [floor(b*n/bins), floor((b+1)*n/bins))
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return a < b;
  });
  std::vector<uint32_t> bin_of(n);
  for (size_t b = 0; b < bins; ++b) {
    size_t lo = b * n / bins;
    size_t hi = (b + 1) * n / bins;
    for (size_t pos = lo; pos < hi; ++pos) bin_of[order[pos]] = static_cast<uint32_t>(b);
  }

  // bin sums and plain column sums, both accumulated in ascending run order;
  // with a single bin the two are the same operation sequence, which makes
  // the estimator collapse to exactly zero
  std::vector<double> bin_sum(bins * j, 0.0);
  std::vector<uint32_t> bin_n(bins, 0);
  std::vector<double> colsum(j, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double* row = nb.values.data() + i * j;
    double* bs = bin_sum.data() + bin_of[i] * j;
    for (size_t k = 0; k < j; ++k) {
      bs[k] += row[k];
      colsum[k] += row[k];
    }
    ++bin_n[bin_of[i]];
  }

  CompensatedSum best_per_bin;
  for (size_t b = 0; b < bins; ++b) {
    if (!bin_n[b]) continue;
    const double* bs = bin_sum.data() + b * j;
    best_per_bin.add(*std::max_element(bs, bs + j));
  }
  double best_col = *std::max_element(colsum.begin(), colsum.end());
  double dn = static_cast<double>(n);
  return clamp_voi(best_per_bin.value() / dn - best_col / dn);
}

const char* step_name(int step) {
  switch (step) {
    case kStepDesignSpace: return "design-space";
    case kStepSimulation: return "simulation";
    case kStepShortlist: return "shortlist";
    case kStepVoi: return "voi";
  }
  return "?";
}

double StepTimings::total_seconds() const {
  double t = 0;
  for (double s : seconds) t += s;
  return t;
}

size_t StepTimings::total_mem() const {
  size_t m = 0;
  for (size_t b : mem_peak) m += b;
  return m;
}

AnalysisResult run_analysis(const SemanticModel& model, const AnalysisConfig& config) {
  if (model.objectives().empty()) {
    throw ConfigError("model '" + model.name() + "' declares no objectives");
  }

  AnalysisResult out;
  StepTimings& tm = out.timings;
  auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t_start;
    return dt.count();
  };
  auto over_deadline = [&]() {
    return config.deadline_seconds > 0 && elapsed() > config.deadline_seconds;
  };

  // Runs one pipeline step with wall time and memory scoped to it. Deadline
  // overruns (between steps or surfaced by the step itself) stop the
  // pipeline, leaving the completed prefix in place.
  auto run_step = [&](int step, auto&& fn) -> bool {
    memtrack::begin_scope();
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    try {
      fn();
    } catch (const TimeoutError&) {
      ok = false;
    }
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    tm.seconds[static_cast<size_t>(step)] = dt.count();
    tm.mem_peak[static_cast<size_t>(step)] = memtrack::scope_peak_delta();
    tm.rss_after[static_cast<size_t>(step)] = memtrack::current_rss();
    if (!ok || over_deadline()) {
      tm.timed_out = true;
      if (ok) tm.completed_steps = step + 1;
      return false;
    }
    tm.completed_steps = step + 1;
    return true;
  };

  std::optional<CompiledModel> compiled;
  if (!run_step(kStepDesignSpace, [&] {
        compiled.emplace(model);
        out.design_space = enumerate_design_space(model, config.design_space_cap);
      })) {
    return out;
  }

  SimOptions sim_options = config.sim;
  if (config.deadline_seconds > 0) {
    double remaining = config.deadline_seconds - elapsed();
    sim_options.deadline_seconds = remaining > 0 ? remaining : 1e-9;
  }
  if (!run_step(kStepSimulation, [&] {
        out.sim = simulate(*compiled, out.design_space, config.plan, sim_options);
      })) {
    return out;
  }

  std::vector<Direction> dirs;
  dirs.reserve(model.objectives().size());
  for (const auto& obj : model.objectives()) dirs.push_back(obj.direction);
  if (!run_step(kStepShortlist, [&] {
        out.shortlist = pareto_shortlist(out.sim.means.data(), out.sim.num_solutions,
                                         out.sim.num_objectives, dirs);
      })) {
    return out;
  }

  if (!config.compute_voi) return out;
  run_step(kStepVoi, [&] {
    size_t obj_index = 0;
    if (config.voi_objective) {
      auto oi = model.objective_index(*config.voi_objective);
      if (!oi) throw ConfigError("unknown objective '" + *config.voi_objective + "'");
      obj_index = static_cast<size_t>(*oi);
    }
    NbMatrix nb = nb_matrix(*compiled, out.design_space, config.plan, obj_index,
                            out.shortlist, &out.sim, sim_options);
    VoiReport report;
    report.objective = nb.objective;
    report.strategies = nb.num_strategies();
    report.bin_count =
        config.bin_count ? config.bin_count : default_bin_count(config.plan.n_runs);
    report.evtpi_value = evtpi(nb);
    report.evppi_values.reserve(model.parameters().size());
    std::vector<double> x(config.plan.n_runs);
    for (const auto& p : model.parameters()) {
      for (size_t i = 0; i < x.size(); ++i) {
        x[i] = sample_parameter(p.dist, config.plan.root_seed, p.stream_id, i);
      }
      report.evppi_values.push_back(ParamVoi{p.name, evppi(nb, x, report.bin_count)});
    }
    out.voi = std::move(report);
  });
  return out;
}

}  // namespace radar
