#include "radar/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "radar/report.hpp"

namespace radar {

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  fit.n = std::min(x.size(), y.size());
  if (fit.n < 3) return fit;
  double n = static_cast<double>(fit.n);
  double sx = 0, sy = 0;
  for (size_t i = 0; i < fit.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < fit.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < fit.n; ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  fit.valid = true;
  return fit;
}

std::vector<double> ScalingSeries::total_time_ratios() const {
  std::vector<double> out;
  for (size_t i = 1; i < points.size(); ++i) {
    double prev = points[i - 1].timings.total_seconds();
    if (prev > 0) out.push_back(points[i].timings.total_seconds() / prev);
  }
  return out;
}

namespace {

StepTimings measure_impl(const SemanticModel& model, const RandomPlan& plan, SimMode mode,
                         double budget_seconds, int workers, SimMode* effective) {
  AnalysisConfig config;
  config.plan = plan;
  config.sim.mode = mode;
  config.sim.workers = workers;
  config.deadline_seconds = budget_seconds;
  AnalysisResult result = run_analysis(model, config);
  if (effective && result.timings.completed_steps > kStepSimulation) {
    *effective = result.sim.mode;
  }
  return result.timings;
}

// One series point: a single measurement, re-measured twice more (median of
// three totals) when the first run is cheap enough to afford it.
BenchPoint bench_point(const SemanticModel& model, double x, size_t n_runs, SimMode mode,
                       double ds_size, const BenchOptions& opt) {
  BenchPoint point;
  point.x = x;
  point.n_runs = n_runs;
  point.ds_size = ds_size;
  point.mode = mode;
  RandomPlan plan{opt.sim_seed, n_runs};
  point.timings =
      measure_impl(model, plan, mode, opt.point_budget_seconds, opt.workers, &point.mode);
  if (point.timings.timed_out ||
      point.timings.total_seconds() > opt.repeat_threshold_seconds) {
    return point;
  }
  std::vector<StepTimings> runs{point.timings};
  runs.push_back(measure(model, plan, mode, opt.point_budget_seconds, opt.workers));
  runs.push_back(measure(model, plan, mode, opt.point_budget_seconds, opt.workers));
  std::sort(runs.begin(), runs.end(), [](const StepTimings& a, const StepTimings& b) {
    return a.total_seconds() < b.total_seconds();
  });
  point.timings = runs[1];
  point.repeats = 3;
  return point;
}

}  // namespace

StepTimings measure(const SemanticModel& model, const RandomPlan& plan, SimMode mode,
                    double budget_seconds, int workers) {
  return measure_impl(model, plan, mode, budget_seconds, workers, nullptr);
}

namespace {

void fit_series(ScalingSeries& series) {
  std::vector<double> xs, times, mems;
  for (const auto& p : series.points) {
    if (p.timings.timed_out) continue;
    xs.push_back(p.x);
    times.push_back(p.timings.total_seconds());
    mems.push_back(static_cast<double>(
        *std::max_element(p.timings.mem_peak.begin(), p.timings.mem_peak.end())));
  }
  series.time_fit = ols_fit(xs, times);
  series.mem_fit = ols_fit(xs, mems);
}

}  // namespace

ScalingSeries run_rq1(const GeneratorConfig& shape, size_t n_start, int doublings,
                      const BenchOptions& options) {
  if (doublings < 3) throw ConfigError("rq1 needs at least 3 doublings for a fit");
  if (n_start == 0) throw ConfigError("rq1 needs n_start >= 1");
  SemanticModel model = analyze(generate(shape));
  DesignSpace space = enumerate_design_space(model);
  double ds = static_cast<double>(space.size());

  ScalingSeries series;
  series.x_name = "N";
  // Warm-up at the smallest point: first-touch page faults and allocator
  // growth land here instead of inside the first measured point.
  measure(model, RandomPlan{options.sim_seed, n_start}, SimMode::Streaming,
          options.point_budget_seconds, options.workers);
  for (int i = 0; i <= doublings; ++i) {
    size_t n = n_start << i;
    series.points.push_back(
        bench_point(model, static_cast<double>(n), n, SimMode::Streaming, ds, options));
    if (series.points.back().timings.timed_out) {
      series.truncated = true;
      break;
    }
  }
  fit_series(series);
  return series;
}

ScalingSeries run_rq2(std::span<const GeneratorConfig> sweep, size_t n_runs,
                      const BenchOptions& options) {
  if (sweep.empty()) throw ConfigError("rq2 sweep is empty");
  ScalingSeries series;
  series.x_name = "designSpaceSize";
  double prev_size = 0;
  bool warmed = false;
  for (const auto& config : sweep) {
    SemanticModel model = analyze(generate(config));
    DesignSpace space = enumerate_design_space(model);
    double size = static_cast<double>(space.size());
    if (size <= prev_size) {
      throw ConfigError("rq2 sweep sizes must be strictly increasing");
    }
    prev_size = size;
    if (!warmed) {
      measure(model, RandomPlan{options.sim_seed, n_runs}, SimMode::Auto,
              options.point_budget_seconds, options.workers);
      warmed = true;
    }
    series.points.push_back(bench_point(model, size, n_runs, SimMode::Auto, size, options));
    if (series.points.back().timings.timed_out) {
      series.truncated = true;
      break;
    }
  }
  fit_series(series);
  return series;
}

ScalingSeries run_rq3(std::span<const int> objective_counts, const GeneratorConfig& shape,
                      size_t n_runs, const BenchOptions& options) {
  if (objective_counts.empty()) throw ConfigError("rq3 needs at least one objective count");
  for (size_t i = 1; i < objective_counts.size(); ++i) {
    if (objective_counts[i] <= objective_counts[i - 1]) {
      throw ConfigError("rq3 objective counts must be ascending");
    }
  }
  ScalingSeries series;
  series.x_name = "objectives";
  bool warmed = false;
  for (int count : objective_counts) {
    GeneratorConfig config = shape;
    config.objectives = count;
    SemanticModel model = analyze(generate(config));
    DesignSpace space = enumerate_design_space(model);
    double size = static_cast<double>(space.size());
    if (!warmed) {
      measure(model, RandomPlan{options.sim_seed, n_runs}, SimMode::Auto,
              options.point_budget_seconds, options.workers);
      warmed = true;
    }
    series.points.push_back(
        bench_point(model, static_cast<double>(count), n_runs, SimMode::Auto, size, options));
    if (series.points.back().timings.timed_out) {
      series.truncated = true;
      break;
    }
  }
  fit_series(series);
  return series;
}

PercentTable run_rq4(std::span<const StepTimings> rows) {
  PercentTable table;
  for (const auto& row : rows) {
    double total_t = row.total_seconds();
    double total_m = static_cast<double>(row.total_mem());
    if (total_t <= 0 && total_m <= 0) continue;
    for (int s = 0; s < 4; ++s) {
      if (total_t > 0) {
        table.time_share[static_cast<size_t>(s)] += 100.0 * row.seconds[static_cast<size_t>(s)] / total_t;
      }
      if (total_m > 0) {
        table.mem_share[static_cast<size_t>(s)] +=
            100.0 * static_cast<double>(row.mem_peak[static_cast<size_t>(s)]) / total_m;
      }
    }
    ++table.models;
  }
  if (table.models == 0) throw ConfigError("rq4 needs at least one measured model");
  for (int s = 0; s < 4; ++s) {
    table.time_share[static_cast<size_t>(s)] /= static_cast<double>(table.models);
    table.mem_share[static_cast<size_t>(s)] /= static_cast<double>(table.models);
  }
  return table;
}

std::string machine_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    auto at = line.find("model name");
    if (at == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos) {
        cpu = line.substr(colon + 1);
        while (!cpu.empty() && cpu.front() == ' ') cpu.erase(cpu.begin());
      }
      break;
    }
  }
  size_t mem_kb = 0;
  std::ifstream mem("/proc/meminfo");
  while (std::getline(mem, line)) {
    if (line.rfind("MemTotal:", 0) == 0) {
      mem_kb = static_cast<size_t>(std::strtoull(line.c_str() + 9, nullptr, 10));
      break;
    }
  }
  unsigned cores = std::thread::hardware_concurrency();
  std::string out = cpu + ", " + std::to_string(cores ? cores : 1) + " logical cores";
  if (mem_kb) out += ", " + std::to_string(mem_kb / 1024) + " MiB RAM";
  return out;
}

GeneratorConfig rq1_shape() {
  GeneratorConfig config;
  config.objectives = 2;
  config.decisions = 10;
  config.options_per_decision = 3;
  config.min_variables = 100;
  config.with_dependencies = false;
  config.seed = 1;
  return config;
}

std::vector<GeneratorConfig> rq2_sweep(bool paper_scale) {
  std::vector<GeneratorConfig> sweep;
  int max_decisions = paper_scale ? 12 : 10;
  for (int d = 2; d <= max_decisions; d += 2) {
    GeneratorConfig config;
    config.objectives = 2;
    config.decisions = d;
    config.options_per_decision = 3;
    config.min_variables = 100;
    config.seed = 1;
    sweep.push_back(config);
  }
  return sweep;
}

GeneratorConfig rq3_shape(bool paper_scale) {
  GeneratorConfig config;
  config.objectives = 2;
  config.decisions = paper_scale ? 10 : 6;
  config.options_per_decision = 3;
  config.min_variables = 100;
  config.seed = 1;
  return config;
}

std::vector<int> rq3_objective_counts() { return {2, 3, 4, 5}; }

size_t rq1_n_start(bool paper_scale) { return paper_scale ? 10'000 : 1'000; }
int rq1_doublings(bool paper_scale) { return paper_scale ? 9 : 6; }
size_t rq_n_runs(bool paper_scale) { return paper_scale ? 10'000 : 1'000; }

std::string render_series_csv(const ScalingSeries& series) {
  std::string out = series.x_name +
                    ",n_runs,ds_size,mode,repeats,timed_out,t_design,t_sim,t_shortlist,"
                    "t_voi,t_total,mem_design,mem_sim,mem_shortlist,mem_voi,mem_total,"
                    "rss_design,rss_sim,rss_shortlist,rss_voi\n";
  for (const auto& p : series.points) {
    out += fmt17(p.x);
    out += ',' + std::to_string(p.n_runs);
    out += ',' + fmt17(p.ds_size);
    out += ',';
    out += sim_mode_name(p.mode);
    out += ',' + std::to_string(p.repeats);
    out += ',' + std::to_string(p.timings.timed_out ? 1 : 0);
    for (int s = 0; s < 4; ++s) out += ',' + fmt17(p.timings.seconds[static_cast<size_t>(s)]);
    out += ',' + fmt17(p.timings.total_seconds());
    for (int s = 0; s < 4; ++s) {
      out += ',' + std::to_string(p.timings.mem_peak[static_cast<size_t>(s)]);
    }
    out += ',' + std::to_string(p.timings.total_mem());
    for (int s = 0; s < 4; ++s) {
      out += ',' + std::to_string(p.timings.rss_after[static_cast<size_t>(s)]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string fmt3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void render_series_md(std::string& out, const std::string& name, const ScalingSeries& s) {
  out += "## " + name + "\n\n";
  out += "| " + s.x_name + " | N | space | mode | total s | sim s | peak step MiB |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& p : s.points) {
    double peak_mib = static_cast<double>(*std::max_element(p.timings.mem_peak.begin(),
                                                            p.timings.mem_peak.end())) /
                      (1024.0 * 1024.0);
    out += "| " + fmt17(p.x) + " | " + std::to_string(p.n_runs) + " | " + fmt17(p.ds_size) +
           " | " + sim_mode_name(p.mode) + " | " + fmt3(p.timings.total_seconds()) + " | " +
           fmt3(p.timings.seconds[kStepSimulation]) + " | " + fmt3(peak_mib) +
           (p.timings.timed_out ? " (timed out) |\n" : " |\n");
  }
  out += "\n";
  if (s.time_fit.valid) {
    out += "Time fit: slope " + fmt17(s.time_fit.slope) + " s/unit, intercept " +
           fmt17(s.time_fit.intercept) + " s, R^2 " + fmt3(s.time_fit.r2) + ".\n";
  } else {
    out += "Time fit skipped (fewer than 3 completed points).\n";
  }
  if (s.mem_fit.valid) {
    out += "Memory fit: slope " + fmt17(s.mem_fit.slope) + " B/unit, R^2 " +
           fmt3(s.mem_fit.r2) + ".\n";
  }
  auto ratios = s.total_time_ratios();
  if (!ratios.empty()) {
    out += "Successive total-time ratios:";
    for (double r : ratios) out += " " + fmt3(r);
    out += "\n";
  }
  if (s.truncated) out += "Series truncated by the per-point budget.\n";
  out += "\n";
}

}  // namespace

std::string render_report_md(const BenchmarkReport& report) {
  std::string out = "# Scaling report\n\n";
  out += "Machine: " + report.machine + "\n\n";
  out += "Scale: " + report.scale + "; simulation workers: " +
         std::to_string(report.workers) + ".\n\n";
  for (const auto& [name, series] : report.series) {
    render_series_md(out, name, series);
  }
  if (report.has_shares) {
    out += "## Per-step shares\n\n";
    out += "Averaged over " + std::to_string(report.shares.models) + " measured models.\n\n";
    out += "| step | time % | memory % |\n|---|---|---|\n";
    for (int s = 0; s < 4; ++s) {
      out += std::string("| ") + step_name(s) + " | " +
             fmt3(report.shares.time_share[static_cast<size_t>(s)]) + " | " +
             fmt3(report.shares.mem_share[static_cast<size_t>(s)]) + " |\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace radar
