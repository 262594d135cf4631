#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radar/analysis.hpp"
#include "radar/benchmark.hpp"
#include "radar/generator.hpp"
#include "radar/report.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitModelError = 2;
constexpr int kExitAnalysisError = 3;

void print_error(const radar::Error& error, const std::string& file) {
  std::string where = file;
  if (error.pos().known()) where += ":" + radar::to_string(error.pos());
  std::cerr << "error[" << error.kind() << "] " << (where.empty() ? "" : where + ": ")
            << error.what() << "\n";
  if (const auto* parse = dynamic_cast<const radar::ParseError*>(&error)) {
    if (!parse->expected().empty()) {
      std::cerr << "  expected:";
      for (const auto& tok : parse->expected()) std::cerr << ' ' << tok;
      std::cerr << "\n";
    }
  }
  if (const auto* numeric = dynamic_cast<const radar::NumericError*>(&error)) {
    std::cerr << "  at solution " << numeric->solution_index() << ", run "
              << numeric->run_index() << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw radar::IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw radar::IoError("cannot read '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw radar::IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw radar::IoError("cannot write '" + path + "'");
}

radar::SemanticModel load_model(const std::string& path) {
  return radar::analyze_source(read_file(path));
}

radar::SimMode parse_mode(const std::string& name) {
  if (name == "auto") return radar::SimMode::Auto;
  if (name == "full") return radar::SimMode::FullRetention;
  if (name == "streaming") return radar::SimMode::Streaming;
  throw radar::ConfigError("unknown mode '" + name + "' (auto|full|streaming)");
}

struct AnalyzeArgs {
  std::string model_path;
  size_t n_runs = 10'000;
  uint64_t seed = 0;
  std::string mode = "auto";
  size_t bins = 0;
  std::string voi_objective;
  std::string csv_dir;
  size_t cap = radar::kDefaultDesignSpaceCap;
  int workers = 0;
  bool no_voi = false;
  double deadline = 0;
};

int run_analyze(const AnalyzeArgs& args) {
  radar::SemanticModel model = load_model(args.model_path);

  radar::AnalysisConfig config;
  config.plan = {args.seed, args.n_runs};
  config.sim.mode = parse_mode(args.mode);
  config.sim.workers = args.workers;
  config.design_space_cap = args.cap;
  config.bin_count = args.bins;
  config.compute_voi = !args.no_voi;
  config.deadline_seconds = args.deadline;
  if (!args.voi_objective.empty()) config.voi_objective = args.voi_objective;

  radar::AnalysisResult result = radar::run_analysis(model, config);

  std::cout << "model " << model.ast().model_name << ": "
            << model.objectives().size() << " objectives, " << model.decisions().size()
            << " decisions, " << model.num_vars() << " variables, "
            << model.parameters().size() << " parameters\n";
  std::cout << "design space: " << result.design_space.size() << " solutions\n";
  std::cout << "simulation: N=" << result.sim.n_runs << ", seed=" << args.seed
            << ", mode=" << radar::sim_mode_name(result.sim.mode) << "\n";
  std::cout << "front: " << result.shortlist.size() << " of " << result.sim.num_solutions
            << " solutions\n";

  const auto& ds = result.design_space;
  std::cout << "solution";
  for (const auto& d : ds.decisions()) std::cout << '\t' << d.name;
  for (const auto& obj : model.objectives()) std::cout << '\t' << obj.name;
  std::cout << '\n';
  for (size_t s : result.shortlist) {
    std::cout << s;
    for (size_t d = 0; d < ds.decisions().size(); ++d) {
      const std::string& bound = ds.binding(s, d);
      std::cout << '\t' << (bound.empty() ? "-" : bound);
    }
    for (size_t o = 0; o < result.sim.num_objectives; ++o) {
      std::cout << '\t' << radar::fmt17(result.sim.mean(s, o));
    }
    std::cout << '\n';
  }

  if (result.voi) {
    std::cout << "value of information on " << result.voi->objective << " over "
              << result.voi->strategies << " strategies (" << result.voi->bin_count
              << " bins):\n";
    std::cout << "EVTPI\t" << radar::fmt17(result.voi->evtpi_value) << '\n';
    for (const auto& row : result.voi->evppi_values) {
      std::cout << "EVPPI\t" << row.parameter << '\t' << radar::fmt17(row.value) << '\n';
    }
  }

  const auto& t = result.timings;
  std::printf("timings: design %.3fs, sim %.3fs, shortlist %.3fs, voi %.3fs%s\n",
              t.seconds[0], t.seconds[1], t.seconds[2], t.seconds[3],
              t.timed_out ? " (timed out)" : "");

  if (!args.csv_dir.empty()) {
    std::filesystem::create_directories(args.csv_dir);
    write_file(args.csv_dir + "/front.csv", radar::render_front_csv(model, result));
    write_file(args.csv_dir + "/voi.csv", radar::render_voi_csv(result));
    std::cout << "wrote " << args.csv_dir << "/front.csv and " << args.csv_dir
              << "/voi.csv\n";
  }
  if (t.timed_out) return kExitAnalysisError;
  return 0;
}

struct GenerateArgs {
  std::string out_path;
  radar::GeneratorConfig config;
  std::string suite_csv;
};

std::vector<radar::GeneratorConfig> parse_suite_csv(const std::string& path) {
  std::string text = read_file(path);
  std::vector<radar::GeneratorConfig> plan;
  std::istringstream lines(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> row;
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    if (lineno == 1 && !row.empty() && row[0].find_first_not_of("0123456789 \t") !=
                                           std::string::npos) {
      continue;  // header row
    }
    if (row.size() != 6) {
      throw radar::ConfigError("suite row " + std::to_string(lineno) +
                               " needs 6 columns: objectives,decisions,options,min_vars,"
                               "deps,seed");
    }
    try {
      radar::GeneratorConfig config;
      config.objectives = std::stoi(row[0]);
      config.decisions = std::stoi(row[1]);
      config.options_per_decision = std::stoi(row[2]);
      config.min_variables = std::stoi(row[3]);
      config.with_dependencies = std::stoi(row[4]) != 0;
      config.seed = std::stoull(row[5]);
      plan.push_back(config);
    } catch (const std::exception&) {
      throw radar::ConfigError("suite row " + std::to_string(lineno) +
                               " has a malformed number");
    }
  }
  return plan;
}

int run_generate(const GenerateArgs& args) {
  if (!args.suite_csv.empty()) {
    auto plan = parse_suite_csv(args.suite_csv);
    auto suite = radar::generate_suite(plan);
    std::filesystem::create_directories(args.out_path);
    for (size_t i = 0; i < suite.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "model_%03zu.rdr", i + 1);
      std::string path = args.out_path + "/" + name;
      write_file(path, radar::pretty_print(suite[i].model));
      std::cout << path << ": design space " << suite[i].size.str() << "\n";
    }
    return 0;
  }
  radar::ModelAst model = radar::generate(args.config);
  write_file(args.out_path, radar::pretty_print(model));
  radar::SemanticModel analyzed = radar::analyze(radar::clone(model));
  std::cout << args.out_path << ": design space "
            << radar::size_without_enumeration(analyzed).str() << "\n";
  return 0;
}

struct BenchArgs {
  std::string rq = "all";
  std::string scale = "desk";
  std::string out_dir = "bench_out";
  int workers = 1;
  uint64_t seed = 0;
  double budget = 3600;
};

int run_bench(const BenchArgs& args) {
  bool paper = args.scale == "paper";
  if (!paper && args.scale != "desk") {
    throw radar::ConfigError("unknown scale '" + args.scale + "' (desk|paper)");
  }
  bool want1 = args.rq == "1" || args.rq == "all";
  bool want2 = args.rq == "2" || args.rq == "all";
  bool want3 = args.rq == "3" || args.rq == "all";
  bool want4 = args.rq == "4" || args.rq == "all";
  if (!want1 && !want2 && !want3 && !want4) {
    throw radar::ConfigError("unknown --rq '" + args.rq + "' (1|2|3|4|all)");
  }
  if (want4 && (!want2 || !want3)) {
    std::cout << "rq4 aggregates the rq2 and rq3 measurements; running those too\n";
    want2 = want3 = true;
  }

  radar::BenchOptions options;
  options.workers = args.workers;
  options.sim_seed = args.seed;
  options.point_budget_seconds = args.budget;

  std::filesystem::create_directories(args.out_dir);
  radar::BenchmarkReport report;
  report.machine = radar::machine_descriptor();
  report.workers = args.workers;
  report.scale = paper ? "paper" : "desk";

  std::vector<radar::StepTimings> share_rows;
  if (want1) {
    std::cout << "rq1: time vs N...\n";
    auto series = radar::run_rq1(radar::rq1_shape(), radar::rq1_n_start(paper),
                                 radar::rq1_doublings(paper), options);
    write_file(args.out_dir + "/rq1.csv", radar::render_series_csv(series));
    report.series.emplace_back("rq1", std::move(series));
  }
  if (want2) {
    std::cout << "rq2: time vs design-space size...\n";
    auto sweep = radar::rq2_sweep(paper);
    auto series = radar::run_rq2(sweep, radar::rq_n_runs(paper), options);
    write_file(args.out_dir + "/rq2.csv", radar::render_series_csv(series));
    for (const auto& p : series.points) {
      if (!p.timings.timed_out) share_rows.push_back(p.timings);
    }
    report.series.emplace_back("rq2", std::move(series));
  }
  if (want3) {
    std::cout << "rq3: time vs objective count...\n";
    auto counts = radar::rq3_objective_counts();
    auto series =
        radar::run_rq3(counts, radar::rq3_shape(paper), radar::rq_n_runs(paper), options);
    write_file(args.out_dir + "/rq3.csv", radar::render_series_csv(series));
    for (const auto& p : series.points) {
      if (!p.timings.timed_out) share_rows.push_back(p.timings);
    }
    report.series.emplace_back("rq3", std::move(series));
  }
  if (want4) {
    report.shares = radar::run_rq4(share_rows);
    report.has_shares = true;
  }

  write_file(args.out_dir + "/report.md", radar::render_report_md(report));
  std::cout << "wrote " << args.out_dir << "/report.md\n";
  return 0;
}

int run_inspect(const std::string& path, size_t cap) {
  radar::SemanticModel model = load_model(path);
  const auto& ast = model.ast();
  std::cout << "model " << ast.model_name << "\n";
  std::cout << "  objectives: " << model.objectives().size() << "\n";
  for (const auto& obj : model.objectives()) {
    std::cout << "    " << radar::direction_name(obj.direction) << ' ' << obj.name
              << " = EV(" << obj.target << ")\n";
  }
  std::cout << "  variables: " << model.num_vars() << " (" << model.parameters().size()
            << " parameters)\n";
  std::cout << "  ast nodes: " << radar::node_count(ast) << "\n";
  std::cout << "  decisions: " << model.decisions().size() << "\n";
  for (size_t d = 0; d < model.decisions().size(); ++d) {
    const auto& decision = model.decisions()[d];
    std::cout << "    " << decision.name << " (" << decision.options.size() << " options)"
              << (model.decision_is_top_level(d) ? "" : " [dependent]") << "\n";
  }
  if (!model.dependency_edges().empty()) {
    std::cout << "  dependencies:\n";
    for (const auto& e : model.dependency_edges()) {
      const auto& outer = model.decisions()[static_cast<size_t>(e.outer)];
      std::cout << "    " << model.decisions()[static_cast<size_t>(e.inner)].name
                << " requires " << outer.name << " = \""
                << outer.options[static_cast<size_t>(e.outer_option)] << "\"\n";
    }
  }
  radar::DesignSpaceSize size = radar::size_without_enumeration(model);
  std::cout << "  design space: " << size.str() << " solutions\n";
  if (size.saturated || !size.fits_u64() || size.as_u64() > cap) {
    std::cout << "  warning: exceeds the enumeration cap of " << cap
              << "; analyze would fail\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision model analysis: simulate, shortlist, value of information"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "run the full pipeline on a model");
  analyze_cmd->add_option("model", analyze_args.model_path, "path to a .rdr model")
      ->required();
  analyze_cmd->add_option("--N", analyze_args.n_runs, "simulation runs (default 10000)");
  analyze_cmd->add_option("--seed", analyze_args.seed, "root random seed");
  analyze_cmd->add_option("--mode", analyze_args.mode, "auto|full|streaming");
  analyze_cmd->add_option("--bins", analyze_args.bins,
                          "EVPPI bin count (default ceil(sqrt(N)))");
  analyze_cmd->add_option("--voi-objective", analyze_args.voi_objective,
                          "objective for value-of-information (default: first)");
  analyze_cmd->add_option("--csv-dir", analyze_args.csv_dir,
                          "write front.csv and voi.csv here");
  analyze_cmd->add_option("--cap", analyze_args.cap, "design-space enumeration cap");
  analyze_cmd->add_option("--workers", analyze_args.workers,
                          "simulation threads (0 = hardware)");
  analyze_cmd->add_flag("--no-voi", analyze_args.no_voi, "skip value of information");
  analyze_cmd->add_option("--deadline", analyze_args.deadline,
                          "wall-clock budget in seconds (0 = unlimited)");

  GenerateArgs generate_args;
  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic model");
  generate_cmd->add_option("out", generate_args.out_path,
                           "output .rdr path (or directory with --suite)")
      ->required();
  generate_cmd->add_option("--objectives", generate_args.config.objectives, "1..16");
  generate_cmd->add_option("--decisions", generate_args.config.decisions, "0..32");
  generate_cmd->add_option("--options", generate_args.config.options_per_decision,
                           "options per decision, 1..16");
  generate_cmd->add_option("--min-vars", generate_args.config.min_variables,
                           "minimum variable definitions");
  generate_cmd->add_flag("--deps", generate_args.config.with_dependencies,
                         "nest some decisions inside others");
  generate_cmd->add_option("--seed", generate_args.config.seed, "generator seed");
  generate_cmd->add_option("--suite", generate_args.suite_csv,
                           "CSV plan: objectives,decisions,options,min_vars,deps,seed");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "scaling benchmarks");
  bench_cmd->add_option("--rq", bench_args.rq, "1|2|3|4|all");
  bench_cmd->add_option("--scale", bench_args.scale, "desk|paper");
  bench_cmd->add_option("--out", bench_args.out_dir, "output directory");
  bench_cmd->add_option("--workers", bench_args.workers, "simulation threads");
  bench_cmd->add_option("--seed", bench_args.seed, "simulation seed");
  bench_cmd->add_option("--budget", bench_args.budget, "per-point budget in seconds");

  std::string inspect_path;
  size_t inspect_cap = radar::kDefaultDesignSpaceCap;
  auto* inspect_cmd =
      app.add_subcommand("inspect", "print model structure without analyzing");
  inspect_cmd->add_option("model", inspect_path, "path to a .rdr model")->required();
  inspect_cmd->add_option("--cap", inspect_cap, "cap used for the size warning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::string context_file;
  try {
    if (analyze_cmd->parsed()) {
      context_file = analyze_args.model_path;
      return run_analyze(analyze_args);
    }
    if (generate_cmd->parsed()) {
      context_file = generate_args.suite_csv;
      return run_generate(generate_args);
    }
    if (bench_cmd->parsed()) return run_bench(bench_args);
    if (inspect_cmd->parsed()) {
      context_file = inspect_path;
      return run_inspect(inspect_path, inspect_cap);
    }
  } catch (const radar::LexError& e) {
    print_error(e, context_file);
    return kExitModelError;
  } catch (const radar::ParseError& e) {
    print_error(e, context_file);
    return kExitModelError;
  } catch (const radar::SemanticError& e) {
    print_error(e, context_file);
    return kExitModelError;
  } catch (const radar::IoError& e) {
    print_error(e, context_file);
    return kExitModelError;
  } catch (const radar::Error& e) {
    print_error(e, context_file);
    return kExitAnalysisError;
  }
  return kExitUsage;
}
