#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "radar/design_space.hpp"
#include "radar/semantics.hpp"

namespace radar {

struct RandomPlan {
  uint64_t root_seed = 0;
  size_t n_runs = 10'000;
};

enum class SimMode : uint8_t { Auto, FullRetention, Streaming };

const char* sim_mode_name(SimMode mode);

struct SimOptions {
  SimMode mode = SimMode::Auto;
  int workers = 0;  // 0 = hardware concurrency
  // Auto retains per-run draws only while their projected size stays at or
  // below this threshold; beyond it the run streams.
  size_t retention_threshold = size_t{1} << 30;
  // An explicit FullRetention request beyond this budget raises
  // CapacityError instead of attempting the allocation.
  size_t memory_budget = size_t{3} << 30;
  double deadline_seconds = 0;  // 0 = unlimited; checked cooperatively
};

// Flat, index-based representation of an analyzed model, built once and
// shared read-only by all workers. `deterministic(v)` lowers to a constant;
// every other distribution call becomes a Draw node with folded arguments
// and a stable stream id (parameters hash their variable name, anonymous
// calls their preorder position).
class CompiledModel {
 public:
  enum class Op : uint8_t { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Draw, Choose };

  struct Node {
    Op op = Op::Const;
    DistKind dist = DistKind::Deterministic;
    int32_t a = -1;  // lhs node / var slot / decision index
    int32_t b = -1;  // rhs node
    double v0 = 0, v1 = 0, v2 = 0;  // constant or folded distribution args
    uint64_t stream = 0;
    SourcePos pos;
  };

  struct Objective {
    std::string name;
    Direction direction = Direction::Max;
    int var_slot = -1;
  };

  explicit CompiledModel(const SemanticModel& model);

  size_t num_objectives() const { return objectives_.size(); }
  const Objective& objective(size_t i) const { return objectives_[i]; }
  size_t num_vars() const { return var_root_.size(); }
  const std::string& var_name(size_t slot) const { return var_names_[slot]; }
  size_t num_decisions() const { return decision_names_.size(); }
  const std::string& decision_name(size_t d) const { return decision_names_[d]; }

  const std::vector<Node>& nodes() const { return nodes_; }
  int32_t var_root(size_t slot) const { return var_root_[slot]; }
  std::span<const int32_t> options_of(size_t decision) const {
    return decision_options_[decision];
  }
  // A static variable never touches a decision, so under common random
  // numbers its value is identical in every solution and can be computed
  // once per run window instead of once per solution.
  bool var_is_static(size_t slot) const { return var_static_[slot] != 0; }

 private:
  int32_t lower(const Expr& expr);
  bool var_dynamic(size_t slot, std::vector<int8_t>& state);
  bool subtree_dynamic(int32_t id, std::vector<int8_t>& state);

  std::vector<Node> nodes_;
  std::vector<int32_t> var_root_;
  std::vector<uint8_t> var_static_;
  std::vector<std::string> var_names_;
  std::vector<Objective> objectives_;
  std::vector<std::vector<int32_t>> decision_options_;
  std::vector<std::string> decision_names_;
  const SemanticModel* building_ = nullptr;
  const Expr* param_root_ = nullptr;
  uint64_t param_stream_ = 0;
  uint64_t anon_counter_ = 0;
};

struct SimulationResult {
  size_t num_solutions = 0;
  size_t num_objectives = 0;
  size_t n_runs = 0;
  SimMode mode = SimMode::Streaming;  // effective mode, never Auto
  std::vector<double> means;  // [solution * num_objectives + objective]
  // FullRetention only: [(solution * num_objectives + objective) * n_runs + run]
  std::vector<double> draws;

  bool retained() const { return mode == SimMode::FullRetention; }
  double mean(size_t solution, size_t objective) const {
    return means[solution * num_objectives + objective];
  }
  const double* draw_row(size_t solution, size_t objective) const {
    return draws.data() + (solution * num_objectives + objective) * n_runs;
  }
};

// Runs every solution of the design space for plan.n_runs Monte-Carlo runs
// under common random numbers. Means are accumulated in run order, so
// Streaming and FullRetention agree bitwise, as do any worker counts.
SimulationResult simulate(const CompiledModel& model, const DesignSpace& space,
                          const RandomPlan& plan, const SimOptions& options = {});

// Evaluates a single run of a single assignment; bitwise identical to the
// corresponding column of a full simulation.
std::map<std::string, double> evaluate_run(const CompiledModel& model,
                                           std::span<const int8_t> assignment,
                                           const RandomPlan& plan, size_t run_index);

// Net-benefit matrix over a strategy shortlist for one objective, run-major.
// Min objectives are negated so that "larger is better" holds everywhere.
struct NbMatrix {
  std::string objective;
  std::vector<size_t> solutions;  // shortlist, as given
  size_t n_runs = 0;
  std::vector<double> values;  // [run * solutions.size() + strategy]

  size_t num_strategies() const { return solutions.size(); }
  double at(size_t run, size_t strategy) const {
    return values[run * solutions.size() + strategy];
  }
};

// Slices retained draws when `retained` holds them, otherwise regenerates
// the shortlisted solutions; both paths produce bitwise-identical matrices.
NbMatrix nb_matrix(const CompiledModel& model, const DesignSpace& space,
                   const RandomPlan& plan, size_t objective_index,
                   std::span<const size_t> shortlist,
                   const SimulationResult* retained = nullptr,
                   const SimOptions& options = {});

// Draws parameter sample i: a pure function of (root seed, stream id, i) —
// the same value the evaluator sees inside any solution (common random
// numbers).
double sample_parameter(const DistributionSpec& dist, uint64_t root_seed,
                        uint64_t stream_id, uint64_t index);

}  // namespace radar
