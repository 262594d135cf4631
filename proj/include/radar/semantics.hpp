#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "radar/ast.hpp"

namespace radar {

struct DistributionSpec {
  DistKind kind = DistKind::Deterministic;
  double a = 0, b = 0, c = 0;  // folded arguments in declaration order
};

size_t dist_arity(DistKind kind);

// A model variable whose definition is a single distribution call.
struct Parameter {
  std::string name;
  int var_slot = -1;
  DistributionSpec dist;
  uint64_t stream_id = 0;  // stable hash of the variable name
  SourcePos pos;
};

struct Decision {
  std::string name;
  std::vector<std::string> options;
  SourcePos pos;
};

// Outer decision `outer`, bound to option `outer_option`, activates `inner`.
struct DependencyEdge {
  int outer = -1;
  int outer_option = -1;
  int inner = -1;
};

struct ObjectiveInfo {
  std::string name;
  Direction direction = Direction::Max;
  std::string target;
  int target_slot = -1;
  SourcePos pos;
};

struct VarInfo {
  std::string name;
  const Expr* def = nullptr;
  SourcePos pos;
};

namespace detail {
class Analyzer;
}

// Analyzed model: name-resolved, cycle-free, distribution arguments folded
// and validated. Owns the AST; expression pointers stay valid for the
// lifetime of the object (nodes live on the heap).
class SemanticModel {
 public:
  const ModelAst& ast() const { return ast_; }
  const std::string& name() const { return ast_.model_name; }
  size_t node_count() const { return node_count_; }

  const std::vector<ObjectiveInfo>& objectives() const { return objectives_; }
  const std::vector<Decision>& decisions() const { return decisions_; }
  const std::vector<Parameter>& parameters() const { return parameters_; }
  const std::vector<DependencyEdge>& dependency_edges() const { return dependency_edges_; }

  size_t num_vars() const { return vars_.size(); }
  const VarInfo& var(size_t slot) const { return vars_[slot]; }
  std::optional<int> var_index(std::string_view name) const;
  std::optional<int> decision_index(std::string_view name) const;
  std::optional<int> objective_index(std::string_view name) const;

  // -1 when the variable is not a parameter
  int parameter_of_var(size_t slot) const { return var_param_[slot]; }

  bool decision_is_top_level(size_t index) const { return incoming_edges_[index] == 0; }

 private:
  friend SemanticModel analyze(ModelAst model);
  friend class detail::Analyzer;

  ModelAst ast_;
  size_t node_count_ = 0;
  std::vector<VarInfo> vars_;
  std::unordered_map<std::string, int> var_index_;
  std::vector<ObjectiveInfo> objectives_;
  std::vector<Decision> decisions_;
  std::unordered_map<std::string, int> decision_index_;
  std::vector<Parameter> parameters_;
  std::vector<int> var_param_;
  std::vector<DependencyEdge> dependency_edges_;
  std::vector<int> incoming_edges_;
};

// Validates and indexes a parsed model. Throws SemanticError (or the
// InvalidDistributionError subclass) on: undefined variable references,
// duplicate variable/objective/decision definitions, duplicate option names,
// cyclic variable definitions, objectives targeting undefined variables,
// empty decision blocks, and malformed distribution calls (non-constant
// arguments, wrong arity, out-of-range parameters).
SemanticModel analyze(ModelAst model);

// parse + analyze in one step
SemanticModel analyze_source(std::string_view source);

}  // namespace radar
