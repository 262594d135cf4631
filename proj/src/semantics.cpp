#include "radar/semantics.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "radar/parser.hpp"
#include "radar/rng.hpp"

namespace radar {

size_t dist_arity(DistKind kind) {
  switch (kind) {
    case DistKind::Deterministic: return 1;
    case DistKind::Normal: return 2;
    case DistKind::Uniform: return 2;
    case DistKind::Triangular: return 3;
    case DistKind::Exponential: return 1;
  }
  return 0;
}

std::optional<int> SemanticModel::var_index(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  return it == var_index_.end() ? std::nullopt : std::optional<int>(it->second);
}

std::optional<int> SemanticModel::decision_index(std::string_view name) const {
  auto it = decision_index_.find(std::string(name));
  return it == decision_index_.end() ? std::nullopt : std::optional<int>(it->second);
}

std::optional<int> SemanticModel::objective_index(std::string_view name) const {
  for (size_t i = 0; i < objectives_.size(); ++i) {
    if (objectives_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

// Constant-folds a distribution argument; anything but literals and
// arithmetic over literals is rejected.
double fold_const(const Expr& expr, DistKind kind) {
  if (const auto* num = std::get_if<NumberLit>(&expr.node)) return num->value;
  if (const auto* neg = std::get_if<NegExpr>(&expr.node)) {
    return -fold_const(*neg->operand, kind);
  }
  if (const auto* bin = std::get_if<BinaryExpr>(&expr.node)) {
    double l = fold_const(*bin->lhs, kind);
    double r = fold_const(*bin->rhs, kind);
    switch (bin->op) {
      case BinOp::Add: return l + r;
      case BinOp::Sub: return l - r;
      case BinOp::Mul: return l * r;
      case BinOp::Div: return l / r;
      case BinOp::Pow: return std::pow(l, r);
    }
  }
  throw InvalidDistributionError(
      std::string(dist_kind_name(kind)) + " arguments must be constant expressions",
      expr.pos);
}

void validate_dist(const DistCall& call, SourcePos pos, std::vector<double>& out) {
  size_t arity = dist_arity(call.kind);
  if (call.args.size() != arity) {
    throw InvalidDistributionError(
        std::string(dist_kind_name(call.kind)) + " expects " + std::to_string(arity) +
            " argument(s), got " + std::to_string(call.args.size()),
        pos);
  }
  out.clear();
  for (const auto& arg : call.args) {
    double v = fold_const(*arg, call.kind);
    if (!std::isfinite(v)) {
      throw InvalidDistributionError(
          std::string(dist_kind_name(call.kind)) + " argument is not finite", arg->pos);
    }
    out.push_back(v);
  }
  switch (call.kind) {
    case DistKind::Deterministic:
      break;
    case DistKind::Normal:
      if (!(out[1] > 0)) {
        throw InvalidDistributionError("normal requires sd > 0", pos);
      }
      break;
    case DistKind::Uniform:
      if (!(out[0] < out[1])) {
        throw InvalidDistributionError("uniform requires lo < hi", pos);
      }
      break;
    case DistKind::Triangular:
      if (!(out[0] < out[2]) || !(out[0] <= out[1]) || !(out[1] <= out[2])) {
        throw InvalidDistributionError("triangular requires lo <= mode <= hi and lo < hi",
                                       pos);
      }
      break;
    case DistKind::Exponential:
      if (!(out[0] > 0)) {
        throw InvalidDistributionError("exponential requires rate > 0", pos);
      }
      break;
  }
}

}  // namespace

namespace detail {

class Analyzer {
 public:
  explicit Analyzer(ModelAst model) {
    out_.ast_ = std::move(model);
    out_.node_count_ = node_count(out_.ast_);
  }

  SemanticModel run() {
    collect_definitions();
    for (size_t slot = 0; slot < out_.vars_.size(); ++slot) {
      check_expr(*out_.vars_[slot].def);
    }
    resolve_objectives();
    check_cycles();
    collect_parameters();
    collect_dependency_edges();
    return std::move(out_);
  }

 private:
  void collect_definitions() {
    for (const auto& stmt : out_.ast_.statements) {
      if (const auto* obj = std::get_if<ObjectiveDecl>(&stmt)) {
        for (const auto& seen : out_.objectives_) {
          if (seen.name == obj->name) {
            throw SemanticError("duplicate objective '" + obj->name + "'", obj->pos);
          }
        }
        ObjectiveInfo info;
        info.name = obj->name;
        info.direction = obj->direction;
        info.target = obj->target;
        info.pos = obj->pos;
        out_.objectives_.push_back(std::move(info));
      } else {
        const auto& def = std::get<VarDef>(stmt);
        if (!out_.var_index_.emplace(def.name, static_cast<int>(out_.vars_.size())).second) {
          throw SemanticError("variable '" + def.name + "' is defined twice", def.pos);
        }
        out_.vars_.push_back(VarInfo{def.name, def.value.get(), def.pos});
      }
    }
  }

  // one pass over an expression tree: reference resolution, decision
  // collection (DFS source order) and distribution validation
  void check_expr(const Expr& expr) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
          } else if constexpr (std::is_same_v<T, VarRef>) {
            if (!out_.var_index_.count(node.name)) {
              throw SemanticError("undefined variable '" + node.name + "'", expr.pos);
            }
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            check_expr(*node.lhs);
            check_expr(*node.rhs);
          } else if constexpr (std::is_same_v<T, NegExpr>) {
            check_expr(*node.operand);
          } else if constexpr (std::is_same_v<T, DistCall>) {
            std::vector<double> args;
            validate_dist(node, expr.pos, args);
          } else {
            check_decision(node, expr.pos);
          }
        },
        expr.node);
  }

  void check_decision(const DecisionExpr& node, SourcePos pos) {
    if (node.options.empty()) {
      throw SemanticError("decision '" + node.name + "' has no options", pos);
    }
    if (node.options.size() > 127) {
      throw SemanticError("decision '" + node.name + "' has more than 127 options", pos);
    }
    if (!out_.decision_index_.emplace(node.name, static_cast<int>(out_.decisions_.size()))
             .second) {
      throw SemanticError("duplicate decision '" + node.name + "'", pos);
    }
    Decision dec;
    dec.name = node.name;
    dec.pos = pos;
    std::unordered_set<std::string> seen;
    for (const auto& opt : node.options) {
      if (!seen.insert(opt.name).second) {
        throw SemanticError(
            "decision '" + node.name + "' has duplicate option '" + opt.name + "'", pos);
      }
      dec.options.push_back(opt.name);
    }
    out_.decisions_.push_back(std::move(dec));
    for (const auto& opt : node.options) check_expr(*opt.body);
  }

  void resolve_objectives() {
    for (auto& obj : out_.objectives_) {
      auto it = out_.var_index_.find(obj.target);
      if (it == out_.var_index_.end()) {
        throw SemanticError(
            "objective '" + obj.name + "' targets undefined variable '" + obj.target + "'",
            obj.pos);
      }
      obj.target_slot = it->second;
    }
  }

  void gather_refs(const Expr& expr, std::vector<int>& refs,
                   std::unordered_set<int>& seen) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            int slot = out_.var_index_.at(node.name);
            if (seen.insert(slot).second) refs.push_back(slot);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            gather_refs(*node.lhs, refs, seen);
            gather_refs(*node.rhs, refs, seen);
          } else if constexpr (std::is_same_v<T, NegExpr>) {
            gather_refs(*node.operand, refs, seen);
          } else if constexpr (std::is_same_v<T, DistCall>) {
            // arguments are constant expressions; nothing to gather
          } else if constexpr (std::is_same_v<T, DecisionExpr>) {
            for (const auto& opt : node.options) gather_refs(*opt.body, refs, seen);
          }
        },
        expr.node);
  }

  void check_cycles() {
    size_t n = out_.vars_.size();
    std::vector<std::vector<int>> adj(n);
    for (size_t slot = 0; slot < n; ++slot) {
      std::unordered_set<int> seen;
      gather_refs(*out_.vars_[slot].def, adj[slot], seen);
    }
    // iterative three-color DFS; definition chains can be long, so no
    // recursion here
    std::vector<uint8_t> color(n, 0);
    std::vector<int> path;
    for (size_t root = 0; root < n; ++root) {
      if (color[root]) continue;
      std::vector<std::pair<int, size_t>> stack{{static_cast<int>(root), 0}};
      color[root] = 1;
      path.assign(1, static_cast<int>(root));
      while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < adj[v].size()) {
          int w = adj[v][next++];
          if (color[w] == 1) {
            std::string msg = "cyclic definition: ";
            size_t start = 0;
            while (path[start] != w) ++start;
            for (size_t i = start; i < path.size(); ++i) {
              msg += out_.vars_[path[i]].name + " -> ";
            }
            msg += out_.vars_[w].name;
            throw SemanticError(msg, out_.vars_[w].pos);
          }
          if (color[w] == 0) {
            color[w] = 1;
            stack.emplace_back(w, 0);
            path.push_back(w);
          }
        } else {
          color[v] = 2;
          stack.pop_back();
          path.pop_back();
        }
      }
    }
  }

  void collect_parameters() {
    out_.var_param_.assign(out_.vars_.size(), -1);
    for (size_t slot = 0; slot < out_.vars_.size(); ++slot) {
      const auto* call = std::get_if<DistCall>(&out_.vars_[slot].def->node);
      if (!call) continue;
      Parameter p;
      p.name = out_.vars_[slot].name;
      p.var_slot = static_cast<int>(slot);
      p.pos = out_.vars_[slot].pos;
      std::vector<double> args;
      validate_dist(*call, out_.vars_[slot].def->pos, args);
      p.dist.kind = call->kind;
      p.dist.a = args.size() > 0 ? args[0] : 0;
      p.dist.b = args.size() > 1 ? args[1] : 0;
      p.dist.c = args.size() > 2 ? args[2] : 0;
      p.stream_id = rng::fnv1a("param:" + p.name);
      out_.var_param_[slot] = static_cast<int>(out_.parameters_.size());
      out_.parameters_.push_back(std::move(p));
    }
  }

  // Walks one option body, following variable references, and records which
  // decision blocks it reaches. The walk stops at nested decision blocks:
  // their own option bodies contribute edges for the nested decision, not
  // for the outer one.
  void walk_option(const Expr& expr, int outer, int option,
                   std::unordered_set<int>& visited_vars,
                   std::set<int>& inners) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            int slot = out_.var_index_.at(node.name);
            if (visited_vars.insert(slot).second) {
              walk_option(*out_.vars_[slot].def, outer, option, visited_vars, inners);
            }
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            walk_option(*node.lhs, outer, option, visited_vars, inners);
            walk_option(*node.rhs, outer, option, visited_vars, inners);
          } else if constexpr (std::is_same_v<T, NegExpr>) {
            walk_option(*node.operand, outer, option, visited_vars, inners);
          } else if constexpr (std::is_same_v<T, DecisionExpr>) {
            inners.insert(out_.decision_index_.at(node.name));
          }
        },
        expr.node);
  }

  void collect_dependency_edges() {
    // locate each decision's syntax node, in DFS order again
    std::vector<const DecisionExpr*> sites(out_.decisions_.size(), nullptr);
    for (const auto& var : out_.vars_) locate_decisions(*var.def, sites);

    for (size_t d = 0; d < out_.decisions_.size(); ++d) {
      const DecisionExpr* site = sites[d];
      for (size_t o = 0; o < site->options.size(); ++o) {
        std::unordered_set<int> visited_vars;
        std::set<int> inners;
        walk_option(*site->options[o].body, static_cast<int>(d), static_cast<int>(o),
                    visited_vars, inners);
        for (int inner : inners) {
          out_.dependency_edges_.push_back(
              DependencyEdge{static_cast<int>(d), static_cast<int>(o), inner});
        }
      }
    }
    out_.incoming_edges_.assign(out_.decisions_.size(), 0);
    for (const auto& e : out_.dependency_edges_) ++out_.incoming_edges_[e.inner];
  }

  void locate_decisions(const Expr& expr, std::vector<const DecisionExpr*>& sites) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, BinaryExpr>) {
            locate_decisions(*node.lhs, sites);
            locate_decisions(*node.rhs, sites);
          } else if constexpr (std::is_same_v<T, NegExpr>) {
            locate_decisions(*node.operand, sites);
          } else if constexpr (std::is_same_v<T, DecisionExpr>) {
            sites[static_cast<size_t>(out_.decision_index_.at(node.name))] = &node;
            for (const auto& opt : node.options) locate_decisions(*opt.body, sites);
          }
        },
        expr.node);
  }

  SemanticModel out_;
};

}  // namespace detail

SemanticModel analyze(ModelAst model) {
  return detail::Analyzer(std::move(model)).run();
}

SemanticModel analyze_source(std::string_view source) {
  return analyze(parse_model(source));
}

}  // namespace radar
