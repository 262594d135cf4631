#include "radar/generator.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "radar/rng.hpp"
#include "radar/semantics.hpp"

namespace radar {

namespace {

ExprPtr num(double v) {
  return std::make_unique<Expr>(Expr{NumberLit{v}, SourcePos{}});
}

ExprPtr ref(std::string name) {
  return std::make_unique<Expr>(Expr{VarRef{std::move(name)}, SourcePos{}});
}

ExprPtr bin(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_unique<Expr>(Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}, SourcePos{}});
}

// Two-decimal values keep the generated sources readable without affecting
// round-trip fidelity (the printer is exact for any double).
double round2(double v) { return std::round(v * 100.0) / 100.0; }

class Generator {
 public:
  Generator(const GeneratorConfig& config)
      : cfg_(config), rng_(rng::mix64(config.seed ^ rng::fnv1a("model-gen"))) {}

  ModelAst build() {
    plan_dependencies();
    for (int j = 0; j < cfg_.decisions; ++j) build_decision(j);
    for (int i = 0; i < cfg_.objectives; ++i) build_objective(i);
    pad_variables();

    ModelAst model;
    model.model_name = "Synth_" + std::to_string(cfg_.seed);
    for (int i = 0; i < cfg_.objectives; ++i) {
      Direction dir = i == 0 || rng_.next_below(2) == 0 ? Direction::Max : Direction::Min;
      model.statements.push_back(
          ObjectiveDecl{"O_" + std::to_string(i + 1), dir, "NB_" + std::to_string(i + 1),
                        SourcePos{}});
    }
    for (auto& def : params_) model.statements.push_back(std::move(def));
    for (auto& def : decision_defs_) model.statements.push_back(std::move(def));
    for (auto& def : body_) model.statements.push_back(std::move(def));
    return model;
  }

 private:
  // Each dependent decision is nested (by reference) inside one option body
  // of one earlier decision, producing a dependency forest. When requested
  // and possible, at least one edge is guaranteed.
  void plan_dependencies() {
    parent_of_.assign(static_cast<size_t>(cfg_.decisions), -1);
    parent_option_.assign(static_cast<size_t>(cfg_.decisions), -1);
    if (!cfg_.with_dependencies || cfg_.decisions < 2) return;
    bool any = false;
    for (int j = 1; j < cfg_.decisions; ++j) {
      if (rng_.next_unit() < 0.35) {
        parent_of_[static_cast<size_t>(j)] = static_cast<int>(rng_.next_below(static_cast<uint64_t>(j)));
        parent_option_[static_cast<size_t>(j)] =
            static_cast<int>(rng_.next_below(static_cast<uint64_t>(cfg_.options_per_decision)));
        any = true;
      }
    }
    if (!any) {
      parent_of_[1] = 0;
      parent_option_[1] = static_cast<int>(
          rng_.next_below(static_cast<uint64_t>(cfg_.options_per_decision)));
    }
  }

  std::string fresh_param() {
    std::string name = "P_" + std::to_string(params_.size() + 1);
    params_.push_back(VarDef{name, random_dist(), SourcePos{}});
    return name;
  }

  ExprPtr random_dist() {
    double pick = rng_.next_unit();
    DistKind kind = pick < 0.35   ? DistKind::Normal
                    : pick < 0.60 ? DistKind::Uniform
                    : pick < 0.75 ? DistKind::Triangular
                    : pick < 0.85 ? DistKind::Exponential
                                  : DistKind::Deterministic;
    return dist_call(kind);
  }

  // Argument ranges are chosen so every draw stays within a few orders of
  // magnitude of 1: products of tree leaves cannot overflow and no transform
  // can produce a non-finite value.
  ExprPtr dist_call(DistKind kind) {
    std::vector<ExprPtr> args;
    switch (kind) {
      case DistKind::Normal: {
        double mu = round2(1 + 99 * rng_.next_unit());
        double sd = round2(mu * (0.1 + 0.2 * rng_.next_unit()));
        args.push_back(num(mu));
        args.push_back(num(sd));
        break;
      }
      case DistKind::Uniform: {
        double lo = round2(1 + 49 * rng_.next_unit());
        double hi = round2(lo + 1 + 49 * rng_.next_unit());
        args.push_back(num(lo));
        args.push_back(num(hi));
        break;
      }
      case DistKind::Triangular: {
        double lo = round2(1 + 49 * rng_.next_unit());
        double mode = round2(lo + 1 + 29 * rng_.next_unit());
        double hi = round2(mode + 1 + 29 * rng_.next_unit());
        args.push_back(num(lo));
        args.push_back(num(mode));
        args.push_back(num(hi));
        break;
      }
      case DistKind::Exponential:
        args.push_back(num(round2(0.05 + 1.95 * rng_.next_unit())));
        break;
      case DistKind::Deterministic:
        args.push_back(num(round2(1 + 99 * rng_.next_unit())));
        break;
    }
    return std::make_unique<Expr>(Expr{DistCall{kind, std::move(args)}, SourcePos{}});
  }

  // Option bodies are cheap on purpose: a distinct constant, sometimes plus
  // a weighted parameter, so large design spaces stay simulable. A dependent
  // decision's variable is added to exactly one option body of its parent.
  void build_decision(int j) {
    std::vector<DecisionOption> options;
    options.reserve(static_cast<size_t>(cfg_.options_per_decision));
    for (int o = 0; o < cfg_.options_per_decision; ++o) {
      ExprPtr body = num(round2((o + 1) * (5 + 20 * rng_.next_unit())));
      if (rng_.next_unit() < 0.30) {
        double w = round2(0.5 + 2.0 * rng_.next_unit());
        body = bin(BinOp::Add, std::move(body),
                   bin(BinOp::Mul, num(w), ref(fresh_param())));
      }
      for (int c = j + 1; c < cfg_.decisions; ++c) {
        if (parent_of_[static_cast<size_t>(c)] == j &&
            parent_option_[static_cast<size_t>(c)] == o) {
          body = bin(BinOp::Add, std::move(body), ref("DV_" + std::to_string(c + 1)));
        }
      }
      options.push_back(DecisionOption{"o_" + std::to_string(o + 1), std::move(body)});
    }
    auto block = std::make_unique<Expr>(
        Expr{DecisionExpr{"D_" + std::to_string(j + 1), std::move(options)}, SourcePos{}});
    decision_defs_.push_back(
        VarDef{"DV_" + std::to_string(j + 1), std::move(block), SourcePos{}});
  }

  // A small random (+, -, *) tree over fresh parameters and literals.
  ExprPtr random_tree(int leaves) {
    if (leaves <= 1) {
      if (rng_.next_unit() < 0.6) return ref(fresh_param());
      return num(round2(1 + 99 * rng_.next_unit()));
    }
    int left = 1 + static_cast<int>(rng_.next_below(static_cast<uint64_t>(leaves - 1)));
    double pick = rng_.next_unit();
    BinOp op = pick < 0.5 ? BinOp::Add : pick < 0.8 ? BinOp::Sub : BinOp::Mul;
    return bin(op, random_tree(left), random_tree(leaves - left));
  }

  void build_objective(int i) {
    std::string tag = std::to_string(i + 1);
    body_.push_back(VarDef{"T_" + tag, random_tree(2 + static_cast<int>(rng_.next_below(3))),
                           SourcePos{}});

    // Every top-level decision contributes to every objective. Secondary
    // objectives flip the sign of exactly two decisions' contributions:
    // enough conflict for a non-degenerate Pareto front, small enough that
    // the front cannot blow up combinatorially.
    std::vector<int> tops;
    for (int j = 0; j < cfg_.decisions; ++j) {
      if (parent_of_[static_cast<size_t>(j)] < 0) tops.push_back(j);
    }
    int flip_a = -1, flip_b = -1;
    if (i > 0 && tops.size() > 1) {
      flip_a = tops[1 + rng_.next_below(tops.size() - 1)];
      if (tops.size() > 2) {
        do {
          flip_b = tops[1 + rng_.next_below(tops.size() - 1)];
        } while (flip_b == flip_a);
      }
    }
    ExprPtr agg;
    for (int j : tops) {
      double w = round2(0.5 + 2.0 * rng_.next_unit());
      ExprPtr term = bin(BinOp::Mul, num(w), ref("DV_" + std::to_string(j + 1)));
      if (!agg) {
        agg = std::move(term);
      } else {
        bool minus = j == flip_a || j == flip_b;
        agg = bin(minus ? BinOp::Sub : BinOp::Add, std::move(agg), std::move(term));
      }
    }
    if (!agg) agg = num(0);
    body_.push_back(VarDef{"AGG_" + tag, std::move(agg), SourcePos{}});
    chain_tail_.push_back("T_" + tag);
  }

  // Pass-through intermediates inflate the variable count (and AST size m)
  // without touching the design space; they sit on the objective path so
  // nothing in the model is dead code.
  void pad_variables() {
    long base = static_cast<long>(params_.size() + decision_defs_.size() + body_.size()) +
                cfg_.objectives;  // the NB_* definitions below
    long deficit = cfg_.min_variables - base;
    for (int i = 0; i < cfg_.objectives; ++i) {
      long links = deficit <= 0 ? 0
                                : deficit / cfg_.objectives +
                                      (i < deficit % cfg_.objectives ? 1 : 0);
      std::string tag = std::to_string(i + 1);
      for (long k = 0; k < links; ++k) {
        std::string name = "C_" + tag + "_" + std::to_string(k + 1);
        body_.push_back(VarDef{name, ref(chain_tail_[static_cast<size_t>(i)]), SourcePos{}});
        chain_tail_[static_cast<size_t>(i)] = name;
      }
      body_.push_back(VarDef{"NB_" + tag,
                             bin(BinOp::Add, ref(chain_tail_[static_cast<size_t>(i)]),
                                 ref("AGG_" + tag)),
                             SourcePos{}});
    }
  }

  GeneratorConfig cfg_;
  rng::SplitMix64 rng_;
  std::vector<int> parent_of_;
  std::vector<int> parent_option_;
  std::vector<VarDef> params_;
  std::vector<VarDef> decision_defs_;
  std::vector<VarDef> body_;
  std::vector<std::string> chain_tail_;
};

}  // namespace

ModelAst generate(const GeneratorConfig& config) {
  if (config.objectives < 1 || config.objectives > 16) {
    throw ConfigError("objectives must be in 1..16, got " + std::to_string(config.objectives));
  }
  if (config.decisions < 0 || config.decisions > 32) {
    throw ConfigError("decisions must be in 0..32, got " + std::to_string(config.decisions));
  }
  if (config.decisions > 0 &&
      (config.options_per_decision < 1 || config.options_per_decision > 16)) {
    throw ConfigError("options per decision must be in 1..16, got " +
                      std::to_string(config.options_per_decision));
  }
  if (config.min_variables < 0 || config.min_variables > 1'000'000) {
    throw ConfigError("min_variables must be in 0..1000000, got " +
                      std::to_string(config.min_variables));
  }
  return Generator(config).build();
}

std::vector<SuiteEntry> generate_suite(std::span<const GeneratorConfig> plan) {
  std::vector<SuiteEntry> out;
  out.reserve(plan.size());
  for (const auto& config : plan) {
    SuiteEntry entry{config, generate(config), {}};
    SemanticModel analyzed = analyze(clone(entry.model));
    entry.size = size_without_enumeration(analyzed);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace radar
