#include "radar/ast.hpp"

#include <bit>
#include <charconv>

namespace radar {

const char* bin_op_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Pow: return "^";
  }
  return "?";
}

const char* dist_kind_name(DistKind kind) {
  switch (kind) {
    case DistKind::Deterministic: return "deterministic";
    case DistKind::Normal: return "normal";
    case DistKind::Uniform: return "uniform";
    case DistKind::Triangular: return "triangular";
    case DistKind::Exponential: return "exponential";
  }
  return "?";
}

const char* direction_name(Direction dir) {
  return dir == Direction::Max ? "Max" : "Min";
}

ExprPtr clone(const Expr& expr) {
  auto out = std::make_unique<Expr>();
  out->pos = expr.pos;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberLit> || std::is_same_v<T, VarRef>) {
          out->node = node;
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          out->node = BinaryExpr{node.op, clone(*node.lhs), clone(*node.rhs)};
        } else if constexpr (std::is_same_v<T, NegExpr>) {
          out->node = NegExpr{clone(*node.operand)};
        } else if constexpr (std::is_same_v<T, DistCall>) {
          DistCall call{node.kind, {}};
          call.args.reserve(node.args.size());
          for (const auto& arg : node.args) call.args.push_back(clone(*arg));
          out->node = std::move(call);
        } else {
          DecisionExpr dec{node.name, {}};
          dec.options.reserve(node.options.size());
          for (const auto& opt : node.options) {
            dec.options.push_back(DecisionOption{opt.name, clone(*opt.body)});
          }
          out->node = std::move(dec);
        }
      },
      expr.node);
  return out;
}

ModelAst clone(const ModelAst& model) {
  ModelAst out;
  out.model_name = model.model_name;
  out.pos = model.pos;
  out.statements.reserve(model.statements.size());
  for (const auto& stmt : model.statements) {
    if (const auto* obj = std::get_if<ObjectiveDecl>(&stmt)) {
      out.statements.push_back(*obj);
    } else {
      const auto& def = std::get<VarDef>(stmt);
      out.statements.push_back(VarDef{def.name, clone(*def.value), def.pos});
    }
  }
  return out;
}

namespace {

bool same_number(double a, double b) {
  return std::bit_cast<uint64_t>(a) == std::bit_cast<uint64_t>(b);
}

}  // namespace

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NumberLit>) {
          return same_number(na.value, nb.value);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return na.op == nb.op && equal(*na.lhs, *nb.lhs) && equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, NegExpr>) {
          return equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, DistCall>) {
          if (na.kind != nb.kind || na.args.size() != nb.args.size()) return false;
          for (size_t i = 0; i < na.args.size(); ++i) {
            if (!equal(*na.args[i], *nb.args[i])) return false;
          }
          return true;
        } else {
          if (na.name != nb.name || na.options.size() != nb.options.size()) return false;
          for (size_t i = 0; i < na.options.size(); ++i) {
            if (na.options[i].name != nb.options[i].name) return false;
            if (!equal(*na.options[i].body, *nb.options[i].body)) return false;
          }
          return true;
        }
      },
      a.node);
}

bool equal(const ModelAst& a, const ModelAst& b) {
  if (a.model_name != b.model_name) return false;
  if (a.statements.size() != b.statements.size()) return false;
  for (size_t i = 0; i < a.statements.size(); ++i) {
    const auto& sa = a.statements[i];
    const auto& sb = b.statements[i];
    if (sa.index() != sb.index()) return false;
    if (const auto* oa = std::get_if<ObjectiveDecl>(&sa)) {
      const auto& ob = std::get<ObjectiveDecl>(sb);
      if (oa->name != ob.name || oa->direction != ob.direction || oa->target != ob.target) {
        return false;
      }
    } else {
      const auto& da = std::get<VarDef>(sa);
      const auto& db = std::get<VarDef>(sb);
      if (da.name != db.name || !equal(*da.value, *db.value)) return false;
    }
  }
  return true;
}

size_t node_count(const Expr& expr) {
  return std::visit(
      [&](const auto& node) -> size_t {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberLit> || std::is_same_v<T, VarRef>) {
          return 1;
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return 1 + node_count(*node.lhs) + node_count(*node.rhs);
        } else if constexpr (std::is_same_v<T, NegExpr>) {
          return 1 + node_count(*node.operand);
        } else if constexpr (std::is_same_v<T, DistCall>) {
          size_t n = 1;
          for (const auto& arg : node.args) n += node_count(*arg);
          return n;
        } else {
          size_t n = 1;
          for (const auto& opt : node.options) n += node_count(*opt.body);
          return n;
        }
      },
      expr.node);
}

size_t node_count(const ModelAst& model) {
  size_t n = 1;
  for (const auto& stmt : model.statements) {
    n += 1;
    if (const auto* def = std::get_if<VarDef>(&stmt)) n += node_count(*def->value);
  }
  return n;
}

std::string format_number(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

// Grammar levels: additive(0) < multiplicative(1) < power(2) < unary(3) <
// primary(4). A child prints unparenthesized iff its own level is at least
// the minimum level its slot accepts.
int expr_level(const Expr& expr) {
  return std::visit(
      [](const auto& node) -> int {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, BinaryExpr>) {
          switch (node.op) {
            case BinOp::Add:
            case BinOp::Sub: return 0;
            case BinOp::Mul:
            case BinOp::Div: return 1;
            case BinOp::Pow: return 2;
          }
          return 0;
        } else if constexpr (std::is_same_v<T, NegExpr>) {
          return 3;
        } else {
          return 4;
        }
      },
      expr.node);
}

struct Printer {
  std::string out;
  int indent = 0;

  void newline() {
    out.push_back('\n');
    out.append(static_cast<size_t>(indent) * 2, ' ');
  }

  void escaped_string(const std::string& s) {
    out.push_back('"');
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out.push_back('"');
  }

  void expr(const Expr& e, int min_level) {
    bool parens = expr_level(e) < min_level;
    if (parens) out.push_back('(');
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
            out += format_number(node.value);
          } else if constexpr (std::is_same_v<T, VarRef>) {
            out += node.name;
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            binary(node);
          } else if constexpr (std::is_same_v<T, NegExpr>) {
            out.push_back('-');
            expr(*node.operand, 4);
          } else if constexpr (std::is_same_v<T, DistCall>) {
            out += dist_kind_name(node.kind);
            out.push_back('(');
            for (size_t i = 0; i < node.args.size(); ++i) {
              if (i) out += ", ";
              expr(*node.args[i], 0);
            }
            out.push_back(')');
          } else {
            decision(node);
          }
        },
        e.node);
    if (parens) out.push_back(')');
  }

  void binary(const BinaryExpr& node) {
    // left-associative operators accept their own level on the left and one
    // level tighter on the right; '^' is right-associative and accepts a
    // unary on the left per the grammar
    int left_min, right_min;
    switch (node.op) {
      case BinOp::Add:
      case BinOp::Sub: left_min = 0; right_min = 1; break;
      case BinOp::Mul:
      case BinOp::Div: left_min = 1; right_min = 2; break;
      default: left_min = 3; right_min = 2; break;
    }
    expr(*node.lhs, left_min);
    out.push_back(' ');
    out += bin_op_symbol(node.op);
    out.push_back(' ');
    expr(*node.rhs, right_min);
  }

  void decision(const DecisionExpr& node) {
    out += "decision(";
    escaped_string(node.name);
    out += ") {";
    ++indent;
    for (const auto& opt : node.options) {
      newline();
      escaped_string(opt.name);
      out += ": ";
      expr(*opt.body, 0);
      out.push_back(';');
    }
    --indent;
    newline();
    out.push_back('}');
  }
};

}  // namespace

std::string pretty_print(const Expr& expr) {
  Printer p;
  p.expr(expr, 0);
  return p.out;
}

std::string pretty_print(const ModelAst& model) {
  Printer p;
  p.out += "Model " + model.model_name + ";\n";
  for (const auto& stmt : model.statements) {
    if (const auto* obj = std::get_if<ObjectiveDecl>(&stmt)) {
      p.out += "Objective ";
      p.out += direction_name(obj->direction);
      p.out += " " + obj->name + " = EV(" + obj->target + ");";
    } else {
      const auto& def = std::get<VarDef>(stmt);
      p.out += def.name + " = ";
      p.expr(*def.value, 0);
      p.out.push_back(';');
    }
    p.out.push_back('\n');
  }
  return p.out;
}

}  // namespace radar
