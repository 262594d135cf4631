#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "radar/diag.hpp"

namespace radar {

enum class BinOp : uint8_t { Add, Sub, Mul, Div, Pow };
enum class DistKind : uint8_t { Deterministic, Normal, Uniform, Triangular, Exponential };
enum class Direction : uint8_t { Max, Min };

const char* bin_op_symbol(BinOp op);
const char* dist_kind_name(DistKind kind);
const char* direction_name(Direction dir);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NumberLit {
  double value;
};

struct VarRef {
  std::string name;
};

struct BinaryExpr {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct NegExpr {
  ExprPtr operand;
};

struct DistCall {
  DistKind kind;
  std::vector<ExprPtr> args;
};

struct DecisionOption {
  std::string name;
  ExprPtr body;
};

struct DecisionExpr {
  std::string name;
  std::vector<DecisionOption> options;
};

struct Expr {
  std::variant<NumberLit, VarRef, BinaryExpr, NegExpr, DistCall, DecisionExpr> node;
  SourcePos pos;
};

struct ObjectiveDecl {
  std::string name;
  Direction direction;
  std::string target;  // variable whose expected value is optimized
  SourcePos pos;
};

struct VarDef {
  std::string name;
  ExprPtr value;
  SourcePos pos;
};

using Statement = std::variant<ObjectiveDecl, VarDef>;

struct ModelAst {
  std::string model_name;
  std::vector<Statement> statements;
  SourcePos pos;
};

ExprPtr clone(const Expr& expr);
ModelAst clone(const ModelAst& model);

// Structural equality; source positions are ignored, numbers compare bitwise
// as doubles (the printer emits shortest round-trip literals, so print/parse
// preserves this notion of equality).
bool equal(const Expr& a, const Expr& b);
bool equal(const ModelAst& a, const ModelAst& b);

// Number of AST nodes: 1 for the model, 1 per statement, 1 per expression
// node (decision blocks count as one node plus their option bodies).
size_t node_count(const ModelAst& model);
size_t node_count(const Expr& expr);

// Deterministic canonical rendering. Parses back to a structurally equal
// model: parentheses are inserted only where the grammar requires them.
std::string pretty_print(const ModelAst& model);
std::string pretty_print(const Expr& expr);

// Shortest decimal rendering that round-trips through the lexer.
std::string format_number(double value);

}  // namespace radar
