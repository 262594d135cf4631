#pragma once

#include <string_view>

#include "radar/ast.hpp"

namespace radar {

// Parses a complete model source into an AST. Throws LexError/ParseError.
ModelAst parse_model(std::string_view source);

// Parses a single expression (the whole input must be consumed). Used by
// tests and tooling.
ExprPtr parse_expression(std::string_view source);

}  // namespace radar
