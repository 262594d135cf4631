#pragma once

#include <cstdint>
#include <string>

#include "radar/diag.hpp"

namespace radar {

enum class TokenKind : uint8_t {
  // literals / names
  Number,
  String,
  Ident,
  // keywords
  KwModel,
  KwObjective,
  KwMax,
  KwMin,
  KwEV,
  KwDecision,
  KwDeterministic,
  KwNormal,
  KwUniform,
  KwTriangular,
  KwExponential,
  // punctuation
  Semi,
  Eq,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Colon,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  End,
};

// Human-readable spelling used in diagnostics ("';'", "identifier", ...).
const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;    // identifier spelling or unescaped string contents
  double number = 0;   // valid iff kind == Number
  SourcePos pos;
};

bool is_distribution_keyword(TokenKind kind);

}  // namespace radar
