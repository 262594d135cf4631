#include "radar/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace radar {

std::string to_string(const SourcePos& pos) {
  if (!pos.known()) return "?";
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Ident: return "identifier";
    case TokenKind::KwModel: return "'Model'";
    case TokenKind::KwObjective: return "'Objective'";
    case TokenKind::KwMax: return "'Max'";
    case TokenKind::KwMin: return "'Min'";
    case TokenKind::KwEV: return "'EV'";
    case TokenKind::KwDecision: return "'decision'";
    case TokenKind::KwDeterministic: return "'deterministic'";
    case TokenKind::KwNormal: return "'normal'";
    case TokenKind::KwUniform: return "'uniform'";
    case TokenKind::KwTriangular: return "'triangular'";
    case TokenKind::KwExponential: return "'exponential'";
    case TokenKind::Semi: return "';'";
    case TokenKind::Eq: return "'='";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Comma: return "','";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Caret: return "'^'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

bool is_distribution_keyword(TokenKind kind) {
  switch (kind) {
    case TokenKind::KwDeterministic:
    case TokenKind::KwNormal:
    case TokenKind::KwUniform:
    case TokenKind::KwTriangular:
    case TokenKind::KwExponential:
      return true;
    default:
      return false;
  }
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"Model", TokenKind::KwModel},
      {"Objective", TokenKind::KwObjective},
      {"Max", TokenKind::KwMax},
      {"Min", TokenKind::KwMin},
      {"EV", TokenKind::KwEV},
      {"decision", TokenKind::KwDecision},
      {"deterministic", TokenKind::KwDeterministic},
      {"normal", TokenKind::KwNormal},
      {"uniform", TokenKind::KwUniform},
      {"triangular", TokenKind::KwTriangular},
      {"exponential", TokenKind::KwExponential},
  };
  return table;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourcePos pos{line_, column_};
      if (at_end()) {
        out.push_back({TokenKind::End, "", 0, pos});
        return out;
      }
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_number(pos));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_ident(pos));
      } else if (c == '"') {
        out.push_back(lex_string(pos));
      } else {
        out.push_back(lex_punct(pos));
      }
    }
  }

 private:
  bool at_end() const { return offset_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return offset_ + ahead < src_.size() ? src_[offset_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[offset_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      if (at_end()) return;
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token lex_number(SourcePos pos) {
    size_t start = offset_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.') {
      if (!std::isdigit(static_cast<unsigned char>(peek(1)))) {
        throw LexError("digit expected after decimal point", pos);
      }
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      size_t mark = offset_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        // not an exponent after all; but a dangling 'e' starts an identifier
        // glued to a number, which the grammar does not allow
        (void)mark;
        throw LexError("digit expected in exponent", pos);
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    std::string_view text = src_.substr(start, offset_ - start);
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw LexError("invalid number literal '" + std::string(text) + "'", pos);
    }
    return {TokenKind::Number, std::string(text), value, pos};
  }

  Token lex_ident(SourcePos pos) {
    size_t start = offset_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
    std::string_view text = src_.substr(start, offset_ - start);
    auto it = keyword_table().find(text);
    TokenKind kind = it != keyword_table().end() ? it->second : TokenKind::Ident;
    return {kind, std::string(text), 0, pos};
  }

  Token lex_string(SourcePos pos) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') {
        throw LexError("unterminated string literal", pos);
      }
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) throw LexError("unterminated string literal", pos);
        char esc = advance();
        switch (esc) {
          case '"': value.push_back('"'); break;
          case '\\': value.push_back('\\'); break;
          default:
            throw LexError(std::string("unknown escape '\\") + esc + "' in string", pos);
        }
      } else {
        value.push_back(c);
      }
    }
    return {TokenKind::String, std::move(value), 0, pos};
  }

  Token lex_punct(SourcePos pos) {
    char c = advance();
    TokenKind kind;
    switch (c) {
      case ';': kind = TokenKind::Semi; break;
      case '=': kind = TokenKind::Eq; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case '{': kind = TokenKind::LBrace; break;
      case '}': kind = TokenKind::RBrace; break;
      case ':': kind = TokenKind::Colon; break;
      case ',': kind = TokenKind::Comma; break;
      case '+': kind = TokenKind::Plus; break;
      case '-': kind = TokenKind::Minus; break;
      case '*': kind = TokenKind::Star; break;
      case '/': kind = TokenKind::Slash; break;
      case '^': kind = TokenKind::Caret; break;
      default:
        throw LexError(std::string("unexpected character '") + c + "'", pos);
    }
    return {kind, std::string(1, c), 0, pos};
  }

  std::string_view src_;
  size_t offset_ = 0;
  uint32_t line_ = 1;
  uint32_t column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

}  // namespace radar
