#include "radar/parser.hpp"

#include <initializer_list>

#include "radar/lexer.hpp"

namespace radar {

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ModelAst model() {
    ModelAst out;
    out.pos = peek().pos;
    expect(TokenKind::KwModel);
    out.model_name = expect(TokenKind::Ident).text;
    expect(TokenKind::Semi);
    while (peek().kind != TokenKind::End) {
      out.statements.push_back(statement());
    }
    return out;
  }

  ExprPtr expression_only() {
    ExprPtr e = expr();
    expect(TokenKind::End);
    return e;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool match(TokenKind kind) {
    if (peek().kind != kind) return false;
    advance();
    return true;
  }

  const Token& expect(TokenKind kind) {
    if (peek().kind != kind) fail({token_kind_name(kind)});
    return advance();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& tok = peek();
    std::string msg = "unexpected ";
    msg += token_kind_name(tok.kind);
    if (tok.kind == TokenKind::Ident || tok.kind == TokenKind::Number) {
      msg += " '" + tok.text + "'";
    }
    msg += "; expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(msg, tok.pos, std::move(expected));
  }

  Statement statement() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::KwObjective) return objective();
    if (tok.kind == TokenKind::Ident) return vardef();
    fail({token_kind_name(TokenKind::KwObjective), "identifier"});
  }

  ObjectiveDecl objective() {
    ObjectiveDecl decl;
    decl.pos = peek().pos;
    expect(TokenKind::KwObjective);
    if (match(TokenKind::KwMax)) {
      decl.direction = Direction::Max;
    } else if (match(TokenKind::KwMin)) {
      decl.direction = Direction::Min;
    } else {
      fail({token_kind_name(TokenKind::KwMax), token_kind_name(TokenKind::KwMin)});
    }
    decl.name = expect(TokenKind::Ident).text;
    expect(TokenKind::Eq);
    expect(TokenKind::KwEV);
    expect(TokenKind::LParen);
    decl.target = expect(TokenKind::Ident).text;
    expect(TokenKind::RParen);
    expect(TokenKind::Semi);
    return decl;
  }

  VarDef vardef() {
    VarDef def;
    def.pos = peek().pos;
    def.name = expect(TokenKind::Ident).text;
    expect(TokenKind::Eq);
    def.value = expr();
    expect(TokenKind::Semi);
    return def;
  }

  ExprPtr expr() { return additive(); }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    for (;;) {
      SourcePos pos = peek().pos;
      BinOp op;
      if (match(TokenKind::Plus)) {
        op = BinOp::Add;
      } else if (match(TokenKind::Minus)) {
        op = BinOp::Sub;
      } else {
        return lhs;
      }
      ExprPtr rhs = multiplicative();
      auto node = std::make_unique<Expr>();
      node->pos = pos;
      node->node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
      lhs = std::move(node);
    }
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = power();
    for (;;) {
      SourcePos pos = peek().pos;
      BinOp op;
      if (match(TokenKind::Star)) {
        op = BinOp::Mul;
      } else if (match(TokenKind::Slash)) {
        op = BinOp::Div;
      } else {
        return lhs;
      }
      ExprPtr rhs = power();
      auto node = std::make_unique<Expr>();
      node->pos = pos;
      node->node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
      lhs = std::move(node);
    }
  }

  // '^' is right-associative and binds tighter than unary minus on its right
  ExprPtr power() {
    ExprPtr base = unary();
    SourcePos pos = peek().pos;
    if (!match(TokenKind::Caret)) return base;
    ExprPtr exponent = power();
    auto node = std::make_unique<Expr>();
    node->pos = pos;
    node->node = BinaryExpr{BinOp::Pow, std::move(base), std::move(exponent)};
    return node;
  }

  ExprPtr unary() {
    SourcePos pos = peek().pos;
    if (match(TokenKind::Minus)) {
      auto node = std::make_unique<Expr>();
      node->pos = pos;
      node->node = NegExpr{primary()};
      return node;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::Number: {
        auto node = std::make_unique<Expr>();
        node->pos = tok.pos;
        node->node = NumberLit{advance().number};
        return node;
      }
      case TokenKind::Ident: {
        auto node = std::make_unique<Expr>();
        node->pos = tok.pos;
        node->node = VarRef{advance().text};
        return node;
      }
      case TokenKind::LParen: {
        advance();
        ExprPtr inner = expr();
        expect(TokenKind::RParen);
        return inner;
      }
      case TokenKind::KwDecision:
        return decision();
      default:
        if (is_distribution_keyword(tok.kind)) return distcall();
        fail({"number", "identifier", "'('", "'-'", "'decision'", "distribution"});
    }
  }

  ExprPtr distcall() {
    const Token& tok = advance();
    DistKind kind;
    switch (tok.kind) {
      case TokenKind::KwDeterministic: kind = DistKind::Deterministic; break;
      case TokenKind::KwNormal: kind = DistKind::Normal; break;
      case TokenKind::KwUniform: kind = DistKind::Uniform; break;
      case TokenKind::KwTriangular: kind = DistKind::Triangular; break;
      default: kind = DistKind::Exponential; break;
    }
    auto node = std::make_unique<Expr>();
    node->pos = tok.pos;
    DistCall call{kind, {}};
    expect(TokenKind::LParen);
    call.args.push_back(expr());
    while (match(TokenKind::Comma)) call.args.push_back(expr());
    expect(TokenKind::RParen);
    node->node = std::move(call);
    return node;
  }

  ExprPtr decision() {
    const Token& tok = expect(TokenKind::KwDecision);
    auto node = std::make_unique<Expr>();
    node->pos = tok.pos;
    DecisionExpr dec;
    expect(TokenKind::LParen);
    dec.name = expect(TokenKind::String).text;
    expect(TokenKind::RParen);
    expect(TokenKind::LBrace);
    while (peek().kind == TokenKind::String) {
      DecisionOption opt;
      opt.name = advance().text;
      expect(TokenKind::Colon);
      opt.body = expr();
      expect(TokenKind::Semi);
      dec.options.push_back(std::move(opt));
    }
    expect(TokenKind::RBrace);
    node->node = std::move(dec);
    return node;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace

ModelAst parse_model(std::string_view source) {
  return Parser(tokenize(source)).model();
}

ExprPtr parse_expression(std::string_view source) {
  return Parser(tokenize(source)).expression_only();
}

}  // namespace radar
