#include "expr_parser.hpp"

#include <cctype>

#include "errors.hpp"

namespace coiso {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

namespace {

struct Token {
  enum class Kind { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t offset;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (true) {
      while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
      if (i >= text_.size()) {
        out.push_back({Token::Kind::End, i, ""});
        return out;
      }
      char c = text_[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        out.push_back({Token::Kind::Int, i, std::string(text_.substr(i, j - i))});
        i = j;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
          ++j;
        out.push_back({Token::Kind::Ident, i, std::string(text_.substr(i, j - i))});
        i = j;
        continue;
      }
      Token::Kind kind;
      switch (c) {
        case '+': kind = Token::Kind::Plus; break;
        case '-': kind = Token::Kind::Minus; break;
        case '*': kind = Token::Kind::Star; break;
        case '/': kind = Token::Kind::Slash; break;
        case '^': kind = Token::Kind::Caret; break;
        case '(': kind = Token::Kind::LParen; break;
        case ')': kind = Token::Kind::RParen; break;
        default:
          throw SyntaxError(i, {"number", "identifier", "operator", "'('"}, std::string(1, c));
      }
      out.push_back({kind, i, std::string(1, c)});
      ++i;
    }
  }

 private:
  std::string_view text_;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t base) : toks_(std::move(tokens)), base_(base) {}

  ExprPtr parse_all() {
    auto e = expr();
    if (peek().kind != Token::Kind::End) error({"'+'", "'-'", "'*'", "'^'", "end of input"});
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(std::vector<std::string> expected) const {
    throw SyntaxError(base_ + peek().offset, std::move(expected), peek().text);
  }

  ExprPtr node(ExprNode::Kind kind, std::size_t offset) {
    auto n = std::make_unique<ExprNode>();
    n->kind = kind;
    n->offset = base_ + offset;
    return n;
  }

  ExprPtr binary(ExprNode::Kind kind, std::size_t offset, ExprPtr lhs, ExprPtr rhs) {
    auto n = node(kind, offset);
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return n;
  }

  ExprPtr expr() {
    auto lhs = term();
    while (peek().kind == Token::Kind::Plus || peek().kind == Token::Kind::Minus) {
      Token op = take();
      auto rhs = term();
      lhs = binary(op.kind == Token::Kind::Plus ? ExprNode::Kind::Add : ExprNode::Kind::Sub,
                   op.offset, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr term() {
    bool negate = false;
    std::size_t sign_offset = peek().offset;
    if (peek().kind == Token::Kind::Plus || peek().kind == Token::Kind::Minus) {
      negate = take().kind == Token::Kind::Minus;
    }
    auto lhs = factor();
    while (peek().kind == Token::Kind::Star || peek().kind == Token::Kind::Caret) {
      Token op = take();
      auto rhs = factor();
      lhs = binary(op.kind == Token::Kind::Star ? ExprNode::Kind::Mul : ExprNode::Kind::Wedge,
                   op.offset, std::move(lhs), std::move(rhs));
    }
    if (negate) {
      auto n = node(ExprNode::Kind::Neg, sign_offset);
      n->children.push_back(std::move(lhs));
      return n;
    }
    return lhs;
  }

  ExprPtr factor() {
    auto b = base();
    if (peek().kind == Token::Kind::Caret && peek(1).kind == Token::Kind::Int) {
      Token op = take();
      Token exp = take();
      auto n = node(ExprNode::Kind::Pow, op.offset);
      unsigned long e = 0;
      try {
        e = std::stoul(exp.text);
      } catch (const std::exception&) {
        throw SyntaxError(base_ + exp.offset, {"small unsigned integer"}, exp.text);
      }
      if (e > 4096) throw SyntaxError(base_ + exp.offset, {"exponent <= 4096"}, exp.text);
      n->exponent = static_cast<unsigned>(e);
      n->children.push_back(std::move(b));
      return n;
    }
    return b;
  }

  ExprPtr base() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::Int: {
        Token num = take();
        std::string text = num.text;
        if (peek().kind == Token::Kind::Slash) {
          take();
          if (peek().kind != Token::Kind::Int) error({"unsigned integer"});
          Token den = take();
          if (den.text.find_first_not_of('0') == std::string::npos) {
            throw SyntaxError(base_ + den.offset, {"nonzero denominator"}, den.text);
          }
          text += "/" + den.text;
        }
        auto n = node(ExprNode::Kind::Number, num.offset);
        n->number = parse_rational(text);
        return n;
      }
      case Token::Kind::Ident: {
        Token id = take();
        auto n = node(ExprNode::Kind::Ident, id.offset);
        n->name = id.text;
        return n;
      }
      case Token::Kind::LParen: {
        take();
        auto e = expr();
        if (peek().kind != Token::Kind::RParen) error({"')'"});
        take();
        return e;
      }
      default:
        error({"number", "identifier", "'('"});
    }
  }

  std::vector<Token> toks_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expression(std::string_view text, std::size_t base_offset) {
  std::vector<Token> tokens;
  try {
    tokens = Lexer(text).run();
  } catch (const SyntaxError& e) {
    throw SyntaxError(base_offset + e.offset(), e.expected(), e.found());
  }
  return Parser(std::move(tokens), base_offset).parse_all();
}

}  // namespace coiso
