#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ramify/laurent.hpp"
#include "ramify/ratfunc.hpp"

namespace ramify {

// Expression grammar shared by every textual interface: integer literals,
// identifiers (t, u, x, y, g), + - * / ^ and parentheses, plus O(t^N)
// precision markers inside series literals.
namespace expr {

struct Node {
  enum class Kind { Int, Ident, Unary, Binary, BigO };
  Kind kind;
  long ival = 0;
  std::string ident;
  char op = 0;
  std::shared_ptr<const Node> lhs, rhs;
};
using NodePtr = std::shared_ptr<const Node>;

struct Token {
  enum class Kind { Int, Word, Op, End };
  Kind kind;
  long ival = 0;
  std::string word;
  char op = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}
  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size()) return {Token::Kind::End, 0, "", 0};
    char ch = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      long v = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        v = v * 10 + (s_[i_] - '0');
        require(v < (1L << 40), errc::ParseError, "integer literal too large");
        ++i_;
      }
      return {Token::Kind::Int, v, "", 0};
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::string w;
      while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) w += s_[i_++];
      return {Token::Kind::Word, 0, w, 0};
    }
    ++i_;
    switch (ch) {
      case '+': case '-': case '*': case '/': case '^': case '(': case ')':
        return {Token::Kind::Op, 0, "", ch};
      default:
        fail(errc::ParseError, std::string("unexpected character '") + ch + "'");
    }
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) { advance(); }

  NodePtr parse() {
    NodePtr e = expression();
    require(cur_.kind == Token::Kind::End, errc::ParseError, "trailing input in expression");
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }
  bool is_op(char c) const { return cur_.kind == Token::Kind::Op && cur_.op == c; }

  NodePtr expression() {  // + -
    NodePtr l = term();
    while (is_op('+') || is_op('-')) {
      char op = cur_.op;
      advance();
      NodePtr r = term();
      l = make_bin(op, l, r);
    }
    return l;
  }
  NodePtr term() {  // * /
    NodePtr l = unary();
    while (is_op('*') || is_op('/')) {
      char op = cur_.op;
      advance();
      NodePtr r = unary();
      l = make_bin(op, l, r);
    }
    return l;
  }
  NodePtr unary() {
    if (is_op('-')) {
      advance();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->lhs = unary();
      return n;
    }
    if (is_op('+')) {
      advance();
      return unary();
    }
    return power();
  }
  NodePtr power() {  // right-assoc ^
    NodePtr base = atom();
    if (is_op('^')) {
      advance();
      NodePtr e = unary_exponent();
      return make_bin('^', base, e);
    }
    return base;
  }
  NodePtr unary_exponent() {
    if (is_op('-')) {
      advance();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->lhs = unary_exponent();
      return n;
    }
    return power();
  }
  NodePtr atom() {
    if (cur_.kind == Token::Kind::Int) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Int;
      n->ival = cur_.ival;
      advance();
      return n;
    }
    if (cur_.kind == Token::Kind::Word) {
      std::string w = cur_.word;
      advance();
      if (w == "O") {
        require(is_op('('), errc::ParseError, "O must be followed by (t^N)");
        advance();
        NodePtr inner = expression();
        require(is_op(')'), errc::ParseError, "unbalanced O(...)");
        advance();
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::BigO;
        n->lhs = inner;
        return n;
      }
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Ident;
      n->ident = w;
      return n;
    }
    if (is_op('(')) {
      advance();
      NodePtr e = expression();
      require(is_op(')'), errc::ParseError, "unbalanced parentheses");
      advance();
      return e;
    }
    fail(errc::ParseError, "expected integer, identifier, or parenthesized expression");
  }
  static NodePtr make_bin(char op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  Lexer lex_;
  Token cur_;
};

inline NodePtr parse_string(const std::string& s) { return Parser(s).parse(); }

inline long eval_int(const NodePtr& n) {
  switch (n->kind) {
    case Node::Kind::Int:
      return n->ival;
    case Node::Kind::Unary:
      return -eval_int(n->lhs);
    case Node::Kind::Binary: {
      long a = eval_int(n->lhs), b = eval_int(n->rhs);
      switch (n->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '^': {
          require(b >= 0 && b < 63, errc::ParseError, "bad integer exponent");
          long r = 1;
          for (long i = 0; i < b; ++i) r *= a;
          return r;
        }
        default: fail(errc::ParseError, "integer expression with '/'");
      }
    }
    default:
      fail(errc::ParseError, "expected an integer expression");
  }
}

// Exact subexpressions evaluate at kExactPrec; a finite series precision can
// only enter through O(t^N).

// Series evaluation with identifier bindings (e.g. t, g, u).
template <class E>
LaurentSeries<E> eval_series(const NodePtr& n, const E& sample,
                             const std::map<std::string, LaurentSeries<E>>& bindings) {
  using LS = LaurentSeries<E>;
  switch (n->kind) {
    case Node::Kind::Int: {
      E c = sample.zero();
      for (long i = 0; i < n->ival; ++i) c = c + sample.one();
      return LS::monomial(c, 0, kExactPrec);
    }
    case Node::Kind::Ident: {
      auto it = bindings.find(n->ident);
      require(it != bindings.end(), errc::ParseError, "unknown identifier '" + n->ident + "' in this context");
      return it->second;
    }
    case Node::Kind::Unary:
      return -eval_series(n->lhs, sample, bindings);
    case Node::Kind::BigO: {
      LS inner = eval_series(n->lhs, sample, bindings);
      require(!inner.is_zero_to_precision(), errc::ParseError, "O(...) needs a monomial t^N argument");
      return LS::zero(sample, inner.val());
    }
    case Node::Kind::Binary: {
      if (n->op == '^') {
        LS base = eval_series(n->lhs, sample, bindings);
        long e = eval_int(n->rhs);
        return base.pow(e);
      }
      LS a = eval_series(n->lhs, sample, bindings);
      LS b = eval_series(n->rhs, sample, bindings);
      switch (n->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: fail(errc::ParseError, "unknown operator");
      }
    }
  }
  fail(errc::ParseError, "malformed expression tree");
}

}  // namespace expr

// --- public parse entry points ---------------------------------------------

// Constant in F_q: integers and g.
inline FieldElem parse_field_elem(const std::string& s, const Fq* F) {
  auto node = expr::parse_string(s);
  std::map<std::string, LaurentSeries<FieldElem>> b;
  b.emplace("g", LaurentSeries<FieldElem>::monomial(F->gen(), 0, kExactPrec));
  LaurentSeries<FieldElem> r = expr::eval_series(node, F->zero(), b);
  if (r.is_zero_to_precision()) return F->zero();
  require(r.val() == 0 && r.coeffs().size() == 1, errc::ParseError, "expected a field constant");
  return r.coeff(0);
}

// Rational function in one variable over F_q (plus g).
inline RatFunc parse_ratfunc(const std::string& s, const Fq* F, char var = 'x') {
  auto node = expr::parse_string(s);
  // evaluate in the rational function field directly via series of RatFunc?
  // Simpler: recursive evaluation into RatFunc.
  struct Ev {
    const Fq* F;
    char var;
    RatFunc operator()(const expr::NodePtr& n) const {
      switch (n->kind) {
        case expr::Node::Kind::Int:
          return RatFunc::from_elem(F->from_int(n->ival), var);
        case expr::Node::Kind::Ident:
          if (n->ident == std::string(1, var)) return RatFunc::variable(F, var);
          if (n->ident == "g") return RatFunc::from_elem(F->gen(), var);
          fail(errc::ParseError, "unknown identifier '" + n->ident + "' in rational function");
        case expr::Node::Kind::Unary:
          return -(*this)(n->lhs);
        case expr::Node::Kind::BigO:
          fail(errc::ParseError, "O(...) not allowed in a rational function");
        case expr::Node::Kind::Binary: {
          if (n->op == '^') {
            RatFunc b = (*this)(n->lhs);
            return b.pow(expr::eval_int(n->rhs));
          }
          RatFunc a = (*this)(n->lhs), b = (*this)(n->rhs);
          switch (n->op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/': return a / b;
            default: fail(errc::ParseError, "unknown operator");
          }
        }
      }
      fail(errc::ParseError, "malformed expression tree");
    }
  };
  return Ev{F, var}(node);
}

// Series literal over E = F_q: identifiers t, g; O(t^N) required.
inline LaurentSeries<FieldElem> parse_series_fq(const std::string& s, const Fq* F) {
  auto node = expr::parse_string(s);
  std::map<std::string, LaurentSeries<FieldElem>> b;
  b.emplace("t", LaurentSeries<FieldElem>::t(F->zero(), kExactPrec));
  b.emplace("g", LaurentSeries<FieldElem>::monomial(F->gen(), 0, kExactPrec));
  LaurentSeries<FieldElem> r = expr::eval_series(node, F->zero(), b);
  require(r.prec() < kExactPrec / 4, errc::ParseError, "series literal requires an O(t^N) marker");
  return r;
}

// Series literal over E = F_q(u): identifiers t, u, g; O(t^N) required.
inline LaurentSeries<RatFunc> parse_series_ratfunc(const std::string& s, const Fq* F) {
  auto node = expr::parse_string(s);
  RatFunc uzero(Poly<FieldElem>(F->zero()), 'u');
  std::map<std::string, LaurentSeries<RatFunc>> b;
  b.emplace("t", LaurentSeries<RatFunc>::t(uzero, kExactPrec));
  b.emplace("u", LaurentSeries<RatFunc>::monomial(RatFunc::variable(F, 'u'), 0, kExactPrec));
  b.emplace("g", LaurentSeries<RatFunc>::monomial(RatFunc::from_elem(F->gen(), 'u'), 0, kExactPrec));
  LaurentSeries<RatFunc> r = expr::eval_series(node, uzero, b);
  require(r.prec() < kExactPrec / 4, errc::ParseError, "series literal requires an O(t^N) marker");
  return r;
}

// Witt literal [a_{s-1}; ...; a_0]: semicolon-separated series literals.
inline std::vector<std::string> split_witt_literal(const std::string& s) {
  std::size_t i = 0, j = s.size();
  while (i < j && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) --j;
  require(i < j && s[i] == '[' && s[j - 1] == ']', errc::ParseError, "Witt literal must be bracketed");
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (std::size_t k = i + 1; k + 1 < j; ++k) {
    char c = s[k];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ';' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace ramify
