#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "ramify/expr.hpp"
#include "ramify/laurent.hpp"
#include "ramify/places.hpp"
#include "ramify/quotfield.hpp"
#include "ramify/ratfunc.hpp"
#include "ramify/witt.hpp"

namespace ramify {

namespace iodetail {

inline std::string coeff_str(const FieldElem& c) { return c.to_string(); }
inline std::string coeff_str(const RatFunc& c) { return c.to_string(); }
inline std::string coeff_str(const QuotElem& c) { return c.to_string(); }
inline std::string coeff_str(const LaurentSeries<FieldElem>& c) { return c.to_string("u"); }

inline bool needs_parens(const std::string& s) {
  for (char ch : s)
    if (ch == '+' || ch == '-' || ch == '*' || ch == '/' || ch == ' ') return true;
  return false;
}

}  // namespace iodetail

// t^-3*(1 + 2*t + O(t^5)): valuation factored out, unit part ascending, tail
// precision relative to the factored power. Round-trips through the shared
// expression grammar.
template <class E>
std::string LaurentSeries<E>::to_string(const std::string& var) const {
  if (c_.empty()) return "O(" + var + "^" + std::to_string(prec_) + ")";
  long v = val();
  std::string body;
  for (const auto& [e, c] : c_) {
    std::string cs = iodetail::coeff_str(c);
    if (iodetail::needs_parens(cs)) cs = "(" + cs + ")";
    std::string term;
    long rel = e - v;
    if (rel == 0) {
      term = cs;
    } else {
      term = c.is_one() ? "" : cs + "*";
      term += rel == 1 ? var : var + "^" + std::to_string(rel);
    }
    if (!body.empty()) body += " + ";
    body += term;
  }
  body += " + O(" + var + "^" + std::to_string(prec_ - v) + ")";
  if (v == 0) return body;
  std::string head = v == 1 ? var : var + "^" + std::to_string(v);
  return head + "*(" + body + ")";
}

// [a_{s-1}; ...; a_0], matching the display order of the standard components.
template <class E>
std::string witt_to_string(const WittVector<LaurentSeries<E>>& w, const std::string& var = "t") {
  std::string out = "[";
  for (int j = 0; j < w.length(); ++j) {
    if (j) out += "; ";
    out += w.std_comp(j).to_string(var);
  }
  return out + "]";
}

inline WittSeries<FieldElem> parse_witt_fq(const std::string& s, int p, const Fq* F) {
  std::vector<LaurentSeries<FieldElem>> comps;
  for (const auto& part : split_witt_literal(s)) comps.push_back(parse_series_fq(part, F));
  return WittSeries<FieldElem>(p, std::move(comps));
}

inline WittSeries<RatFunc> parse_witt_ratfunc(const std::string& s, int p, const Fq* F) {
  std::vector<LaurentSeries<RatFunc>> comps;
  for (const auto& part : split_witt_literal(s)) comps.push_back(parse_series_ratfunc(part, F));
  return WittSeries<RatFunc>(p, std::move(comps));
}

// Divisor grammar: terms joined by top-level + or -, each `[n*]place` with
// place one of `inf`, a parenthesized polynomial, or a bare polynomial
// (normalized monic). Matches Divisor::to_string output.
inline Divisor parse_divisor(const std::string& s, const Fq* F) {
  Divisor D(F);
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  require(!t.empty(), errc::ParseError, "empty divisor literal");
  std::size_t i = 0;
  bool neg = false;
  if (t[0] == '+' || t[0] == '-') {
    neg = t[0] == '-';
    i = 1;
  }
  while (i < t.size()) {
    std::size_t j = i;
    int depth = 0;
    while (j < t.size() && (depth > 0 || (t[j] != '+' && t[j] != '-'))) {
      if (t[j] == '(') ++depth;
      if (t[j] == ')') --depth;
      ++j;
    }
    require(depth == 0, errc::ParseError, "unbalanced parentheses in divisor literal");
    std::string term = t.substr(i, j - i);
    require(!term.empty(), errc::ParseError, "empty divisor term");

    long n = 1;
    std::size_t k = 0;
    while (k < term.size() && std::isdigit(static_cast<unsigned char>(term[k]))) ++k;
    if (k > 0 && k < term.size() && term[k] == '*') {
      n = std::stol(term.substr(0, k));
      term = term.substr(k + 1);
    }
    require(!term.empty(), errc::ParseError, "divisor term lacks a place");
    Place v = Place::infinity(F);
    if (term != "inf") {
      RatFunc g = parse_ratfunc(term, F);
      require(g.den().degree() == 0, errc::ParseError,
              "divisor place must be a polynomial: " + term);
      Poly<FieldElem> f = g.num().monic();
      require(f.degree() >= 1, errc::ParseError, "constant cannot name a place: " + term);
      v = Place::finite(f);
    }
    D.add(v, neg ? -n : n);

    if (j < t.size()) {
      neg = t[j] == '-';
      i = j + 1;
    } else {
      i = j;
    }
  }
  return D;
}

inline Modulus parse_modulus(const std::string& s, const Fq* F) {
  return Modulus(parse_divisor(s, F));
}

// Coefficient-field grammar for the refined-conductor tool: `F3`, `F9`,
// `F3(u)`; the `(u)` suffix selects rational-function coefficients.
struct CoeffField {
  const Fq* F;
  bool rational;
};

inline CoeffField parse_coeff_field(const std::string& s) {
  std::string t = s;
  bool rational = false;
  if (t.size() >= 3 && t.substr(t.size() - 3) == "(u)") {
    rational = true;
    t = t.substr(0, t.size() - 3);
  }
  require(t.size() >= 2 && t[0] == 'F', errc::ParseError, "coefficient field: " + s);
  long q = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    require(std::isdigit(static_cast<unsigned char>(t[i])), errc::ParseError,
            "coefficient field: " + s);
    q = q * 10 + (t[i] - '0');
  }
  require(q >= 2, errc::ParseError, "coefficient field: " + s);
  return CoeffField{Fq::get_q(q), rational};
}

}  // namespace ramify
