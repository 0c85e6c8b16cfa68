#pragma once

#include <string>
#include <utility>

#include "ramify/poly.hpp"

namespace ramify {

// Reduced rational functions over F_q in one variable (default rendering
// variable 'x'; the rsw coefficient field F_q(u) uses 'u'). Canonical form:
// gcd(num, den) = 1, den monic; zero is 0/1. Satisfies the coefficient-field
// concept, so LaurentSeries<RatFunc> and Poly<RatFunc> work on top.
class RatFunc {
 public:
  RatFunc(Poly<FieldElem> num, Poly<FieldElem> den, char var = 'x')
      : num_(std::move(num)), den_(std::move(den)), var_(var) {
    require(!den_.is_zero(), errc::ZeroPolynomial, "rational function with zero denominator");
    reduce();
  }
  explicit RatFunc(const Poly<FieldElem>& num, char var = 'x')
      : RatFunc(num, Poly<FieldElem>::constant(num.zero_sample().one()), var) {}
  static RatFunc from_elem(const FieldElem& c, char var = 'x') {
    return RatFunc(Poly<FieldElem>::constant(c), var);
  }
  static RatFunc variable(const Fq* F, char var = 'x') {
    return RatFunc(Poly<FieldElem>::x(F->zero()), var);
  }

  const Poly<FieldElem>& num() const { return num_; }
  const Poly<FieldElem>& den() const { return den_; }
  const Fq* base_field() const { return num_.zero_sample().field(); }
  char var() const { return var_; }
  int p() const { return base_field()->p(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  RatFunc zero() const { return RatFunc(Poly<FieldElem>(num_.zero_sample()), var_); }
  RatFunc one() const { return from_elem(num_.zero_sample().one(), var_); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  FieldElem constant_value() const {
    require(is_constant(), errc::PreconditionViolated, "not a constant rational function");
    return num_.is_zero() ? num_.zero_sample() : num_.coeff(0) / den_.coeff(0);
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, a.var_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_, a.var_);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_, a.var_);
  }
  RatFunc inv() const {
    require(!is_zero(), errc::PreconditionViolated, "inverse of zero rational function");
    return RatFunc(den_, num_, var_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }
  RatFunc pow(long e) const {
    if (e < 0) return inv().pow(-e);
    RatFunc r = one(), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    if (!(a.den_ == b.den_)) return a.den_ < b.den_;
    return a.num_ < b.num_;
  }

  // Formal derivative d/d(var) by the quotient rule.
  RatFunc derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_, var_);
  }

  // Exact p-th root. A reduced f = g/h is a p-th power iff f' = 0, iff both g
  // and h lie in F_q[u^p]; coefficients then have unique p-th roots.
  RatFunc pth_root() const {
    if (is_zero()) return *this;
    require(derivative().is_zero(), errc::NotAPthPower,
            "formal derivative nonzero; not a p-th power: " + to_string());
    auto root_poly = [](const Poly<FieldElem>& f) {
      long p = f.zero_sample().p();
      Poly<FieldElem> r(f.zero_sample());
      for (const auto& [e, v] : f.coeffs()) {
        require(e % p == 0, errc::NotAPthPower, "exponent not divisible by p");
        r.set_coeff(e / p, v.pth_root());
      }
      return r;
    };
    return RatFunc(root_poly(num_), root_poly(den_), var_);
  }

  std::string to_string() const {
    std::string vs(1, var_);
    if (den_.is_one()) {
      std::string ns = num_.to_string(vs);
      return ns;
    }
    std::string ns = num_.to_string(vs), ds = den_.to_string(vs);
    auto wrap = [](const std::string& s) {
      bool atomic = s.find('+') == std::string::npos && s.find('-') == std::string::npos &&
                    s.find('*') == std::string::npos && s.find('/') == std::string::npos;
      return atomic ? s : "(" + s + ")";
    };
    return wrap(ns) + "/" + wrap(ds);
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Poly<FieldElem>::constant(den_.zero_sample().one());
      return;
    }
    Poly<FieldElem> g = poly_gcd(num_, den_);
    if (g.degree() >= 1) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    FieldElem lcinv = den_.lc().inv();
    num_ = lcinv * num_;
    den_ = lcinv * den_;
  }

  Poly<FieldElem> num_, den_;
  char var_;
};

}  // namespace ramify
