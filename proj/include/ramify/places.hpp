#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ramify/errors.hpp"
#include "ramify/poly.hpp"
#include "ramify/ratfunc.hpp"

namespace ramify {

// Places of P^1 over F_q: monic irreducible polynomials plus the place at
// infinity. Finite places sort by polynomial order, infinity last.
class Place {
 public:
  static Place finite(const Poly<FieldElem>& f) {
    require(f.degree() >= 1 && f.is_monic(), errc::PreconditionViolated,
            "finite place needs a monic polynomial of positive degree");
    require(poly_is_irreducible(f), errc::PreconditionViolated,
            "finite place needs an irreducible polynomial");
    return Place(f.zero_sample().field(), false, f);
  }
  static Place infinity(const Fq* F) {
    return Place(F, true, Poly<FieldElem>::x(F->zero()));
  }

  bool is_infinite() const { return inf_; }
  const Poly<FieldElem>& poly() const {
    require(!inf_, errc::PreconditionViolated, "infinite place has no polynomial");
    return f_;
  }
  const Fq* field() const { return F_; }
  long degree() const { return inf_ ? 1 : f_.degree(); }

  std::string to_string() const {
    if (inf_) return "inf";
    std::string s = f_.to_string("x");
    return f_.coeffs().size() > 1 ? "(" + s + ")" : s;
  }

  friend bool operator==(const Place& a, const Place& b) {
    return a.F_ == b.F_ && a.inf_ == b.inf_ && (a.inf_ || a.f_ == b.f_);
  }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
  friend bool operator<(const Place& a, const Place& b) {
    require(a.F_ == b.F_, errc::PreconditionViolated, "places over different fields");
    if (a.inf_ != b.inf_) return !a.inf_;
    if (a.inf_) return false;
    return a.f_ < b.f_;
  }

 private:
  Place(const Fq* F, bool inf, Poly<FieldElem> f) : F_(F), inf_(inf), f_(std::move(f)) {}
  const Fq* F_;
  bool inf_;
  Poly<FieldElem> f_;
};

class Divisor {
 public:
  explicit Divisor(const Fq* F) : F_(F) {}

  const Fq* field() const { return F_; }
  const std::map<Place, long>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add(const Place& v, long n) {
    require(v.field() == F_, errc::PreconditionViolated, "divisor term over wrong field");
    if (n == 0) return;
    auto it = t_.find(v);
    if (it == t_.end()) {
      t_.emplace(v, n);
    } else {
      it->second += n;
      if (it->second == 0) t_.erase(it);
    }
  }
  long mult(const Place& v) const {
    auto it = t_.find(v);
    return it == t_.end() ? 0 : it->second;
  }
  long degree() const {
    long d = 0;
    for (const auto& [v, n] : t_) d += n * v.degree();
    return d;
  }
  bool is_effective() const {
    for (const auto& [v, n] : t_)
      if (n < 0) return false;
    return true;
  }

  friend Divisor operator+(const Divisor& a, const Divisor& b) {
    Divisor r = a;
    for (const auto& [v, n] : b.t_) r.add(v, n);
    return r;
  }
  friend Divisor operator-(const Divisor& a, const Divisor& b) {
    Divisor r = a;
    for (const auto& [v, n] : b.t_) r.add(v, -n);
    return r;
  }
  Divisor operator-() const {
    Divisor r(F_);
    for (const auto& [v, n] : t_) r.add(v, -n);
    return r;
  }
  friend bool operator==(const Divisor& a, const Divisor& b) {
    return a.F_ == b.F_ && a.t_ == b.t_;
  }
  friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }
  // partial order: D <= D' iff D' - D is effective
  bool dominated_by(const Divisor& other) const { return (other - *this).is_effective(); }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string out;
    for (const auto& [v, n] : t_) {
      if (!out.empty()) out += n < 0 ? " - " : " + ";
      else if (n < 0) out += "-";
      long a = n < 0 ? -n : n;
      if (a != 1) out += std::to_string(a) + "*";
      out += v.to_string();
    }
    return out;
  }

 private:
  const Fq* F_;
  std::map<Place, long> t_;
};

// Principal divisor of g on P^1: finite places from factoring numerator and
// denominator, infinity with multiplicity deg(den) - deg(num). Total degree 0.
inline Divisor divisor_of(const RatFunc& g) {
  require(!g.is_zero(), errc::ZeroFunction, "divisor of the zero function");
  const Fq* F = g.base_field();
  Divisor d(F);
  for (const auto& [f, m] : poly_factor(g.num()).factors) d.add(Place::finite(f), m);
  for (const auto& [f, m] : poly_factor(g.den()).factors) d.add(Place::finite(f), -m);
  d.add(Place::infinity(F), g.den().degree() - g.num().degree());
  require(d.degree() == 0, errc::PreconditionViolated, "principal divisor of nonzero degree");
  return d;
}

// Effective modulus with nonempty support; U = P^1 minus the support.
class Modulus {
 public:
  explicit Modulus(const Divisor& d) : D_(d) {
    require(!d.is_zero(), errc::PreconditionViolated, "modulus needs nonempty support");
    require(d.is_effective(), errc::PreconditionViolated, "modulus must be effective");
  }

  const Divisor& divisor() const { return D_; }
  const Fq* field() const { return D_.field(); }
  long degree() const { return D_.degree(); }
  bool contains(const Place& v) const { return D_.mult(v) > 0; }

  // product of f_v^{n_v} over the finite support
  Poly<FieldElem> finite_part() const {
    Poly<FieldElem> m = Poly<FieldElem>::constant(D_.field()->one());
    for (const auto& [v, n] : D_.terms())
      if (!v.is_infinite()) m = m * v.poly().pow(n);
    return m;
  }
  long inf_mult() const { return D_.mult(Place::infinity(D_.field())); }

  std::string to_string() const { return D_.to_string(); }

 private:
  Divisor D_;
};

}  // namespace ramify
