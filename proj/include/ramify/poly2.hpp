#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ramify/expr.hpp"
#include "ramify/poly.hpp"
#include "ramify/ratfunc.hpp"

namespace ramify {

// Sparse bivariate polynomials over F_q. Univariate work (division, gcd,
// resultants) is routed through Poly<RatFunc> with y as the main variable
// over F_q(x), then denominators are cleared; Gauss's lemma keeps everything
// integral for primitive inputs.
class Poly2 {
 public:
  using Key = std::pair<long, long>;  // (x-exponent, y-exponent)

  explicit Poly2(const Fq* F) : F_(F) {
    require(F != nullptr, errc::PreconditionViolated, "bivariate polynomial needs a field");
  }
  static Poly2 zero(const Fq* F) { return Poly2(F); }
  static Poly2 constant(const FieldElem& c) {
    Poly2 r(c.field());
    r.set_coeff(0, 0, c);
    return r;
  }
  static Poly2 monomial(const FieldElem& c, long i, long j) {
    require(i >= 0 && j >= 0, errc::PreconditionViolated, "negative exponent in monomial");
    Poly2 r(c.field());
    r.set_coeff(i, j, c);
    return r;
  }
  static Poly2 x(const Fq* F) { return monomial(F->one(), 1, 0); }
  static Poly2 y(const Fq* F) { return monomial(F->one(), 0, 1); }
  // Embed a univariate polynomial as a polynomial in x (or in y).
  static Poly2 from_univariate(const Poly<FieldElem>& g, bool as_x) {
    Poly2 r(g.zero_sample().field());
    for (const auto& [e, c] : g.coeffs()) r.set_coeff(as_x ? e : 0, as_x ? 0 : e, c);
    return r;
  }

  const Fq* field() const { return F_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.empty() || (c_.size() == 1 && c_.begin()->first == Key{0, 0}); }
  FieldElem constant_value() const {
    require(is_constant(), errc::PreconditionViolated, "not a constant polynomial");
    return is_zero() ? F_->zero() : c_.begin()->second;
  }
  bool is_one() const { return is_constant() && !is_zero() && constant_value().is_one(); }

  long deg_x() const {
    long d = -1;
    for (const auto& [k, v] : c_) d = std::max(d, k.first);
    return d;
  }
  long deg_y() const {
    long d = -1;
    for (const auto& [k, v] : c_) d = std::max(d, k.second);
    return d;
  }
  long total_degree() const {
    long d = -1;
    for (const auto& [k, v] : c_) d = std::max(d, k.first + k.second);
    return d;
  }

  FieldElem coeff(long i, long j) const {
    auto it = c_.find({i, j});
    return it == c_.end() ? F_->zero() : it->second;
  }
  void set_coeff(long i, long j, const FieldElem& v) {
    require(i >= 0 && j >= 0, errc::PreconditionViolated, "negative exponent in set_coeff");
    if (v.is_zero())
      c_.erase({i, j});
    else
      c_[{i, j}] = v;
  }
  const std::map<Key, FieldElem>& coeffs() const { return c_; }

  friend Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 r = a;
    for (const auto& [k, v] : b.c_) r.set_coeff(k.first, k.second, r.coeff(k.first, k.second) + v);
    return r;
  }
  friend Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-b); }
  Poly2 operator-() const {
    Poly2 r(F_);
    for (const auto& [k, v] : c_) r.c_[k] = -v;
    return r;
  }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r(a.F_);
    for (const auto& [ka, va] : a.c_)
      for (const auto& [kb, vb] : b.c_) {
        Key k{ka.first + kb.first, ka.second + kb.second};
        r.set_coeff(k.first, k.second, r.coeff(k.first, k.second) + va * vb);
      }
    return r;
  }
  friend Poly2 operator*(const FieldElem& s, const Poly2& a) { return Poly2::constant(s) * a; }
  Poly2 pow(long e) const {
    require(e >= 0, errc::PreconditionViolated, "negative exponent in pow");
    Poly2 acc = Poly2::constant(F_->one()), base = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) acc = acc * base;
      if (e > 1) base = base * base;
    }
    return acc;
  }

  FieldElem eval(const FieldElem& a, const FieldElem& b) const {
    FieldElem s = F_->zero();
    for (const auto& [k, v] : c_) s = s + v * a.pow(k.first) * b.pow(k.second);
    return s;
  }
  // Evaluation into any commutative ring T; lift embeds F_q coefficients.
  template <class T, class Lift>
  T eval_with(const T& xv, const T& yv, Lift lift) const {
    T s = xv.zero();
    for (const auto& [k, v] : c_) {
      T term = lift(v);
      for (long i = 0; i < k.first; ++i) term = term * xv;
      for (long j = 0; j < k.second; ++j) term = term * yv;
      s = s + term;
    }
    return s;
  }

  Poly2 swap_xy() const {
    Poly2 r(F_);
    for (const auto& [k, v] : c_) r.c_[{k.second, k.first}] = v;
    return r;
  }
  Poly2 derivative_x() const {
    Poly2 r(F_);
    for (const auto& [k, v] : c_) {
      if (k.first == 0) continue;
      FieldElem m = v * F_->from_int(k.first % F_->p());
      if (!m.is_zero()) r.c_[{k.first - 1, k.second}] = m;
    }
    return r;
  }
  Poly2 derivative_y() const { return swap_xy().derivative_x().swap_xy(); }

  // Coefficient of y^j, as a polynomial in x.
  Poly<FieldElem> coeff_of_y(long j) const {
    Poly<FieldElem> r = Poly<FieldElem>::zero(F_->zero());
    for (const auto& [k, v] : c_)
      if (k.second == j) r.set_coeff(k.first, v);
    return r;
  }
  // View as element of F_q(x)[y].
  Poly<RatFunc> as_poly_in_y() const {
    Poly<RatFunc> r = Poly<RatFunc>::zero(RatFunc::from_elem(F_->zero()));
    for (long j = 0; j <= deg_y(); ++j) {
      Poly<FieldElem> cj = coeff_of_y(j);
      if (!cj.is_zero()) r.set_coeff(j, RatFunc(cj));
    }
    return r;
  }
  // Inverse of as_poly_in_y; every coefficient must be integral.
  static Poly2 from_poly_in_y(const Poly<RatFunc>& g, const Fq* F) {
    Poly2 r(F);
    for (const auto& [j, c] : g.coeffs()) {
      require(c.den().degree() == 0, errc::PreconditionViolated,
              "non-polynomial coefficient in bivariate reconstruction");
      Poly<FieldElem> n = c.den().coeff(0).inv() * c.num();
      for (const auto& [i, v] : n.coeffs()) r.set_coeff(i, j, v);
    }
    return r;
  }

  // gcd over F_q[x] of the y-power coefficients (monic); the pure-x content.
  Poly<FieldElem> content_in_x() const {
    Poly<FieldElem> g = Poly<FieldElem>::zero(F_->zero());
    for (long j = 0; j <= deg_y(); ++j) {
      Poly<FieldElem> cj = coeff_of_y(j);
      if (cj.is_zero()) continue;
      g = g.is_zero() ? cj.monic() : poly_gcd(g, cj);
      if (g.degree() == 0) break;
    }
    return g;
  }

  // Coefficient of the graded-lex leading monomial (total degree, then x-degree).
  FieldElem lead_coeff() const {
    require(!is_zero(), errc::ZeroPolynomial, "leading coefficient of zero");
    Key best{-1, -1};
    for (const auto& [k, v] : c_) {
      long d = k.first + k.second, bd = best.first + best.second;
      if (d > bd || (d == bd && k.first > best.first)) best = k;
    }
    return c_.at(best);
  }
  // Canonical representative of the scalar class: graded-lex lead made 1.
  Poly2 normalized() const { return is_zero() ? *this : lead_coeff().inv() * *this; }

  friend bool operator==(const Poly2& a, const Poly2& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly2& a, const Poly2& b) { return !(a == b); }
  friend bool operator<(const Poly2& a, const Poly2& b) {
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    return a.c_ < b.c_;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    // graded-lex, highest first
    std::vector<std::pair<Key, FieldElem>> ts(c_.begin(), c_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& l, const auto& r) {
      long dl = l.first.first + l.first.second, dr = r.first.first + r.first.second;
      if (dl != dr) return dl > dr;
      return l.first.first > r.first.first;
    });
    std::string out;
    for (const auto& [k, v] : ts) {
      std::string mono;
      if (k.first > 0) mono += (k.first == 1) ? "x" : "x^" + std::to_string(k.first);
      if (k.second > 0) {
        if (!mono.empty()) mono += "*";
        mono += (k.second == 1) ? "y" : "y^" + std::to_string(k.second);
      }
      std::string cs = v.to_string();
      std::string term;
      if (mono.empty())
        term = cs;
      else if (v.is_one())
        term = mono;
      else
        term = (cs.find_first_of("+-") != std::string::npos ? "(" + cs + ")" : cs) + "*" + mono;
      out += out.empty() ? term : " + " + term;
    }
    return out;
  }

 private:
  const Fq* F_;
  std::map<Key, FieldElem> c_;
};

// Exact division; nullopt when d does not divide a in F_q[x,y].
inline std::optional<Poly2> poly2_try_divide(const Poly2& a, const Poly2& d) {
  require(!d.is_zero(), errc::ZeroPolynomial, "bivariate division by zero");
  if (a.is_zero()) return Poly2::zero(a.field());
  if (d.deg_y() == 0) {
    // pure-x divisor: divide each y-coefficient
    Poly<FieldElem> dx = d.coeff_of_y(0);
    Poly2 q(a.field());
    for (long j = 0; j <= a.deg_y(); ++j) {
      Poly<FieldElem> cj = a.coeff_of_y(j);
      if (cj.is_zero()) continue;
      Poly<FieldElem> qj = cj, rj = cj;
      Poly<FieldElem>::divrem(cj, dx, &qj, &rj);
      if (!rj.is_zero()) return std::nullopt;
      for (const auto& [i, v] : qj.coeffs()) q.set_coeff(i, j, v);
    }
    return q;
  }
  Poly<RatFunc> ay = a.as_poly_in_y(), dy = d.as_poly_in_y();
  Poly<RatFunc> qy = ay, ry = ay;
  Poly<RatFunc>::divrem(ay, dy, &qy, &ry);
  if (!ry.is_zero()) return std::nullopt;
  for (const auto& [j, c] : qy.coeffs())
    if (c.den().degree() != 0) return std::nullopt;
  return Poly2::from_poly_in_y(qy, a.field());
}

inline bool poly2_divides(const Poly2& d, const Poly2& a) {
  return poly2_try_divide(a, d).has_value();
}

inline Poly2 poly2_div_exact(const Poly2& a, const Poly2& d) {
  auto q = poly2_try_divide(a, d);
  require(q.has_value(), errc::PreconditionViolated, "inexact bivariate division");
  return *q;
}

// gcd in F_q[x,y] (normalized); Gauss: gcd = gcd of contents times primitive gcd.
inline Poly2 poly2_gcd(const Poly2& a, const Poly2& b) {
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  const Fq* F = a.field();
  Poly<FieldElem> ca = a.content_in_x(), cb = b.content_in_x();
  Poly2 pa = poly2_div_exact(a, Poly2::from_univariate(ca, true));
  Poly2 pb = poly2_div_exact(b, Poly2::from_univariate(cb, true));
  Poly2 g = Poly2::from_univariate(poly_gcd(ca, cb), true);
  if (pa.deg_y() > 0 && pb.deg_y() > 0) {
    Poly<RatFunc> gy = poly_gcd(pa.as_poly_in_y(), pb.as_poly_in_y());
    // clear denominators, then strip the content the clearing introduced
    Poly<FieldElem> lcm = Poly<FieldElem>::constant(F->one());
    for (const auto& [j, c] : gy.coeffs()) {
      Poly<FieldElem> d = c.den();
      lcm = (lcm * d) / poly_gcd(lcm, d);
    }
    Poly<RatFunc> cleared = RatFunc(lcm) * gy;
    Poly2 prim = Poly2::from_poly_in_y(cleared, F);
    prim = poly2_div_exact(prim, Poly2::from_univariate(prim.content_in_x(), true));
    g = g * prim;
  }
  return g.normalized();
}

// Resultant with respect to y, an element of F_q[x]; zero iff the inputs share
// a factor of positive y-degree (or one of them is zero).
inline Poly<FieldElem> resultant_y(const Poly2& a, const Poly2& b) {
  const Fq* F = a.field();
  std::function<RatFunc(Poly<RatFunc>, Poly<RatFunc>)> res = [&](Poly<RatFunc> A,
                                                                 Poly<RatFunc> B) -> RatFunc {
    RatFunc one = RatFunc::from_elem(F->one());
    if (A.is_zero() || B.is_zero()) return one.zero();
    long m = A.degree(), n = B.degree();
    if (m == 0 && n == 0) return one;
    if (n == 0) return B.coeff(0).pow(m);
    if (m == 0) return A.coeff(0).pow(n);
    if (m < n) {
      RatFunc s = ((m * n) % 2 == 1) ? -one : one;
      return s * res(B, A);
    }
    Poly<RatFunc> R = A % B;
    if (R.is_zero()) return one.zero();
    RatFunc s = ((m * n) % 2 == 1) ? -one : one;
    return s * B.lc().pow(m - R.degree()) * res(B, R);
  };
  RatFunc r = res(a.as_poly_in_y(), b.as_poly_in_y());
  require(r.den().degree() == 0, errc::PreconditionViolated, "resultant failed to clear");
  return r.den().coeff(0).inv() * r.num();
}

inline Poly<FieldElem> resultant_x(const Poly2& a, const Poly2& b) {
  return resultant_y(a.swap_xy(), b.swap_xy());
}

// One irreducible (or assumed-irreducible) factor with multiplicity.
struct Factor2 {
  Poly2 poly;
  int mult;
  bool assumed_irreducible;  // true when irreducibility was not certified
};
struct Factorization2 {
  FieldElem unit;
  std::vector<Factor2> factors;
};

namespace detail {

// All monic divisors of a univariate polynomial (including 1), via its
// factorization; used for rational-root sweeps in the main variable.
inline std::vector<Poly<FieldElem>> monic_divisors(const Poly<FieldElem>& a) {
  std::vector<Poly<FieldElem>> out{Poly<FieldElem>::constant(a.zero_sample().one())};
  if (a.degree() <= 0) return out;
  Factorization<FieldElem> fac = poly_factor(a);
  for (const auto& [f, e] : fac.factors) {
    std::vector<Poly<FieldElem>> next;
    for (const auto& d : out) {
      Poly<FieldElem> pw = d;
      next.push_back(pw);
      for (int i = 1; i <= e; ++i) {
        pw = pw * f;
        next.push_back(pw);
      }
    }
    out = std::move(next);
  }
  return out;
}

// multiplicity plus whether irreducibility was certified along the way
struct FactorAcc {
  int mult = 0;
  bool assumed = false;
};

// Strip every factor of the form u(x)*y + w(x) (y-degree one) from a doubly
// primitive polynomial, by the rational-root bound: u | lc_y, w | tc_y.
inline void strip_y_linear(Poly2& core, std::map<Poly2, int>& hits) {
  const Fq* F = core.field();
  bool again = true;
  while (again && core.deg_y() > 0) {
    again = false;
    Poly<FieldElem> lead = core.coeff_of_y(core.deg_y());
    Poly<FieldElem> tail = core.coeff_of_y(0);
    if (tail.is_zero()) return;  // y | core: excluded by primitivity upstream
    for (const auto& du : monic_divisors(lead)) {
      for (const auto& dw : monic_divisors(tail)) {
        for (long s = 1; s < F->q(); ++s) {
          Poly2 cand = Poly2::from_univariate(du, true) * Poly2::y(F) +
                       Poly2::from_univariate(F->element_by_index(s) * dw, true);
          auto q = poly2_try_divide(core, cand);
          if (!q) continue;
          core = *q;
          ++hits[cand.normalized()];
          again = true;
          break;
        }
        if (again) break;
      }
      if (again) break;
    }
  }
}

inline void factor2_into(const Poly2& a, std::map<Poly2, FactorAcc>& acc, int outer_mult);

// Squarefree-type splitting of a doubly primitive core: peel gcd with a
// partial derivative, or extract a p-th root when both derivatives vanish.
inline bool try_split(const Poly2& core, std::map<Poly2, FactorAcc>& acc, int outer_mult) {
  const Fq* F = core.field();
  for (int axis = 0; axis < 2; ++axis) {
    Poly2 d = axis == 0 ? core.derivative_x() : core.derivative_y();
    if (d.is_zero()) continue;
    Poly2 g = poly2_gcd(core, d);
    if (g.total_degree() <= 0 || g.total_degree() >= core.total_degree()) continue;
    factor2_into(g, acc, outer_mult);
    factor2_into(poly2_div_exact(core, g), acc, outer_mult);
    return true;
  }
  if (core.derivative_x().is_zero() && core.derivative_y().is_zero()) {
    // core = s^p with coefficients the p-th roots (Frobenius is onto)
    long p = F->p();
    Poly2 s(F);
    for (const auto& [k, v] : core.coeffs())
      s.set_coeff(k.first / p, k.second / p, v.pow(F->q() / p));
    factor2_into(s, acc, outer_mult * static_cast<int>(p));
    return true;
  }
  return false;
}

inline void factor2_into(const Poly2& a, std::map<Poly2, FactorAcc>& acc, int outer_mult) {
  const Fq* F = a.field();
  if (a.is_constant()) return;
  Poly2 core = a;

  // pure-x factors (the x-content), factored univariately: always certified
  Poly<FieldElem> cx = core.content_in_x();
  if (cx.degree() > 0) {
    for (const auto& [f, e] : poly_factor(cx).factors)
      acc[Poly2::from_univariate(f, true).normalized()].mult += e * outer_mult;
    core = poly2_div_exact(core, Poly2::from_univariate(cx, true));
  }
  // pure-y factors (the y-content of what remains)
  Poly<FieldElem> cy = core.swap_xy().content_in_x();
  if (cy.degree() > 0) {
    for (const auto& [f, e] : poly_factor(cy).factors)
      acc[Poly2::from_univariate(f, false).normalized()].mult += e * outer_mult;
    core = poly2_div_exact(core, Poly2::from_univariate(cy, false));
  }
  if (core.is_constant()) return;

  // doubly primitive core: strip factors linear in y, then linear in x
  std::map<Poly2, int> hits;
  strip_y_linear(core, hits);
  {
    Poly2 sw = core.swap_xy();
    std::map<Poly2, int> xhits;
    strip_y_linear(sw, xhits);
    core = sw.swap_xy();
    for (const auto& [f, e] : xhits) hits[f.swap_xy().normalized()] += e;
  }
  for (const auto& [f, e] : hits) acc[f.normalized()].mult += e * outer_mult;
  if (core.is_constant()) return;

  if (try_split(core, acc, outer_mult)) return;

  // squarefree, doubly primitive, no factor linear in either variable:
  // degree 2 or 3 in x or in y forces irreducibility
  long dy = core.deg_y(), dx = core.deg_x();
  bool certified = (dy >= 2 && dy <= 3) || (dx >= 2 && dx <= 3);
  FactorAcc& slot = acc[core.normalized()];
  slot.mult += outer_mult;
  slot.assumed = slot.assumed || !certified;
}

}  // namespace detail

// Factor a bivariate polynomial. Exact (all factors certified irreducible)
// whenever every surviving core has degree <= 3 in x or in y after content
// and linear-factor stripping; larger cores are returned whole and flagged.
inline Factorization2 poly2_factor(const Poly2& a) {
  require(!a.is_zero(), errc::ZeroPolynomial, "factoring the zero polynomial");
  std::map<Poly2, detail::FactorAcc> acc;
  detail::factor2_into(a, acc, 1);
  Factorization2 out{a.field()->one(), {}};
  Poly2 prod = Poly2::constant(a.field()->one());
  for (const auto& [f, fa] : acc) {
    out.factors.push_back({f, fa.mult, fa.assumed});
    prod = prod * f.pow(fa.mult);
  }
  Poly2 u = poly2_div_exact(a, prod);
  require(u.is_constant(), errc::PreconditionViolated, "factorization does not multiply back");
  out.unit = u.constant_value();
  return out;
}

// Reduced rational functions in two variables: gcd(num, den) = 1 and the
// denominator normalized (graded-lex lead 1); zero is 0/1.
class RatFunc2 {
 public:
  RatFunc2(Poly2 num, Poly2 den) : num_(std::move(num)), den_(std::move(den)) {
    require(!den_.is_zero(), errc::ZeroPolynomial, "bivariate rational function with zero denominator");
    reduce();
  }
  explicit RatFunc2(const Poly2& num) : RatFunc2(num, Poly2::constant(num.field()->one())) {}
  static RatFunc2 from_elem(const FieldElem& c) { return RatFunc2(Poly2::constant(c)); }
  static RatFunc2 x(const Fq* F) { return RatFunc2(Poly2::x(F)); }
  static RatFunc2 y(const Fq* F) { return RatFunc2(Poly2::y(F)); }

  const Poly2& num() const { return num_; }
  const Poly2& den() const { return den_; }
  const Fq* field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  bool is_polynomial() const { return den_.is_one(); }

  RatFunc2 zero() const { return RatFunc2(Poly2::zero(field())); }
  RatFunc2 one() const { return from_elem(field()->one()); }

  friend RatFunc2 operator+(const RatFunc2& a, const RatFunc2& b) {
    return RatFunc2(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc2 operator-(const RatFunc2& a, const RatFunc2& b) { return a + (-b); }
  RatFunc2 operator-() const { return RatFunc2(-num_, den_); }
  friend RatFunc2 operator*(const RatFunc2& a, const RatFunc2& b) {
    return RatFunc2(a.num_ * b.num_, a.den_ * b.den_);
  }
  RatFunc2 inv() const {
    require(!is_zero(), errc::PreconditionViolated, "inverse of zero rational function");
    return RatFunc2(den_, num_);
  }
  friend RatFunc2 operator/(const RatFunc2& a, const RatFunc2& b) { return a * b.inv(); }
  RatFunc2 pow(long e) const {
    if (e < 0) return inv().pow(-e);
    return RatFunc2(num_.pow(e), den_.pow(e));
  }
  friend bool operator==(const RatFunc2& a, const RatFunc2& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc2& a, const RatFunc2& b) { return !(a == b); }

  // Value at a point where the denominator does not vanish.
  FieldElem eval(const FieldElem& a, const FieldElem& b) const {
    FieldElem d = den_.eval(a, b);
    require(!d.is_zero(), errc::PreconditionViolated, "pole at evaluation point");
    return num_.eval(a, b) / d;
  }

  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    auto wrap = [](const std::string& s) {
      return s.find_first_of("+-") != std::string::npos || s.find('*') != std::string::npos
                 ? "(" + s + ")"
                 : s;
    };
    return wrap(num_.to_string()) + "/" + wrap(den_.to_string());
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Poly2::constant(field()->one());
      return;
    }
    Poly2 g = poly2_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = poly2_div_exact(num_, g);
      den_ = poly2_div_exact(den_, g);
    }
    FieldElem l = den_.lead_coeff();
    if (!l.is_one()) {
      FieldElem li = l.inv();
      num_ = li * num_;
      den_ = li * den_;
    }
  }

  Poly2 num_, den_;
};

// Rational function in x and y over F_q (identifiers x, y, g).
inline RatFunc2 parse_ratfunc2(const std::string& s, const Fq* F) {
  auto node = expr::parse_string(s);
  struct Ev {
    const Fq* F;
    RatFunc2 operator()(const expr::NodePtr& n) const {
      switch (n->kind) {
        case expr::Node::Kind::Int:
          return RatFunc2::from_elem(F->from_int(n->ival));
        case expr::Node::Kind::Ident:
          if (n->ident == "x") return RatFunc2::x(F);
          if (n->ident == "y") return RatFunc2::y(F);
          if (n->ident == "g") return RatFunc2::from_elem(F->gen());
          fail(errc::ParseError, "unknown identifier '" + n->ident + "' in surface function");
        case expr::Node::Kind::Unary:
          return -(*this)(n->lhs);
        case expr::Node::Kind::BigO:
          fail(errc::ParseError, "O(...) not allowed in a surface function");
        case expr::Node::Kind::Binary: {
          if (n->op == '^') {
            RatFunc2 b = (*this)(n->lhs);
            return b.pow(expr::eval_int(n->rhs));
          }
          RatFunc2 a = (*this)(n->lhs), b = (*this)(n->rhs);
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
  return Ev{F}(node);
}

inline Poly2 parse_poly2(const std::string& s, const Fq* F) {
  RatFunc2 r = parse_ratfunc2(s, F);
  require(r.is_polynomial(), errc::ParseError, "expected a polynomial, got a denominator");
  return r.num();
}

}  // namespace ramify
