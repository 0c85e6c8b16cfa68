#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>

#include "ramify/errors.hpp"

namespace ramify {

// Truncated Laurent series over a coefficient field E: trusted modulo t^prec,
// all stored exponents < prec, no stored zeros. A series with no stored terms
// is "zero to precision"; its true valuation is only known to be >= prec, so
// exact-valuation queries on it raise InsufficientPrecision.
//
// Precision propagation: add min(Na, Nb); mul min(Na + v(b), Nb + v(a)) with
// v(x) read as N(x) for zero-to-precision inputs; inv Na - 2 v(a).
template <class E>
class LaurentSeries {
 public:
  LaurentSeries(const E& sample, long prec) : ezero_(sample.zero()), prec_(prec) {}

  static LaurentSeries zero(const E& sample, long prec) { return LaurentSeries(sample, prec); }
  static LaurentSeries monomial(const E& c, long e, long prec) {
    LaurentSeries r(c, prec);
    if (!c.is_zero() && e < prec) r.c_.emplace(e, c);
    return r;
  }
  static LaurentSeries one(const E& sample, long prec) { return monomial(sample.one(), 0, prec); }
  static LaurentSeries t(const E& sample, long prec) { return monomial(sample.one(), 1, prec); }

  const E& coeff_sample() const { return ezero_; }
  long prec() const { return prec_; }
  const std::map<long, E>& coeffs() const { return c_; }
  int p() const { return ezero_.p(); }

  bool is_zero_to_precision() const { return c_.empty(); }
  // Coefficient-field concept hooks (nested series): "zero" means zero to
  // precision; context-preserving zero/one reuse this series' precision.
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second.is_one(); }
  LaurentSeries zero() const { return LaurentSeries(ezero_, prec_); }
  LaurentSeries one() const { return one(ezero_, prec_); }

  // Exact valuation; raises on zero-to-precision input.
  long val() const {
    require(!c_.empty(), errc::InsufficientPrecision,
            "valuation of a series that vanishes to precision " + std::to_string(prec_));
    return c_.begin()->first;
  }
  // Decidable form: is v(a) >= k? Exact unless zero-to-precision with k > prec.
  bool val_at_least(long k) const {
    if (!c_.empty()) return c_.begin()->first >= k;
    require(k <= prec_, errc::InsufficientPrecision,
            "valuation bound " + std::to_string(k) + " beyond precision " + std::to_string(prec_));
    return true;
  }
  E leading_coeff() const {
    require(!c_.empty(), errc::InsufficientPrecision, "leading coefficient of vanishing series");
    return c_.begin()->second;
  }
  E coeff(long e) const {
    require(e < prec_, errc::InsufficientPrecision, "coefficient beyond precision");
    auto it = c_.find(e);
    return it == c_.end() ? ezero_ : it->second;
  }

  void set_coeff(long e, const E& v) {
    require(e < prec_, errc::PreconditionViolated, "coefficient at or beyond precision");
    if (v.is_zero())
      c_.erase(e);
    else
      c_.insert_or_assign(e, v);
  }

  LaurentSeries truncated(long new_prec) const {
    require(new_prec <= prec_, errc::PreconditionViolated, "cannot raise precision by truncation");
    LaurentSeries r(ezero_, new_prec);
    for (const auto& [e, v] : c_) {
      if (e < new_prec) r.c_.emplace(e, v);
    }
    return r;
  }

  LaurentSeries shifted(long k) const {  // multiply by t^k
    LaurentSeries r(ezero_, prec_ + k);
    for (const auto& [e, v] : c_) r.c_.emplace(e + k, v);
    return r;
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries r(a.ezero_, std::min(a.prec_, b.prec_));
    for (const auto& [e, v] : a.c_)
      if (e < r.prec_) r.c_.emplace(e, v);
    for (const auto& [e, v] : b.c_) {
      if (e >= r.prec_) continue;
      auto it = r.c_.find(e);
      if (it == r.c_.end()) {
        r.c_.emplace(e, v);
      } else {
        E s = it->second + v;
        if (s.is_zero())
          r.c_.erase(it);
        else
          it->second = s;
      }
    }
    return r;
  }
  LaurentSeries operator-() const {
    LaurentSeries r(ezero_, prec_);
    for (const auto& [e, v] : c_) r.c_.emplace(e, -v);
    return r;
  }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    long va = a.c_.empty() ? a.prec_ : a.c_.begin()->first;
    long vb = b.c_.empty() ? b.prec_ : b.c_.begin()->first;
    long prec = std::min(a.prec_ + vb, b.prec_ + va);
    LaurentSeries r(a.ezero_, prec);
    for (const auto& [ea, ca] : a.c_)
      for (const auto& [eb, cb] : b.c_) {
        long e = ea + eb;
        if (e >= prec) continue;
        E prod = ca * cb;
        if (prod.is_zero()) continue;
        auto it = r.c_.find(e);
        if (it == r.c_.end()) {
          r.c_.emplace(e, prod);
        } else {
          E s = it->second + prod;
          if (s.is_zero())
            r.c_.erase(it);
          else
            it->second = s;
        }
      }
    return r;
  }
  friend LaurentSeries operator*(const E& s, const LaurentSeries& a) {
    LaurentSeries r(a.ezero_, a.prec_);
    for (const auto& [e, v] : a.c_) {
      E prod = s * v;
      if (!prod.is_zero()) r.c_.emplace(e, prod);
    }
    return r;
  }

  // Inverse: a = c t^v (1 + r), 1/a = c^{-1} t^{-v} sum (-r)^k. Result trusted
  // modulo t^(prec - 2v).
  LaurentSeries inv() const {
    require(!c_.empty(), errc::InsufficientPrecision, "inverse of a series that vanishes to precision");
    long v = c_.begin()->first;
    E lead = c_.begin()->second;
    long out_prec = prec_ - 2 * v;
    long nterms = prec_ - v;  // trusted terms of (1 + r)
    require(nterms >= 1, errc::InsufficientPrecision, "no trusted term in inverse");
    // u = a / (c t^v) = 1 + r with r of valuation >= 1, trusted mod t^nterms
    LaurentSeries r_ser(ezero_, nterms);
    E linv = lead.inv();
    for (const auto& [e, c] : c_) {
      if (e == v) continue;
      r_ser.c_.emplace(e - v, linv * c);
    }
    LaurentSeries acc = one(ezero_, nterms);
    LaurentSeries term = one(ezero_, nterms);
    for (long k = 1; k < nterms; ++k) {
      term = term * (-r_ser);
      term = term.truncated(std::min(term.prec(), nterms));
      if (term.c_.empty()) break;
      acc = acc + term;
    }
    LaurentSeries out = acc.shifted(-v);
    out = linv * out;
    LaurentSeries res(ezero_, out_prec);
    for (const auto& [e, c] : out.c_)
      if (e < out_prec) res.c_.emplace(e, c);
    return res;
  }
  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return a * b.inv(); }

  LaurentSeries pow(long e) const {
    if (e < 0) return inv().pow(-e);
    if (e == 0) return one(ezero_, prec_ - (c_.empty() ? 0 : 0));
    LaurentSeries b = *this;
    LaurentSeries r = b;
    // square-and-multiply keeping precision propagation of mul
    --e;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  // Componentwise p-th power (exact in characteristic p): exponents scale by p,
  // coefficients by Frobenius, precision scales by p.
  LaurentSeries frobenius() const {
    long p = ezero_.p();
    LaurentSeries r(ezero_, p * prec_);
    for (const auto& [e, v] : c_) r.c_.emplace(p * e, v.pow(p));
    return r;
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.prec_ == b.prec_ && a.c_ == b.c_;
  }
  friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) { return !(a == b); }
  // Equality of trusted parts on the common precision window.
  friend bool agree_to_common_precision(const LaurentSeries& a, const LaurentSeries& b) {
    long n = std::min(a.prec_, b.prec_);
    auto ia = a.c_.begin(), ib = b.c_.begin();
    while (ia != a.c_.end() && ia->first < n && ib != b.c_.end() && ib->first < n) {
      if (ia->first != ib->first || !(ia->second == ib->second)) return false;
      ++ia;
      ++ib;
    }
    while (ia != a.c_.end() && ia->first < n) return false;
    while (ib != b.c_.end() && ib->first < n) return false;
    return true;
  }

  std::string to_string(const std::string& var = "t") const;  // defined in io.hpp

 private:
  std::map<long, E> c_;
  E ezero_;
  long prec_;
};

// Working precision policy: generous default from the target pole bound and
// Witt length, doubled on InsufficientPrecision up to a hard cap.
inline long default_precision(long target_bound, long witt_length) {
  return 2 * (target_bound + witt_length) + 8;
}
constexpr long kPrecisionCap = 256;

// Sentinel precision for exact Laurent polynomials.  Large enough that it
// never clips a real computation, small enough that precision arithmetic
// (sums of a handful of these) stays far from overflow.
constexpr long kExactPrec = 1000000000L;

template <class F>
auto with_precision_retry(long initial, F&& body) -> decltype(body(initial)) {
  long n = initial;
  for (;;) {
    try {
      return body(n);
    } catch (const Error& e) {
      if (e.code() != errc::InsufficientPrecision || n >= kPrecisionCap) throw;
      n = std::min(2 * n, kPrecisionCap);
    }
  }
}

}  // namespace ramify
