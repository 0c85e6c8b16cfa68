#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ramify/errors.hpp"
#include "ramify/fq.hpp"

namespace ramify {

// Univariate polynomials over a coefficient field type T. T is a value type
// carrying its own arithmetic context: is_zero/zero/one/inv plus operators.
// Zero polynomial = empty coefficient map; a context sample rides along.
template <class T>
class Poly {
 public:
  explicit Poly(const T& sample) : zero_(sample.zero()) {}

  static Poly zero(const T& sample) { return Poly(sample); }
  static Poly constant(const T& c) {
    Poly r(c);
    if (!c.is_zero()) r.c_.emplace(0, c);
    return r;
  }
  static Poly monomial(const T& c, long e) {
    Poly r(c);
    require(e >= 0, errc::PreconditionViolated, "negative exponent in Poly");
    if (!c.is_zero()) r.c_.emplace(e, c);
    return r;
  }
  static Poly x(const T& sample) { return monomial(sample.one(), 1); }
  static Poly from_coeffs(const T& sample, const std::vector<T>& coeffs) {
    Poly r(sample);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (!coeffs[i].is_zero()) r.c_.emplace(static_cast<long>(i), coeffs[i]);
    return r;
  }

  const T& zero_sample() const { return zero_; }
  bool is_zero() const { return c_.empty(); }
  long degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }
  const std::map<long, T>& coeffs() const { return c_; }
  T coeff(long e) const {
    auto it = c_.find(e);
    return it == c_.end() ? zero_ : it->second;
  }
  T lc() const {
    require(!c_.empty(), errc::ZeroPolynomial, "leading coefficient of zero polynomial");
    return c_.rbegin()->second;
  }
  bool is_one() const { return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second.is_one(); }
  bool is_monic() const { return !c_.empty() && c_.rbegin()->second.is_one(); }

  void set_coeff(long e, const T& v) {
    require(e >= 0, errc::PreconditionViolated, "negative exponent in Poly");
    if (v.is_zero())
      c_.erase(e);
    else
      c_.insert_or_assign(e, v);
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, v] : b.c_) {
      auto it = r.c_.find(e);
      if (it == r.c_.end()) {
        r.c_.emplace(e, v);
      } else {
        T s = it->second + v;
        if (s.is_zero())
          r.c_.erase(it);
        else
          it->second = s;
      }
    }
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  Poly operator-() const {
    Poly r(zero_);
    for (const auto& [e, v] : c_) r.c_.emplace(e, -v);
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.zero_);
    for (const auto& [ea, va] : a.c_)
      for (const auto& [eb, vb] : b.c_) {
        T prod = va * vb;
        if (prod.is_zero()) continue;
        auto it = r.c_.find(ea + eb);
        if (it == r.c_.end()) {
          r.c_.emplace(ea + eb, prod);
        } else {
          T s = it->second + prod;
          if (s.is_zero())
            r.c_.erase(it);
          else
            it->second = s;
        }
      }
    return r;
  }
  friend Poly operator*(const T& s, const Poly& a) { return Poly::constant(s) * a; }
  Poly pow(long e) const {
    require(e >= 0, errc::PreconditionViolated, "negative polynomial power");
    Poly r = constant(zero_.one());
    Poly b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    auto ia = a.c_.begin();
    for (const auto& [e, v] : b.c_) {
      if (ia->first != e || !(ia->second == v)) return false;
      ++ia;
    }
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // Canonical order: by degree, then lexicographic on coefficients high->low.
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (long e = a.degree(); e >= 0; --e) {
      T ca = a.coeff(e), cb = b.coeff(e);
      if (!(ca == cb)) return ca < cb;
    }
    return false;
  }

  static void divrem(const Poly& a, const Poly& b, Poly* q, Poly* r) {
    require(!b.is_zero(), errc::ZeroPolynomial, "division by zero polynomial");
    Poly qq(a.zero_), rr = a;
    T lcinv = b.lc().inv();
    long db = b.degree();
    while (!rr.is_zero() && rr.degree() >= db) {
      long e = rr.degree() - db;
      T c = rr.lc() * lcinv;
      Poly term = monomial(c, e);
      qq = qq + term;
      rr = rr - term * b;
    }
    *q = qq;
    *r = rr;
  }
  friend Poly operator/(const Poly& a, const Poly& b) {
    Poly q(a.zero_), r(a.zero_);
    divrem(a, b, &q, &r);
    return q;
  }
  friend Poly operator%(const Poly& a, const Poly& b) {
    Poly q(a.zero_), r(a.zero_);
    divrem(a, b, &q, &r);
    return r;
  }
  bool divides(const Poly& a) const {  // *this | a
    if (is_zero()) return a.is_zero();
    return (a % *this).is_zero();
  }

  Poly monic() const {
    require(!is_zero(), errc::ZeroPolynomial, "monic of zero polynomial");
    return lc().inv() * *this;
  }

  Poly derivative() const {
    Poly r(zero_);
    for (const auto& [e, v] : c_) {
      if (e == 0) continue;
      T c = v;
      // multiply by e in the prime field
      long k = e % char_of(v);
      T mult = v.zero();
      for (long i = 0; i < k; ++i) mult = mult + v.one();
      c = v * mult;
      if (!c.is_zero()) r.c_.emplace(e - 1, c);
    }
    return r;
  }

  T eval(const T& at) const {
    if (c_.empty()) return zero_;
    T r = zero_;
    long prev = -1;
    // Horner over descending exponents with power gaps
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      if (prev < 0) {
        r = it->second;
      } else {
        long gap = prev - it->first;
        for (long i = 0; i < gap; ++i) r = r * at;
        r = r + it->second;
      }
      prev = it->first;
    }
    for (long i = 0; i < prev; ++i) r = r * at;
    return r;
  }

  Poly compose(const Poly& g) const {  // this(g(x))
    Poly r(zero_);
    long prev = -1;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      if (prev < 0) {
        r = constant(it->second);
      } else {
        for (long i = 0; i < prev - it->first; ++i) r = r * g;
        r = r + constant(it->second);
      }
      prev = it->first;
    }
    for (long i = 0; i < prev; ++i) r = r * g;
    return r;
  }

  std::string to_string(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::string out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      if (!out.empty()) out += "+";
      std::string cs = it->second.to_string();
      bool needs_parens = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos;
      if (it->first == 0) {
        out += needs_parens ? "(" + cs + ")" : cs;
      } else {
        std::string xs = (it->first == 1) ? var : var + "^" + std::to_string(it->first);
        if (it->second.is_one())
          out += xs;
        else
          out += (needs_parens ? "(" + cs + ")" : cs) + "*" + xs;
      }
    }
    return out;
  }

 private:
  template <class U>
  static long char_of(const U& sample) {
    return sample.p();
  }

  std::map<long, T> c_;
  T zero_;
};

template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    Poly<T> r = a % b;
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  return a.monic();
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g and g monic (or zero).
template <class T>
std::array<Poly<T>, 3> poly_ext_gcd(const Poly<T>& a, const Poly<T>& b) {
  Poly<T> r0 = a, r1 = b;
  Poly<T> u0 = Poly<T>::constant(a.zero_sample().one()), u1 = Poly<T>::zero(a.zero_sample());
  Poly<T> v0 = Poly<T>::zero(a.zero_sample()), v1 = Poly<T>::constant(a.zero_sample().one());
  while (!r1.is_zero()) {
    Poly<T> q(a.zero_sample()), r(a.zero_sample());
    Poly<T>::divrem(r0, r1, &q, &r);
    r0 = r1;
    r1 = r;
    Poly<T> u2 = u0 - q * u1, v2 = v0 - q * v1;
    u0 = u1;
    u1 = u2;
    v0 = v1;
    v1 = v2;
  }
  if (r0.is_zero()) return {r0, u0, v0};
  T scale = r0.lc().inv();
  return {r0.monic(), scale * u0, scale * v0};
}

// --- element enumeration over finite coefficient fields -------------------

template <class T>
struct field_enum;  // specialize: size(sample), element(sample, i), key(sample)

template <>
struct field_enum<FieldElem> {
  static long size(const FieldElem& sample) { return sample.field()->q(); }
  static FieldElem element(const FieldElem& sample, long i) { return sample.field()->element_by_index(i); }
  static const void* key(const FieldElem& sample) { return sample.field(); }
};

// Monic polynomials of fixed degree in deterministic order (coefficient tuple
// little-endian in the element index).
template <class T>
Poly<T> monic_poly_by_index(const T& sample, long degree, long index) {
  Poly<T> r = Poly<T>::monomial(sample.one(), degree);
  long q = field_enum<T>::size(sample);
  for (long k = 0; k < degree; ++k) {
    T c = field_enum<T>::element(sample, index % q);
    if (!c.is_zero()) r.set_coeff(k, c);
    index /= q;
  }
  return r;
}

template <class T>
long monic_poly_count(const T& sample, long degree) {
  long q = field_enum<T>::size(sample), n = 1;
  for (long i = 0; i < degree; ++i) {
    require(n < (1L << 40) / q, errc::BudgetExceeded, "monic enumeration too large");
    n *= q;
  }
  return n;
}

// Cached enumeration of monic irreducibles of a fixed degree, built by sieving
// against all lower-degree irreducibles. Desk scale only.
template <class T>
const std::vector<Poly<T>>& monic_irreducibles(const T& sample, long degree) {
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lock(mu);
  static std::map<std::pair<const void*, long>, std::vector<Poly<T>>> cache;
  auto key = std::make_pair(field_enum<T>::key(sample), degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Poly<T>> out;
  if (degree >= 1) {
    std::vector<const std::vector<Poly<T>>*> lower;
    for (long d = 1; d <= degree / 2; ++d) lower.push_back(&monic_irreducibles(sample, d));
    long count = monic_poly_count(sample, degree);
    for (long i = 0; i < count; ++i) {
      Poly<T> f = monic_poly_by_index(sample, degree, i);
      bool red = false;
      for (const auto* lv : lower) {
        for (const auto& g : *lv)
          if (g.divides(f)) {
            red = true;
            break;
          }
        if (red) break;
      }
      if (!red) out.push_back(f);
    }
  }
  return cache.emplace(key, std::move(out)).first->second;
}

template <class T>
bool poly_is_irreducible(const Poly<T>& f) {
  require(!f.is_zero(), errc::ZeroPolynomial, "irreducibility of zero polynomial");
  long d = f.degree();
  if (d == 0) return false;
  if (d == 1) return true;
  for (long k = 1; k <= d / 2; ++k)
    for (const auto& g : monic_irreducibles(f.zero_sample(), k))
      if (g.divides(f)) return false;
  return true;
}

// Factorization into monic irreducibles: unit * prod fac_i^mult_i, factors in
// canonical (degree, lex) order. Deterministic trial division.
template <class T>
struct Factorization {
  T unit;
  std::vector<std::pair<Poly<T>, int>> factors;
};

template <class T>
Factorization<T> poly_factor(const Poly<T>& f) {
  require(!f.is_zero(), errc::ZeroPolynomial, "factor of zero polynomial");
  Factorization<T> out{f.lc(), {}};
  Poly<T> rem = f.monic();
  for (long d = 1; !rem.is_zero() && d <= rem.degree() / 2; ++d) {
    for (const auto& g : monic_irreducibles(rem.zero_sample(), d)) {
      if (rem.degree() < 2 * d) break;
      int mult = 0;
      while (g.divides(rem)) {
        rem = rem / g;
        ++mult;
      }
      if (mult) out.factors.emplace_back(g, mult);
    }
  }
  if (rem.degree() >= 1) out.factors.emplace_back(rem, 1);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace ramify
