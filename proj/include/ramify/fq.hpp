#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ramify/errors.hpp"

namespace ramify {

class FieldElem;

// Immutable arithmetic context for F_{p^n}, p <= 17, n <= 4. The modulus per
// (p, n) is fixed: lexicographically smallest monic irreducible with the class
// of x a generator of the multiplicative group. Checked once at construction.
class Fq {
 public:
  static const Fq* get(int p, int n);
  static const Fq* get_q(long q);  // q = p^n, p <= 17, n <= 4

  int p() const { return p_; }
  int n() const { return n_; }
  long q() const { return q_; }
  int modulus_coeff(int i) const { return mod_[i]; }

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(long v) const;  // reduction Z -> F_p c F_q
  FieldElem gen() const;             // class of x (multiplicative generator)
  FieldElem element(const std::array<std::int16_t, 4>& coords) const;
  FieldElem element_by_index(long i) const;  // base-p digits, 0 <= i < q
  long index_of(const FieldElem& a) const;

 private:
  Fq(int p, int n, std::array<std::int16_t, 5> mod);
  void verify_modulus() const;

  int p_, n_;
  long q_;
  std::array<std::int16_t, 5> mod_;  // c_0..c_n, monic

  friend class FieldElem;
};

class FieldElem {
 public:
  FieldElem() : F_(nullptr), c_{0, 0, 0, 0} {}

  const Fq* field() const { return F_; }
  int p() const { return F_->p(); }
  bool is_zero() const {
    for (int i = 0; i < F_->n(); ++i)
      if (c_[i]) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (int i = 1; i < F_->n(); ++i)
      if (c_[i]) return false;
    return true;
  }

  FieldElem zero() const { return F_->zero(); }
  FieldElem one() const { return F_->one(); }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    a.check_same(b);
    FieldElem r(a.F_);
    for (int i = 0; i < a.F_->n(); ++i) r.c_[i] = static_cast<std::int16_t>((a.c_[i] + b.c_[i]) % a.F_->p());
    return r;
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    a.check_same(b);
    FieldElem r(a.F_);
    int p = a.F_->p();
    for (int i = 0; i < a.F_->n(); ++i) r.c_[i] = static_cast<std::int16_t>(((a.c_[i] - b.c_[i]) % p + p) % p);
    return r;
  }
  FieldElem operator-() const {
    FieldElem r(F_);
    int p = F_->p();
    for (int i = 0; i < F_->n(); ++i) r.c_[i] = static_cast<std::int16_t>((p - c_[i]) % p);
    return r;
  }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    a.check_same(b);
    int n = a.F_->n(), p = a.F_->p();
    std::array<int, 7> prod{};
    for (int i = 0; i < n; ++i)
      if (a.c_[i])
        for (int j = 0; j < n; ++j) prod[i + j] += a.c_[i] * b.c_[j];
    // reduce by monic modulus of degree n
    for (int d = 2 * n - 2; d >= n; --d) {
      int t = prod[d] % p;
      if (t) {
        for (int k = 0; k < n; ++k) prod[d - n + k] -= t * a.F_->modulus_coeff(k);
      }
      prod[d] = 0;
    }
    FieldElem r(a.F_);
    for (int i = 0; i < n; ++i) r.c_[i] = static_cast<std::int16_t>(((prod[i] % p) + p) % p);
    return r;
  }
  FieldElem pow(long e) const {
    long m = F_->q() - 1;
    if (is_zero()) {
      require(e > 0 || e == 0, errc::PreconditionViolated, "0 to a negative power");
      return e == 0 ? one() : *this;
    }
    e %= m;
    if (e < 0) e += m;
    FieldElem r = one(), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  FieldElem inv() const {
    require(!is_zero(), errc::PreconditionViolated, "inverse of zero field element");
    return pow(F_->q() - 2);
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inv(); }

  FieldElem frobenius() const { return pow(F_->p()); }           // a -> a^p
  FieldElem pth_root() const {                                    // unique in a perfect field
    long e = 1;
    for (int i = 0; i < F_->n() - 1; ++i) e *= F_->p();
    return pow(e);  // a^(p^(n-1))
  }
  // Trace to the prime field, returned as an integer in [0, p).
  int trace_to_prime() const {
    FieldElem s = *this, t = *this;
    for (int i = 1; i < F_->n(); ++i) {
      t = t.frobenius();
      s = s + t;
    }
    for (int i = 1; i < F_->n(); ++i)
      require(s.c_[i] == 0, errc::PreconditionViolated, "trace not in prime field");
    return s.c_[0];
  }
  // Value of a prime-field element as an integer in [0, p).
  int to_int() const {
    for (int i = 1; i < F_->n(); ++i)
      require(c_[i] == 0, errc::PreconditionViolated, "element not in prime field");
    return c_[0];
  }
  int coord(int i) const { return c_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    if (a.F_ != b.F_) return false;
    for (int i = 0; i < a.F_->n(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
  friend bool operator<(const FieldElem& a, const FieldElem& b) {  // canonical order
    for (int i = 3; i >= 0; --i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  std::string to_string() const {
    int n = F_->n();
    std::string out;
    for (int i = n - 1; i >= 0; --i) {
      if (!c_[i]) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(c_[i]);
      } else {
        if (c_[i] != 1) out += std::to_string(c_[i]) + "*";
        out += (i == 1) ? "g" : ("g^" + std::to_string(i));
      }
    }
    return out.empty() ? "0" : out;
  }

 private:
  explicit FieldElem(const Fq* F) : F_(F), c_{0, 0, 0, 0} {}
  void check_same(const FieldElem& b) const {
    require(F_ == b.F_, errc::PreconditionViolated, "field elements from different fields");
  }

  const Fq* F_;
  std::array<std::int16_t, 4> c_;

  friend class Fq;
};

inline FieldElem Fq::zero() const { return FieldElem(this); }
inline FieldElem Fq::one() const { return from_int(1); }
inline FieldElem Fq::from_int(long v) const {
  FieldElem r(this);
  long t = v % p_;
  if (t < 0) t += p_;
  r.c_[0] = static_cast<std::int16_t>(t);
  return r;
}
inline FieldElem Fq::gen() const {
  if (n_ == 1) {
    // class of x in F_p[x]/(x - r): the baked primitive root r
    return from_int((p_ - mod_[0]) % p_);
  }
  FieldElem r(this);
  r.c_[1] = 1;
  return r;
}
inline FieldElem Fq::element(const std::array<std::int16_t, 4>& coords) const {
  FieldElem r(this);
  for (int i = 0; i < n_; ++i) {
    require(0 <= coords[static_cast<std::size_t>(i)] && coords[static_cast<std::size_t>(i)] < p_,
            errc::PreconditionViolated, "coordinate out of range");
    r.c_[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
  }
  return r;
}
inline FieldElem Fq::element_by_index(long i) const {
  require(0 <= i && i < q_, errc::PreconditionViolated, "element index out of range");
  FieldElem r(this);
  for (int k = 0; k < n_; ++k) {
    r.c_[static_cast<std::size_t>(k)] = static_cast<std::int16_t>(i % p_);
    i /= p_;
  }
  return r;
}
inline long Fq::index_of(const FieldElem& a) const {
  long i = 0;
  for (int k = n_ - 1; k >= 0; --k) i = i * p_ + a.coord(k);
  return i;
}

inline Fq::Fq(int p, int n, std::array<std::int16_t, 5> mod) : p_(p), n_(n), mod_(mod) {
  q_ = 1;
  for (int i = 0; i < n; ++i) q_ *= p;
  verify_modulus();
}

namespace detail {
struct ModulusRow {
  int p, n;
  std::array<std::int16_t, 5> coeffs;  // c_0..c_n
};
// Deterministic table: per (p, n), lexicographically smallest monic irreducible
// (coefficient tuple (c_{n-1},...,c_0)) whose root x is a multiplicative generator.
inline const ModulusRow* modulus_table(int* count) {
  static const ModulusRow rows[] = {
      {2, 1, {1, 1, 0, 0, 0}},   {2, 2, {1, 1, 1, 0, 0}},   {2, 3, {1, 1, 0, 1, 0}},
      {2, 4, {1, 1, 0, 0, 1}},   {3, 1, {1, 1, 0, 0, 0}},   {3, 2, {2, 1, 1, 0, 0}},
      {3, 3, {1, 2, 0, 1, 0}},   {3, 4, {2, 1, 0, 0, 1}},   {5, 1, {3, 1, 0, 0, 0}},
      {5, 2, {2, 1, 1, 0, 0}},   {5, 3, {2, 3, 0, 1, 0}},   {5, 4, {2, 2, 1, 0, 1}},
      {7, 1, {4, 1, 0, 0, 0}},   {7, 2, {3, 1, 1, 0, 0}},   {7, 3, {2, 3, 0, 1, 0}},
      {7, 4, {5, 3, 1, 0, 1}},   {11, 1, {9, 1, 0, 0, 0}},  {11, 2, {7, 1, 1, 0, 0}},
      {11, 3, {4, 1, 0, 1, 0}},  {11, 4, {2, 1, 0, 0, 1}},  {13, 1, {11, 1, 0, 0, 0}},
      {13, 2, {2, 1, 1, 0, 0}},  {13, 3, {6, 1, 0, 1, 0}},  {13, 4, {2, 1, 1, 0, 1}},
      {17, 1, {14, 1, 0, 0, 0}}, {17, 2, {3, 1, 1, 0, 0}},  {17, 3, {3, 1, 0, 1, 0}},
      {17, 4, {11, 1, 0, 0, 1}},
  };
  *count = static_cast<int>(sizeof(rows) / sizeof(rows[0]));
  return rows;
}
}  // namespace detail

inline const Fq* Fq::get(int p, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Fq>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, n);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second.get();
  int count = 0;
  const detail::ModulusRow* rows = detail::modulus_table(&count);
  for (int i = 0; i < count; ++i) {
    if (rows[i].p == p && rows[i].n == n) {
      auto ctx = std::unique_ptr<Fq>(new Fq(p, n, rows[i].coeffs));
      const Fq* raw = ctx.get();
      registry.emplace(key, std::move(ctx));
      return raw;
    }
  }
  fail(errc::Unsupported, "no modulus table entry for p=" + std::to_string(p) + ", n=" + std::to_string(n));
}

inline const Fq* Fq::get_q(long q) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17};
  for (int p : primes) {
    long t = q;
    int n = 0;
    while (t % p == 0 && t > 1) {
      t /= p;
      ++n;
    }
    if (t == 1 && n >= 1 && n <= 4) return get(p, n);
  }
  fail(errc::Unsupported, "q=" + std::to_string(q) + " is not p^n with p<=17, n<=4");
}

// Startup verification: modulus irreducible of the right degree and x primitive.
inline void Fq::verify_modulus() const {
  require(mod_[static_cast<std::size_t>(n_)] == 1, errc::PreconditionViolated, "modulus not monic");
  // Arithmetic on polynomials mod (modulus, p), coefficients low->high.
  auto mulmod = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i])
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p_;
    for (int d = static_cast<int>(r.size()) - 1; d >= n_; --d) {
      int t = r[static_cast<std::size_t>(d)];
      if (t)
        for (int k = 0; k < n_; ++k) {
          int& slot = r[static_cast<std::size_t>(d - n_ + k)];
          slot = ((slot - t * mod_[static_cast<std::size_t>(k)]) % p_ + p_) % p_;
        }
      r.pop_back();
    }
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    return r;
  };
  auto powmod = [&](std::vector<int> b, long e) {
    std::vector<int> r{1};
    while (e) {
      if (e & 1) r = mulmod(r, b);
      b = mulmod(b, b);
      e >>= 1;
    }
    return r;
  };
  const std::vector<int> x{0, 1};
  if (n_ > 1) {
    // irreducibility: x^(p^n) == x, x^(p^(n/l)) != x for prime l | n
    std::vector<std::vector<int>> frob;  // x^(p^(k+1))
    std::vector<int> cur = x;
    for (int k = 0; k < n_; ++k) {
      cur = powmod(cur, p_);
      frob.push_back(cur);
    }
    require(frob[static_cast<std::size_t>(n_ - 1)] == x, errc::PreconditionViolated, "modulus is not irreducible");
    for (int l = 2; l <= n_; ++l) {
      if (n_ % l == 0 && (l == 2 || l == 3)) {
        require(frob[static_cast<std::size_t>(n_ / l - 1)] != x, errc::PreconditionViolated,
                "modulus is not irreducible");
      }
    }
  }
  // primitivity of x (n == 1: of the root r)
  long m = q_ - 1;
  std::vector<int> base = (n_ == 1) ? std::vector<int>{(p_ - mod_[0]) % p_} : x;
  long t = m;
  for (long l = 2; l * l <= t; ++l) {
    if (t % l == 0) {
      require(powmod(base, m / l) != std::vector<int>{1}, errc::PreconditionViolated, "x is not primitive");
      while (t % l == 0) t /= l;
    }
  }
  if (t > 1 && t < m + 1 && m % t == 0 && t != 1) {
    require(powmod(base, m / t) != std::vector<int>{1}, errc::PreconditionViolated, "x is not primitive");
  }
  if (m == 1) return;  // F_2: trivial group
}

}  // namespace ramify
