#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ramify/fq.hpp"
#include "ramify/laurent.hpp"

namespace ramify {

// Truncated Witt vectors W_s, s <= 3, over any commutative ring of
// characteristic p given as a component type R with +, *, unary -, zero(),
// one(), frobenius().
//
// Storage convention: comps[j] is the standard Witt coordinate x_j, so the
// ghost components are w_n = sum_{i<=n} p^i x_i^{p^(n-i)}.  Rendered
// left-to-right in the same order, i.e. the Teichmueller slot prints first.
// The a-indexing used by the ramification filtrations counts from the right:
// a_i = comps[s-1-i], which carries weight p^i.

namespace wittdetail {

inline long long chk_add64(long long a, long long b) {
  long long r;
  require(!__builtin_add_overflow(a, b, &r), errc::PreconditionViolated,
          "integer overflow while building universal Witt polynomials");
  return r;
}
inline long long chk_mul64(long long a, long long b) {
  long long r;
  require(!__builtin_mul_overflow(a, b, &r), errc::PreconditionViolated,
          "integer overflow while building universal Witt polynomials");
  return r;
}
inline long long ipow64(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r = chk_mul64(r, b);
  return r;
}

// Sparse integer polynomial in up to six variables: 0..2 are x_0..x_2,
// 3..5 are y_0..y_2.  Exponents stay tiny (<= 25) under the support cap.
using ExpKey = std::array<uint8_t, 6>;

struct IntPoly {
  std::map<ExpKey, long long> c;

  static IntPoly var(int v) {
    IntPoly r;
    ExpKey k{};
    k[static_cast<std::size_t>(v)] = 1;
    r.c[k] = 1;
    return r;
  }
  void add_term(const ExpKey& k, long long v) {
    auto it = c.find(k);
    if (it == c.end()) {
      if (v != 0) c.emplace(k, v);
      return;
    }
    it->second = chk_add64(it->second, v);
    if (it->second == 0) c.erase(it);
  }
  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntPoly r = a;
    for (const auto& [k, v] : b.c) r.add_term(k, v);
    return r;
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    IntPoly r = a;
    for (const auto& [k, v] : b.c) r.add_term(k, -v);
    return r;
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    for (const auto& [ka, va] : a.c)
      for (const auto& [kb, vb] : b.c) {
        ExpKey k;
        for (std::size_t i = 0; i < 6; ++i) {
          int e = ka[i] + kb[i];
          require(e <= 255, errc::PreconditionViolated, "exponent overflow in universal Witt polynomials");
          k[i] = static_cast<uint8_t>(e);
        }
        r.add_term(k, chk_mul64(va, vb));
      }
    return r;
  }
  IntPoly scaled(long long s) const {
    IntPoly r;
    if (s == 0) return r;
    for (const auto& [k, v] : c) r.c[k] = chk_mul64(v, s);
    return r;
  }
  IntPoly pow(int e) const {
    IntPoly r;
    r.c[ExpKey{}] = 1;
    IntPoly base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }
  IntPoly div_exact(long long d) const {
    IntPoly r;
    for (const auto& [k, v] : c) {
      require(v % d == 0, errc::PreconditionViolated, "ghost equation solve hit a non-integral coefficient");
      r.c[k] = v / d;
    }
    return r;
  }
};

// Ghost component w_n in the x-block (side 0) or y-block (side 1).
inline IntPoly ghost(int p, int n, int side) {
  IntPoly w;
  for (int i = 0; i <= n; ++i) {
    IntPoly xi = IntPoly::var(3 * side + i);
    w = w + xi.pow(static_cast<int>(ipow64(p, n - i))).scaled(ipow64(p, i));
  }
  return w;
}

// Solve w_n(R) = T_n for R_0..R_{s-1} by peeling off the lower components.
inline std::vector<IntPoly> solve_ghost(int p, int s, const std::vector<IntPoly>& targets) {
  std::vector<IntPoly> out;
  for (int n = 0; n < s; ++n) {
    IntPoly acc = targets[static_cast<std::size_t>(n)];
    for (int i = 0; i < n; ++i)
      acc = acc - out[static_cast<std::size_t>(i)]
                      .pow(static_cast<int>(ipow64(p, n - i)))
                      .scaled(ipow64(p, i));
    out.push_back(acc.div_exact(ipow64(p, n)));
  }
  return out;
}

struct Term {
  int coeff;  // in [1, p)
  ExpKey e;
};

inline std::vector<Term> reduce_mod_p(const IntPoly& f, int p) {
  std::vector<Term> out;
  for (const auto& [k, v] : f.c) {
    int c = static_cast<int>(((v % p) + p) % p);
    if (c != 0) out.push_back({c, k});
  }
  return out;
}

struct WittOps {
  int p = 0, s = 0;
  std::vector<std::vector<Term>> sum, mul, neg;  // indexed by component
};

inline bool small_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline const WittOps& witt_ops(int p, int s) {
  require(s >= 1 && s <= 3, errc::LengthOverflow, "Witt length must be 1, 2, or 3");
  require(small_prime(p), errc::PreconditionViolated, "Witt vectors need a prime characteristic");
  require(ipow64(p, s - 1) <= 25, errc::Unsupported,
          "unsupported (p, s): universal polynomial support cap is p^(s-1) <= 25");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<WittOps>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({p, s});
  if (it != cache.end()) return *it->second;

  auto ops = std::make_unique<WittOps>();
  ops->p = p;
  ops->s = s;
  std::vector<IntPoly> tsum, tmul, tneg;
  for (int n = 0; n < s; ++n) {
    tsum.push_back(ghost(p, n, 0) + ghost(p, n, 1));
    tmul.push_back(ghost(p, n, 0) * ghost(p, n, 1));
    tneg.push_back(IntPoly{} - ghost(p, n, 0));
  }
  for (const IntPoly& f : solve_ghost(p, s, tsum)) ops->sum.push_back(reduce_mod_p(f, p));
  for (const IntPoly& f : solve_ghost(p, s, tmul)) ops->mul.push_back(reduce_mod_p(f, p));
  for (const IntPoly& f : solve_ghost(p, s, tneg)) ops->neg.push_back(reduce_mod_p(f, p));
  const WittOps& ref = *ops;
  cache.emplace(std::pair<int, int>{p, s}, std::move(ops));
  return ref;
}

template <class R>
R eval_terms(const std::vector<Term>& terms, const std::vector<R>& xs, const std::vector<R>& ys) {
  // Lazy per-variable power tables; exponents are bounded by 25.
  std::array<std::vector<R>, 6> pows;
  auto power = [&](int v, int e) -> const R& {
    auto& tab = pows[static_cast<std::size_t>(v)];
    if (tab.empty()) tab.push_back(v < 3 ? xs[static_cast<std::size_t>(v)] : ys[static_cast<std::size_t>(v - 3)]);
    while (static_cast<int>(tab.size()) < e) tab.push_back(tab.back() * tab.front());
    return tab[static_cast<std::size_t>(e - 1)];
  };
  std::optional<R> acc;
  for (const Term& t : terms) {
    std::optional<R> mono;
    for (int v = 0; v < 6; ++v)
      if (t.e[static_cast<std::size_t>(v)] > 0) {
        const R& pw = power(v, t.e[static_cast<std::size_t>(v)]);
        mono = mono ? *mono * pw : pw;
      }
    R tv = mono ? *mono : xs[0].one();
    R scaled = tv;
    for (int rep = 1; rep < t.coeff; ++rep) scaled = scaled + tv;
    acc = acc ? *acc + scaled : scaled;
  }
  return acc ? *acc : xs[0].zero();
}

}  // namespace wittdetail

template <class R>
class WittVector {
 public:
  WittVector(int p, std::vector<R> comps) : p_(p), x_(std::move(comps)) {
    require(!x_.empty(), errc::LengthMismatch, "Witt vector needs at least one component");
    wittdetail::witt_ops(p_, static_cast<int>(x_.size()));
  }

  int p() const { return p_; }
  int length() const { return static_cast<int>(x_.size()); }
  const std::vector<R>& comps() const { return x_; }
  const R& std_comp(int j) const { return x_.at(static_cast<std::size_t>(j)); }
  const R& a_comp(int i) const { return x_.at(x_.size() - 1 - static_cast<std::size_t>(i)); }
  void set_std_comp(int j, const R& v) { x_.at(static_cast<std::size_t>(j)) = v; }

  friend bool operator==(const WittVector& a, const WittVector& b) {
    return a.p_ == b.p_ && a.x_ == b.x_;
  }
  friend bool operator!=(const WittVector& a, const WittVector& b) { return !(a == b); }

 private:
  int p_;
  std::vector<R> x_;
};

template <class R>
WittVector<R> witt_zero(int p, const R& sample, int s) {
  return WittVector<R>(p, std::vector<R>(static_cast<std::size_t>(s), sample.zero()));
}

// Teichmueller representative (c, 0, ..., 0).
template <class R>
WittVector<R> witt_teichmuller(int p, const R& c, int s) {
  std::vector<R> v(static_cast<std::size_t>(s), c.zero());
  v[0] = c;
  return WittVector<R>(p, std::move(v));
}

namespace wittdetail {
template <class R>
void check_compatible(const WittVector<R>& a, const WittVector<R>& b) {
  require(a.p() == b.p(), errc::LengthMismatch, "Witt vectors over different characteristics");
  require(a.length() == b.length(), errc::LengthMismatch, "Witt vectors of different lengths");
}
}  // namespace wittdetail

template <class R>
WittVector<R> witt_add(const WittVector<R>& a, const WittVector<R>& b) {
  wittdetail::check_compatible(a, b);
  const auto& ops = wittdetail::witt_ops(a.p(), a.length());
  std::vector<R> out;
  for (int n = 0; n < a.length(); ++n)
    out.push_back(wittdetail::eval_terms(ops.sum[static_cast<std::size_t>(n)], a.comps(), b.comps()));
  return WittVector<R>(a.p(), std::move(out));
}

template <class R>
WittVector<R> witt_neg(const WittVector<R>& a) {
  const auto& ops = wittdetail::witt_ops(a.p(), a.length());
  std::vector<R> out;
  for (int n = 0; n < a.length(); ++n)
    out.push_back(wittdetail::eval_terms(ops.neg[static_cast<std::size_t>(n)], a.comps(), a.comps()));
  return WittVector<R>(a.p(), std::move(out));
}

template <class R>
WittVector<R> witt_sub(const WittVector<R>& a, const WittVector<R>& b) {
  return witt_add(a, witt_neg(b));
}

template <class R>
WittVector<R> witt_mul(const WittVector<R>& a, const WittVector<R>& b) {
  wittdetail::check_compatible(a, b);
  const auto& ops = wittdetail::witt_ops(a.p(), a.length());
  std::vector<R> out;
  for (int n = 0; n < a.length(); ++n)
    out.push_back(wittdetail::eval_terms(ops.mul[static_cast<std::size_t>(n)], a.comps(), b.comps()));
  return WittVector<R>(a.p(), std::move(out));
}

// Frobenius on W_s(A) for A of characteristic p acts componentwise.
template <class R>
WittVector<R> witt_frobenius(const WittVector<R>& a) {
  std::vector<R> out;
  for (const R& c : a.comps()) out.push_back(c.frobenius());
  return WittVector<R>(a.p(), std::move(out));
}

// Verschiebung W_s -> W_{s+1}: shifts every standard coordinate up by one,
// i.e. prepends a zero in storage (and display) order.
template <class R>
WittVector<R> witt_verschiebung(const WittVector<R>& a) {
  std::vector<R> out;
  out.push_back(a.comps()[0].zero());
  for (const R& c : a.comps()) out.push_back(c);
  return WittVector<R>(a.p(), std::move(out));
}

template <class R>
WittVector<R> witt_scalar_mul(long n, const WittVector<R>& a) {
  WittVector<R> acc = witt_zero(a.p(), a.comps()[0], a.length());
  WittVector<R> base = n < 0 ? witt_neg(a) : a;
  unsigned long long k = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
  while (k > 0) {
    if (k & 1ULL) acc = witt_add(acc, base);
    base = witt_add(base, base);
    k >>= 1;
  }
  return acc;
}

// --- W_s(F_p) = Z/p^s ------------------------------------------------------

// Ring isomorphism via Teichmueller digits: (x_0,...,x_{s-1}) maps to
// sum_j p^j tau(x_j) with tau(x) = x^(p^(s-1)) mod p^s.
inline long witt_to_int(const WittVector<FieldElem>& w) {
  const Fq* F = w.comps()[0].field();
  require(F->n() == 1, errc::PreconditionViolated, "witt_to_int needs a prime-field Witt vector");
  int p = w.p();
  int s = w.length();
  long ps = static_cast<long>(wittdetail::ipow64(p, s));
  long total = 0;
  long pj = 1;
  for (int j = 0; j < s; ++j) {
    long lift = w.std_comp(j).to_int();
    long tau = 1;
    for (long e = 0; e < wittdetail::ipow64(p, s - 1); ++e) tau = (tau * lift) % ps;
    total = (total + pj * tau) % ps;
    pj *= p;
  }
  return total;
}

inline WittVector<FieldElem> witt_from_int(const Fq* F, long v, int s) {
  require(F->n() == 1, errc::PreconditionViolated, "witt_from_int needs a prime field");
  return witt_scalar_mul(v, witt_teichmuller(static_cast<int>(F->p()), F->one(), s));
}

// --- ramification filtrations on W_s(K), K = E((t)) -------------------------

template <class E>
using WittSeries = WittVector<LaurentSeries<E>>;

namespace wittdetail {
inline long slot_weight(int p, int s, int j) {  // weight of storage slot j: p^(a-index)
  return static_cast<long>(ipow64(p, s - 1 - j));
}
}  // namespace wittdetail

// Logarithmic filtration: w in fil^log_m iff p^i v(a_i) >= -m for all i.
template <class E>
bool in_fillog(const WittSeries<E>& w, long m) {
  require(m >= 0, errc::PreconditionViolated, "fil^log is indexed by m >= 0");
  for (int j = 0; j < w.length(); ++j) {
    long wt = wittdetail::slot_weight(w.p(), w.length(), j);
    if (!w.std_comp(j).val_at_least(-(m / wt))) return false;
  }
  return true;
}

// Non-log filtration via the truncation break: with s' = min(s, ord_p(m)),
// slots with a-index i >= s' must satisfy p^i v(a_i) >= -(m-1), slots below
// the break only p^i v(a_i) >= -m.
template <class E>
bool in_fil(const WittSeries<E>& w, long m) {
  require(m >= 1, errc::PreconditionViolated, "fil is indexed by m >= 1");
  int s = w.length();
  int p = w.p();
  int ordp = 0;
  for (long t = m; t % p == 0 && ordp < s; t /= p) ++ordp;
  for (int j = 0; j < s; ++j) {
    int i = s - 1 - j;
    long wt = wittdetail::slot_weight(p, s, j);
    long bound = i >= ordp ? m - 1 : m;
    if (!w.std_comp(j).val_at_least(-(bound / wt))) return false;
  }
  return true;
}

// Best form: repeatedly absorbs Artin-Schreier-Witt coboundaries (1-F)u with
// u a single Teichmueller-slot monomial, eliminating pole terms of p-divisible
// order whose leading coefficient is a p-th power.  Each slot of the result is
// either regular, or has pole order prime to p, or leads with a non-p-th-power
// coefficient.
template <class E>
WittSeries<E> best_form(const WittSeries<E>& w) {
  int s = w.length();
  int p = w.p();

  long entry_weight = 0;
  for (int j = 0; j < s; ++j) {
    const auto& c = w.std_comp(j);
    if (c.val_at_least(0)) continue;
    entry_weight = std::max(entry_weight, -wittdetail::slot_weight(p, s, j) * c.val());
  }
  const long budget = 10 * (entry_weight + s);

  WittSeries<E> cur = w;
  for (long step = 0; step <= budget; ++step) {
    int pick = -1;
    long pick_weight = 0;
    std::optional<E> pick_root;
    for (int j = 0; j < s; ++j) {
      const auto& c = cur.std_comp(j);
      if (c.val_at_least(0)) continue;
      long v = c.val();
      if (v % p != 0) continue;
      std::optional<E> root;
      try {
        root = c.leading_coeff().pth_root();
      } catch (const Error& e) {
        if (e.code() != errc::NotAPthPower) throw;
        continue;
      }
      long lw = -wittdetail::slot_weight(p, s, j) * v;
      if (pick < 0 || lw > pick_weight) {
        pick = j;
        pick_weight = lw;
        pick_root = root;
      }
    }
    if (pick < 0) return cur;

    const auto& cj = cur.std_comp(pick);
    long v = cj.val();
    require(cj.prec() > v / p, errc::InsufficientPrecision, "best_form needs the slot known past its reduced pole");
    auto u = LaurentSeries<E>::monomial(*pick_root, v / p, cj.prec());
    WittSeries<E> uw = witt_zero(p, cj, s);
    uw.set_std_comp(pick, u);
    // Replace w by w + (1-F)u: the slot's leading term cancels against F(u),
    // any Witt carries land in strictly higher storage slots.
    cur = witt_sub(witt_add(cur, uw), witt_frobenius(uw));
  }
  fail(errc::NonTermination, "best form iteration exceeded its budget");
}

// Artin conductor: 0 when the best form is integral, else the least m >= 1
// with best_form(w) in fil_m.  Never 1 (fil_1 consists of the integral
// classes).
template <class E>
long artin_conductor(const WittSeries<E>& w) {
  WittSeries<E> b = best_form(w);
  if (in_fillog(b, 0)) return 0;
  long cap = 0;
  for (int j = 0; j < b.length(); ++j) {
    const auto& c = b.std_comp(j);
    if (c.val_at_least(0)) continue;
    cap = std::max(cap, -wittdetail::slot_weight(b.p(), b.length(), j) * c.val());
  }
  for (long m = 1; m <= cap + 1; ++m)
    if (in_fil(b, m)) return m;
  fail(errc::PreconditionViolated, "conductor search overran its bound");
}

// Least m >= 0 with best_form(w) in fil^log_m.
template <class E>
long log_conductor(const WittSeries<E>& w) {
  WittSeries<E> b = best_form(w);
  long cap = 0;
  for (int j = 0; j < b.length(); ++j) {
    const auto& c = b.std_comp(j);
    if (c.val_at_least(0)) continue;
    cap = std::max(cap, -wittdetail::slot_weight(b.p(), b.length(), j) * c.val());
  }
  for (long m = 0; m <= cap; ++m)
    if (in_fillog(b, m)) return m;
  fail(errc::PreconditionViolated, "log conductor search overran its bound");
}

}  // namespace ramify
