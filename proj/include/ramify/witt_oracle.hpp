#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "ramify/witt.hpp"

namespace ramify {

// Brute-force conductor reference for s <= 2, used to cross-check the
// best-form reduction: minimizes the filtration level of w + (1-F)v over an
// exhaustive window of perturbations v.  Deliberately avoids the universal
// polynomial engine; the length-2 carry is written out directly.

namespace oracle {

using SMap = std::map<long, FieldElem>;  // exact Laurent polynomial

inline SMap from_series(const LaurentSeries<FieldElem>& s) {
  SMap m;
  for (const auto& [e, c] : s.coeffs()) m.emplace(e, c);
  return m;
}
inline void add_into(SMap& a, long e, const FieldElem& c) {
  auto it = a.find(e);
  if (it == a.end()) {
    if (!c.is_zero()) a.emplace(e, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) a.erase(it);
}
inline SMap madd(const SMap& a, const SMap& b) {
  SMap r = a;
  for (const auto& [e, c] : b) add_into(r, e, c);
  return r;
}
inline SMap mneg(const SMap& a) {
  SMap r;
  for (const auto& [e, c] : a) r.emplace(e, -c);
  return r;
}
inline SMap mmul(const SMap& a, const SMap& b) {
  SMap r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) add_into(r, ea + eb, ca * cb);
  return r;
}
inline SMap mpow(const SMap& a, long k) {
  require(k >= 1, errc::PreconditionViolated, "mpow needs a positive exponent");
  SMap r;
  bool have = false;
  SMap base = a;
  while (k > 0) {
    if (k & 1) {
      r = have ? mmul(r, base) : base;
      have = true;
    }
    base = mmul(base, base);
    k >>= 1;
  }
  return r;
}
inline SMap mfrob(const SMap& a, int p) {  // x -> x^p, coefficientwise power and exponent stretch
  SMap r;
  for (const auto& [e, c] : a) r.emplace(e * p, c.pow(p));
  return r;
}

// Length-2 addition carry: -(1/p) sum_{0<k<p} C(p,k) x^k y^(p-k).
inline SMap carry2(const SMap& x, const SMap& y, int p) {
  std::vector<long long> binom(static_cast<std::size_t>(p) + 1, 0);
  binom[0] = 1;
  for (int row = 1; row <= p; ++row)
    for (int k = row; k >= 1; --k) binom[static_cast<std::size_t>(k)] += binom[static_cast<std::size_t>(k) - 1];
  SMap r;
  if (x.empty() || y.empty()) return r;
  const Fq* F = x.begin()->second.field();
  for (int k = 1; k < p; ++k) {
    long long c = binom[static_cast<std::size_t>(k)] / p;  // exact: p | C(p,k) for 0<k<p
    FieldElem ce = F->from_int(-c);
    if (ce.is_zero()) continue;
    SMap term = mmul(mpow(x, k), mpow(y, p - k));
    for (const auto& [e, tc] : term) add_into(r, e, ce * tc);
  }
  return r;
}

// Witt negation in coordinates: componentwise minus for odd p; for p = 2 the
// second slot picks up the square of the first.
inline std::pair<SMap, SMap> neg2(const SMap& a0, const SMap& a1, int p) {
  if (p != 2) return {mneg(a0), mneg(a1)};
  return {a0, madd(mmul(a0, a0), a1)};
}

// (x0,x1) + (y0,y1) = (x0+y0, x1+y1+carry(x0,y0)).
inline std::pair<SMap, SMap> add2(const SMap& x0, const SMap& x1, const SMap& y0, const SMap& y1, int p) {
  return {madd(x0, y0), madd(madd(x1, y1), carry2(x0, y0, p))};
}

constexpr long kNoPole = 1L << 40;

inline long mval(const SMap& a) { return a.empty() ? kNoPole : a.begin()->first; }

// Valuation of a + b without materializing the sum.
inline long mval_sum(const SMap& a, const SMap& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) return ia->first;
    if (ia == a.end() || ib->first < ia->first) return ib->first;
    if (!(ia->second + ib->second).is_zero()) return ia->first;
    ++ia;
    ++ib;
  }
  return kNoPole;
}

// Filtration level of a fixed vector from its slot valuations: with
// M = max_i p^i (-v(a_i)) the level is M when every slot attaining M sits
// below the truncation break (p^(i+1) | M), else M + 1; integral vectors
// sit at level 0.
inline long box_conductor(int p, const std::vector<long>& vals) {
  int s = static_cast<int>(vals.size());
  long M = 0;
  for (int j = 0; j < s; ++j) {
    if (vals[static_cast<std::size_t>(j)] >= 0) continue;
    long wt = 1;
    for (int k = 0; k < s - 1 - j; ++k) wt *= p;
    M = std::max(M, -wt * vals[static_cast<std::size_t>(j)]);
  }
  if (M == 0) return 0;
  bool all_below_break = true;
  for (int j = 0; j < s; ++j) {
    if (vals[static_cast<std::size_t>(j)] >= 0) continue;
    long wt = 1;
    for (int k = 0; k < s - 1 - j; ++k) wt *= p;
    if (-wt * vals[static_cast<std::size_t>(j)] != M) continue;
    int i = s - 1 - j;
    long pe = 1;
    for (int k = 0; k <= i; ++k) pe *= p;
    if (M % pe != 0) all_below_break = false;
  }
  return all_below_break ? M : M + 1;
}

// Enumerate exact Laurent polynomials supported on [-d, -1] with coefficients
// drawn from a fixed list (the coefficient space).
inline SMap window_poly(const std::vector<FieldElem>& space, long d,
                        unsigned long long index) {
  SMap m;
  unsigned long long base = space.size();
  for (long e = -d; e <= -1; ++e) {
    const FieldElem& c = space[static_cast<size_t>(index % base)];
    index /= base;
    if (!c.is_zero()) m.emplace(e, c);
  }
  return m;
}

}  // namespace oracle

// Brute-force minimum of the box conductor of w + (1-F)v over perturbations v
// with poles <= pole_budget and coefficients from coeff_space (empty = all of
// F_q).  A minimizer is never deeper than fil^log_{M/p}: if v has a slot of
// log-weight > M/p then (1-F)v has one of weight > M, which w (weight <= M)
// cannot cancel, so that candidate's box conductor already exceeds box(w).
// The enumeration windows are clipped accordingly.
inline long conductor_oracle(const WittSeries<FieldElem>& w, long pole_budget = 0,
                             const std::vector<FieldElem>& coeff_space = {}) {
  using namespace oracle;
  int s = w.length();
  int p = w.p();
  require(s <= 2, errc::Unsupported, "conductor oracle covers lengths 1 and 2");
  require(pole_budget <= 6, errc::BudgetExceeded, "conductor oracle pole budget capped at 6");
  const Fq* F = nullptr;
  std::vector<SMap> wx;
  long deepest = 0;
  for (int j = 0; j < s; ++j) {
    wx.push_back(from_series(w.std_comp(j)));
    deepest = std::max(deepest, -mval(wx.back()));
    if (F == nullptr && !wx.back().empty()) F = wx.back().begin()->second.field();
  }
  if (F == nullptr) return 0;

  long M = 0;
  for (int j = 0; j < s; ++j) {
    long pole = -mval(wx[static_cast<size_t>(j)]);
    if (pole > 0) M = std::max(M, static_cast<long>(wittdetail::ipow64(p, s - 1 - j)) * pole);
  }
  if (M == 0) return 0;

  std::vector<FieldElem> space = coeff_space;
  if (space.empty())
    for (long i = 0; i < F->q(); ++i) space.push_back(F->element_by_index(i));
  if (std::find_if(space.begin(), space.end(), [](const FieldElem& c) {
        return c.is_zero();
      }) == space.end())
    space.insert(space.begin(), F->zero());

  // Slot-j window: poles of v_j at most M / p^{s-j}, clipped by the budget.
  long d0 = M / static_cast<long>(wittdetail::ipow64(p, s));
  long d1 = M / p;
  if (pole_budget > 0) {
    d0 = std::min(d0, pole_budget);
    d1 = std::min(d1, pole_budget);
  }
  unsigned long long base = space.size();

  unsigned long long n0 = 1, n1 = 1;
  for (long i = 0; i < d0; ++i) n0 *= base;
  if (s == 2)
    for (long i = 0; i < d1; ++i) n1 *= base;
  require(n1 <= (1ULL << 22) && n0 * n1 <= (1ULL << 23), errc::BudgetExceeded,
          "conductor oracle window too large");

  long best = kNoPole;
  if (s == 1) {
    for (unsigned long long i = 0; i < n0; ++i) {
      SMap v = window_poly(space, d0, i);
      SMap w0 = madd(wx[0], madd(v, mneg(mfrob(v, p))));
      best = std::min(best, box_conductor(p, {mval(w0)}));
    }
    return best;
  }

  // Length 2: for z = (1-F)v the second slot splits as (v1 - v1^p) + g(v0),
  // so the inner v1 loop is a two-pointer valuation scan over precomputed
  // polynomials.
  std::vector<SMap> h1(n1);
  for (unsigned long long i = 0; i < n1; ++i) {
    SMap v1 = window_poly(space, d1, i);
    h1[i] = madd(v1, mneg(mfrob(v1, p)));
  }
  for (unsigned long long i0 = 0; i0 < n0; ++i0) {
    SMap v0 = window_poly(space, d0, i0);
    auto [nf0, nf1] = neg2(mfrob(v0, p), SMap{}, p);
    auto [z0, g] = add2(v0, SMap{}, nf0, nf1, p);
    SMap w0p = madd(wx[0], z0);
    SMap a1 = madd(wx[1], madd(g, carry2(wx[0], z0, p)));
    long v0val = mval(w0p);
    for (unsigned long long i1 = 0; i1 < n1; ++i1) {
      long c = box_conductor(p, {v0val, mval_sum(a1, h1[i1])});
      best = std::min(best, c);
      if (best == 0) return 0;
    }
  }
  return best;
}

}  // namespace ramify
