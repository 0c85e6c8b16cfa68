#pragma once

#include <utility>

#include "ramify/errors.hpp"
#include "ramify/laurent.hpp"
#include "ramify/places.hpp"
#include "ramify/quotfield.hpp"

namespace ramify {

namespace localdetail {

// multiplicity of f in g, dividing g down in place
inline long strip_factor(Poly<FieldElem>* g, const Poly<FieldElem>& f) {
  long m = 0;
  Poly<FieldElem> q(g->zero_sample()), r(g->zero_sample());
  while (!g->is_zero()) {
    Poly<FieldElem>::divrem(*g, f, &q, &r);
    if (!r.is_zero()) break;
    *g = q;
    ++m;
  }
  return m;
}

inline Poly<FieldElem> mulmod(const Poly<FieldElem>& a, const Poly<FieldElem>& b,
                              const Poly<FieldElem>& m) {
  return (a * b) % m;
}

inline Poly<FieldElem> invmod(const Poly<FieldElem>& a, const Poly<FieldElem>& m) {
  auto [g, u, v] = poly_ext_gcd(a % m, m);
  require(g.is_one(), errc::PreconditionViolated, "invmod of a non-unit");
  (void)v;
  return u % m;
}

// evaluate c at A modulo m (Horner)
inline Poly<FieldElem> compose_mod(const Poly<FieldElem>& c, const Poly<FieldElem>& A,
                                   const Poly<FieldElem>& m) {
  Poly<FieldElem> r(c.zero_sample());
  long d = c.degree();
  for (long k = d; k >= 0; --k) {
    r = mulmod(r, A, m);
    FieldElem ck = c.coeff(k);
    if (!ck.is_zero()) r = r + Poly<FieldElem>::constant(ck);
  }
  return r;
}

// Root of f in F_q[x]/(f^N) congruent to x mod f, by Newton iteration; f is
// separable, so f'(A) stays a unit.
inline Poly<FieldElem> hensel_root(const Poly<FieldElem>& f, const Poly<FieldElem>& fN) {
  Poly<FieldElem> A = Poly<FieldElem>::x(f.zero_sample());
  Poly<FieldElem> fp = f.derivative();
  for (int iter = 0; iter < 64; ++iter) {
    Poly<FieldElem> val = compose_mod(f, A, fN);
    if (val.is_zero()) return A;
    Poly<FieldElem> slope = invmod(compose_mod(fp, A, fN), fN);
    A = (A - val * slope) % fN;
  }
  fail(errc::NonTermination, "Hensel iteration did not converge");
}

}  // namespace localdetail

// Expansion of g at infinity in the uniformizer t = 1/x.
inline LaurentSeries<FieldElem> expand_at_infinity(const RatFunc& g, long prec) {
  const Fq* F = g.base_field();
  if (g.is_zero()) return LaurentSeries<FieldElem>::zero(F->zero(), prec);
  auto reversed = [&](const Poly<FieldElem>& a, long target) {
    // a(x) = x^{deg a} * rev(t) with rev(0) = lc(a)
    LaurentSeries<FieldElem> r(F->zero(), target);
    long d = a.degree();
    for (const auto& [e, c] : a.coeffs())
      if (d - e < target) r.set_coeff(d - e, c);
    return r;
  };
  long shift = g.den().degree() - g.num().degree();
  long unit_prec = prec - shift;
  if (unit_prec <= 0) return LaurentSeries<FieldElem>::zero(F->zero(), prec);
  LaurentSeries<FieldElem> nu = reversed(g.num(), unit_prec);
  LaurentSeries<FieldElem> de = reversed(g.den(), unit_prec);
  return (nu / de).shifted(shift).truncated(prec);
}

// Expansion of g at a finite place v in the uniformizer t_v = f_v, with
// digits in k(v) lifted through the Hensel root of f_v in F_q[x]/(f_v^N).
inline LaurentSeries<QuotElem> expand_at_finite(const RatFunc& g, const Place& v, long prec) {
  using localdetail::strip_factor;
  require(!v.is_infinite(), errc::PreconditionViolated, "expand_at_finite at infinity");
  QuotCtxPtr K = quot_ctx(v.poly());
  QuotElem kzero = QuotElem::from_base(K, K->base->zero());
  if (g.is_zero()) return LaurentSeries<QuotElem>(kzero, prec);

  const Poly<FieldElem>& f = v.poly();
  Poly<FieldElem> nu = g.num(), de = g.den();
  long val = strip_factor(&nu, f) - strip_factor(&de, f);
  long digits = prec - val;
  if (digits <= 0) return LaurentSeries<QuotElem>(kzero, prec);

  Poly<FieldElem> fN = f.pow(digits);
  Poly<FieldElem> h = localdetail::mulmod(nu, localdetail::invmod(de, fN), fN);
  Poly<FieldElem> A = localdetail::hensel_root(f, fN);

  LaurentSeries<QuotElem> out(kzero, prec);
  for (long i = 0; i < digits; ++i) {
    Poly<FieldElem> ci = h % f;
    if (!ci.is_zero()) out.set_coeff(val + i, QuotElem(K, ci));
    if (i + 1 == digits) break;
    Poly<FieldElem> fM = f.pow(digits - i);
    Poly<FieldElem> lift = localdetail::compose_mod(ci, A % fM, fM);
    h = ((h - lift) % fM) / f;
  }
  return out;
}

// Uniform expansion: at infinity the residue field F_q is wrapped as the
// degree-1 quotient F_q[x]/(x).
inline LaurentSeries<QuotElem> expand_at(const RatFunc& g, const Place& v, long prec) {
  if (!v.is_infinite()) return expand_at_finite(g, v, prec);
  QuotCtxPtr K = quot_ctx(Poly<FieldElem>::x(v.field()->zero()));
  LaurentSeries<FieldElem> base = expand_at_infinity(g, prec);
  LaurentSeries<QuotElem> out(QuotElem::from_base(K, v.field()->zero()), prec);
  for (const auto& [e, c] : base.coeffs()) out.set_coeff(e, QuotElem::from_base(K, c));
  return out;
}

// Value of g at an unramified point: g regular at v required.
inline QuotElem value_at(const RatFunc& g, const Place& v) {
  if (v.is_infinite()) {
    QuotCtxPtr K = quot_ctx(Poly<FieldElem>::x(v.field()->zero()));
    long shift = g.den().degree() - g.num().degree();
    require(g.is_zero() || shift >= 0, errc::PreconditionViolated, "pole at infinity");
    if (g.is_zero() || shift > 0) return QuotElem::from_base(K, v.field()->zero());
    return QuotElem::from_base(K, g.num().lc() / g.den().lc());
  }
  QuotCtxPtr K = quot_ctx(v.poly());
  QuotElem de = QuotElem(K, g.den() % v.poly());
  require(!de.is_zero(), errc::PreconditionViolated, "pole at the place");
  return QuotElem(K, g.num() % v.poly()) / de;
}

}  // namespace ramify
