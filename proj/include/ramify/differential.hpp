#pragma once

#include "ramify/laurent.hpp"
#include "ramify/ratfunc.hpp"

namespace ramify {

// Coefficient derivation: trivial for perfect E (rank-1 module on dt), d/du
// for E = F_q(u), where Omega^1 has basis dt, du.
template <class E>
struct coeff_derivation {
  static constexpr bool has_du = false;
  static E d(const E& c) { return c.zero(); }
};
template <>
struct coeff_derivation<RatFunc> {
  static constexpr bool has_du = true;
  static RatFunc d(const RatFunc& c) { return c.derivative(); }
};
// Two-dimensional local field F_q((u))((t)): coefficients are themselves
// truncated series in u, with the formal d/du.
template <>
struct coeff_derivation<LaurentSeries<FieldElem>> {
  static constexpr bool has_du = true;
  static LaurentSeries<FieldElem> d(const LaurentSeries<FieldElem>& c) {
    LaurentSeries<FieldElem> r(c.coeff_sample(), c.prec() - 1);
    long p = c.p();
    for (const auto& [e, ck] : c.coeffs()) {
      long k = ((e % p) + p) % p;
      if (k != 0) r.set_coeff(e - 1, ck * ck.field()->from_int(k));
    }
    return r;
  }
};

// One-form alpha dt + beta du over K = E((t)). For perfect E the beta
// component is inert zero.
template <class E>
struct DifferentialForm {
  LaurentSeries<E> alpha, beta;

  friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
    return {a.alpha + b.alpha, a.beta + b.beta};
  }
  DifferentialForm operator-() const { return {-alpha, -beta}; }
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }
  friend DifferentialForm operator*(const LaurentSeries<E>& s, const DifferentialForm& f) {
    return {s * f.alpha, s * f.beta};
  }
};

// Exterior derivative of a function: d(sum c_e t^e) = sum e c_e t^{e-1} dt
// + sum (dc_e/du) t^e du. The dt part is trusted one exponent lower.
template <class E>
DifferentialForm<E> d_form(const LaurentSeries<E>& a) {
  LaurentSeries<E> alpha(a.coeff_sample(), a.prec() - 1);
  LaurentSeries<E> beta(a.coeff_sample(), a.prec() - 1);
  long p = a.p();
  for (const auto& [e, c] : a.coeffs()) {
    long k = ((e % p) + p) % p;
    if (k != 0) {
      E mult = c.zero();
      for (long i = 0; i < k; ++i) mult = mult + c.one();
      alpha.set_coeff(e - 1, c * mult);
    }
    if constexpr (coeff_derivation<E>::has_du) {
      E dc = coeff_derivation<E>::d(c);
      if (!dc.is_zero() && e < beta.prec()) beta.set_coeff(e, dc);
    }
  }
  return {alpha, beta};
}

// Residue of alpha dt + beta du along t: the t^{-1} coefficient of alpha.
template <class E>
E residue(const DifferentialForm<E>& w) {
  return w.alpha.coeff(-1);
}

// Leading pair of a form at level m in fil_m Omega^1 = m_K^{-m} Omega^1_O.
template <class E>
struct GradedForm {
  long m;
  E c_dt, c_du;
  bool is_zero() const { return c_dt.is_zero() && c_du.is_zero(); }
  friend bool operator==(const GradedForm& a, const GradedForm& b) {
    return a.m == b.m && a.c_dt == b.c_dt && a.c_du == b.c_du;
  }
  friend bool operator!=(const GradedForm& a, const GradedForm& b) { return !(a == b); }
};

template <class E>
GradedForm<E> form_grade(const DifferentialForm<E>& w, long m) {
  require(m >= 1, errc::PreconditionViolated, "grade level must be >= 1");
  require(w.alpha.val_at_least(-m) && w.beta.val_at_least(-m), errc::NotInFiltration,
          "form not in fil_" + std::to_string(m));
  return GradedForm<E>{m, w.alpha.coeff(-m), w.beta.coeff(-m)};
}

}  // namespace ramify
