#pragma once

#include <type_traits>
#include <vector>

#include "ramify/differential.hpp"
#include "ramify/witt.hpp"

namespace ramify {

// Refined Artin conductors and the Milnor-K pairing layer: F^s d into
// one-forms, graded extraction at the conductor, the inverse construction
// over a perfect residue field, V^m membership, rho^m, and the residue
// pairing tau.

// F^s d: W_s(K) -> Omega^1_K, w = (a_{s-1},...,a_0) |-> sum_i a_i^(p^i-1) da_i.
// In storage order slot j carries the exponent p^(s-1-j) - 1.
template <class E>
DifferentialForm<E> fsd(const WittSeries<E>& w) {
  int s = w.length();
  std::optional<DifferentialForm<E>> acc;
  for (int j = 0; j < s; ++j) {
    const auto& xj = w.std_comp(j);
    DifferentialForm<E> term = d_form(xj);
    long e = wittdetail::slot_weight(w.p(), s, j) - 1;
    if (e > 0) term = xj.pow(e) * term;
    acc = acc ? *acc + term : term;
  }
  return *acc;
}

// Refined Artin conductor: the grade of F^s d at the conductor level,
// computed on the best form so the pole data is faithful.  Only defined for
// conductor > 1; levels 0 and 1 carry no refined invariant.
template <class E>
GradedForm<E> refined_artin(const WittSeries<E>& w) {
  WittSeries<E> b = best_form(w);
  long m = artin_conductor(b);
  require(m > 1, errc::ConductorTooSmall,
          "refined conductor needs artin_conductor > 1, got " + std::to_string(m));
  return form_grade(fsd(b), m);
}

// Inverse of refined_artin over a perfect residue field: a single-slot
// vector c t^(-r) at a-index i, where m - 1 = r p^i with p coprime to r and
// the leading equation -r c^(p^i) = gamma pins c via iterated p-th roots.
template <class E>
WittSeries<E> surject_preimage(const GradedForm<E>& g) {
  if constexpr (!std::is_same_v<E, FieldElem>) {
    (void)g;
    fail(errc::ImperfectResidue, "surject_preimage needs a perfect residue field");
  } else {
    require(!g.is_zero(), errc::PreconditionViolated, "graded class must be nonzero");
    require(g.m > 1, errc::ConductorTooSmall, "graded level must exceed 1");
    require(g.c_du.is_zero(), errc::PreconditionViolated,
            "no du component exists over a perfect residue field");
    const Fq* F = g.c_dt.field();
    int p = F->p();
    long r = g.m - 1;
    int i = 0;
    while (r % p == 0) {
      r /= p;
      ++i;
    }
    FieldElem c = -(g.c_dt / F->from_int(r));
    for (int k = 0; k < i; ++k) c = c.pth_root();
    long prec = default_precision(g.m, i + 1);
    std::vector<LaurentSeries<FieldElem>> comps(static_cast<std::size_t>(i) + 1,
                                                LaurentSeries<FieldElem>::zero(F->zero(), prec));
    comps[0] = LaurentSeries<FieldElem>::monomial(c, -r, prec);
    WittSeries<FieldElem> w(p, comps);
    if (artin_conductor(w) != g.m || !(refined_artin(w) == g))
      fail(errc::NoPreimage, "constructed vector fails the grade/conductor consistency check");
    return w;
  }
}

// --- Milnor K-theory layer ---------------------------------------------------

// Symbol {b_1,...,b_N} in K^M_N(K), N <= 2; entries must be visibly nonzero.
template <class E>
struct MilnorSymbol {
  std::vector<LaurentSeries<E>> entries;

  explicit MilnorSymbol(std::vector<LaurentSeries<E>> es) : entries(std::move(es)) {
    require(entries.size() == 1 || entries.size() == 2, errc::MalformedPresentation,
            "Milnor symbols here have one or two entries");
    for (const auto& b : entries)
      require(!b.is_zero_to_precision(), errc::MalformedPresentation,
              "symbol entries must be nonzero at the working precision");
  }
  int N() const { return static_cast<int>(entries.size()); }
};

namespace rswdetail {
// 0 = unit, 1 = uniformizer; anything else is not a legal b-entry.
template <class E>
long b_shape(const LaurentSeries<E>& b) {
  if (b.val_at_least(0) && !b.val_at_least(1)) return 0;
  if (b.val_at_least(1) && !b.val_at_least(2)) return 1;
  return -1;
}
}  // namespace rswdetail

// Membership of a presented combination of generators in V^m K^M_N(K): every
// generator must be {1+a, b_1,...} with v(a) >= m and the b's units, or
// {1+a pi, ..., pi} with v(a) >= m, i.e. v(a pi) >= m+1.
template <class E>
bool vm_member(const std::vector<MilnorSymbol<E>>& gens, long m) {
  require(m >= 1, errc::PreconditionViolated, "V^m is indexed by m >= 1");
  for (const auto& gen : gens) {
    const auto& first = gen.entries[0];
    auto a = first - LaurentSeries<E>::one(first.coeff_sample(), first.prec());
    require(a.val_at_least(1), errc::MalformedPresentation,
            "generator's first entry is not of the form 1 + (positive valuation)");
    long need = m;
    if (gen.N() == 2) {
      long shape = rswdetail::b_shape(gen.entries[1]);
      require(shape >= 0, errc::MalformedPresentation, "b-entry is neither a unit nor a uniformizer");
      if (shape == 1) need = m + 1;
    }
    if (!a.val_at_least(need)) return false;
  }
  return true;
}

// rho^m(a db_1 ... db_{N-1}) = {1 + a b_1...b_{N-1}, b_1, ..., b_{N-1}}.
template <class E>
MilnorSymbol<E> rho_m(const LaurentSeries<E>& a, const std::vector<LaurentSeries<E>>& bs, long m) {
  require(m >= 1, errc::PreconditionViolated, "rho^m is indexed by m >= 1");
  require(a.val_at_least(m - 1), errc::PreconditionViolated, "rho^m needs v(a) >= m-1");
  require(bs.size() <= 1, errc::PreconditionViolated, "rho^m implemented for N <= 2");
  auto prod = a;
  for (const auto& b : bs) {
    require(rswdetail::b_shape(b) >= 0, errc::PreconditionViolated,
            "rho^m b-entries must be units or the uniformizer");
    prod = prod * b;
  }
  std::vector<LaurentSeries<E>> entries;
  entries.push_back(LaurentSeries<E>::one(a.coeff_sample(), a.prec()) + prod);
  for (const auto& b : bs) entries.push_back(b);
  return MilnorSymbol<E>(std::move(entries));
}

// tau for N = 1: pair the graded form c t^(-m) dt against a scalar
// a in m^(m-1) by Tr_{E/F_p} Res_t(a c t^(-m) dt).
inline int tau_pair(const GradedForm<FieldElem>& g, const LaurentSeries<FieldElem>& a) {
  require(g.m >= 1, errc::PreconditionViolated, "graded level must be >= 1");
  require(a.val_at_least(g.m - 1), errc::PreconditionViolated, "tau needs v(a) >= m-1");
  return (g.c_dt * a.coeff(g.m - 1)).trace_to_prime();
}

// tau for N = 2 over E = F_q((u)): wedge t^(-m)(c_dt dt + c_du du) with
// eta = f dt + h du, take Res_t, then Res_u, then the trace.
inline int tau_pair(const GradedForm<LaurentSeries<FieldElem>>& g,
                    const DifferentialForm<LaurentSeries<FieldElem>>& eta) {
  require(g.m >= 1, errc::PreconditionViolated, "graded level must be >= 1");
  require(eta.alpha.val_at_least(g.m - 1) && eta.beta.val_at_least(g.m - 1),
          errc::PreconditionViolated, "tau needs eta coefficients in m^(m-1)");
  auto wedge = g.c_dt * eta.beta - g.c_du * eta.alpha;  // coefficient of dt^du, sans t^(-m)
  return wedge.coeff(g.m - 1).coeff(-1).trace_to_prime();
}

}  // namespace ramify
