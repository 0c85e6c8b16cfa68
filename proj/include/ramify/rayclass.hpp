#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ramify/differential.hpp"
#include "ramify/finab.hpp"
#include "ramify/localexp.hpp"
#include "ramify/places.hpp"
#include "ramify/rng.hpp"
#include "ramify/snf.hpp"
#include "ramify/witt.hpp"

namespace ramify {

// Ray class groups with modulus on P^1 over F_q, global conductors of
// Artin-Schreier-Witt characters, Frobenius evaluation on zero-cycles, and
// the Schmid pairing. Throughout, U = P^1 minus the modulus support.

// g = 1 in every local ring O_v / m_v^{n_v}, v in |D|.
inline bool in_congruence(const RatFunc& g, const Modulus& D) {
  require(!g.is_zero(), errc::ZeroFunction, "congruence test on the zero function");
  for (const auto& [v, n] : D.divisor().terms()) {
    LaurentSeries<QuotElem> s = expand_at(g, v, n);
    if (!(s == LaurentSeries<QuotElem>::one(s.coeff_sample(), n))) return false;
  }
  return true;
}

// v-adic valuation of a nonzero rational function (0 for the zero function,
// which only ever feeds pole-depth bookkeeping here).
inline long place_valuation(const RatFunc& g, const Place& v) {
  if (g.is_zero()) return 0;
  if (v.is_infinite()) return g.den().degree() - g.num().degree();
  Poly<FieldElem> nu = g.num(), de = g.den();
  return localdetail::strip_factor(&nu, v.poly()) - localdetail::strip_factor(&de, v.poly());
}

namespace raydetail {

struct LocalFactor {
  Place v;
  long n;          // multiplicity in the modulus
  QuotCtxPtr K;    // residue field k(v), infinity wrapped as F_q[x]/(x)
  long units;      // |(O_v/m_v^n)^x| = (|k|-1)|k|^{n-1}
};

inline std::vector<LocalFactor> local_factors(const Modulus& D) {
  std::vector<LocalFactor> out;
  for (const auto& [v, n] : D.divisor().terms()) {
    QuotCtxPtr K = v.is_infinite() ? quot_ctx(Poly<FieldElem>::x(D.field()->zero()))
                                   : quot_ctx(v.poly());
    long u = K->size - 1;
    for (long e = 1; e < n; ++e) u = snf::chk_mul(u, K->size);
    out.push_back({v, n, K, u});
  }
  return out;
}

// Enumerates the congruence subgroup elements g = (Dn + M*Q)/Dn with monic
// denominator, gcd(Dn, M) = 1 and num/den degree <= bound; when infinity
// carries multiplicity n_inf the numerator correction is capped so that
// v_inf(g - 1) >= n_inf. Every congruence element with a monic denominator
// of degree <= bound arises this way. fn returning true stops the sweep.
template <class Fn>
void for_congruence_elements(const Modulus& D, long bound, Fn&& fn) {
  const Fq* F = D.field();
  FieldElem z = F->zero();
  Poly<FieldElem> M = D.finite_part();
  long m = M.degree(), ninf = D.inf_mult();
  for (long ddn = 0; ddn <= bound; ++ddn) {
    long cnt = monic_poly_count(z, ddn);
    for (long i = 0; i < cnt; ++i) {
      Poly<FieldElem> Dn = monic_poly_by_index(z, ddn, i);
      if (m > 0 && !poly_ext_gcd(Dn, M)[0].is_one()) continue;
      long cap = ninf > 0 ? ddn - ninf - m : bound - m;
      if (cap < 0) continue;
      long nq = 1;
      for (long e = 0; e <= cap; ++e) nq *= F->q();
      for (long qi = 1; qi < nq; ++qi) {
        Poly<FieldElem> Q(z);
        long rem = qi;
        for (long e = 0; rem > 0; ++e, rem /= F->q())
          Q.set_coeff(e, F->element_by_index(rem % F->q()));
        if (fn(RatFunc(Dn + M * Q, Dn))) return;
      }
    }
  }
}

}  // namespace raydetail

// |C(P^1, D)^0| = prod_v (q^{d_v n_v} - q^{d_v (n_v - 1)}) / (q - 1).
inline long long ray_class_order_formula(const Modulus& D) {
  long long q = D.field()->q(), n = 1;
  for (const auto& [v, k] : D.divisor().terms()) {
    long long qd = 1;
    for (long e = 0; e < v.degree(); ++e) qd = snf::chk_mul(qd, q);
    long long low = 1;
    for (long e = 0; e < k - 1; ++e) low = snf::chk_mul(low, qd);
    n = snf::chk_mul(n, snf::chk_mul(low, qd - 1));
  }
  require(n % (q - 1) == 0, errc::PreconditionViolated, "unit count not divisible by q-1");
  return n / (q - 1);
}

// A class in C(X,D)^0 is carried by a tuple of local units, one truncated
// series in k(v)[[t_v]] / t_v^{n_v} per modulus place, modulo the diagonal
// F_q^x. Tuples are ordered like Modulus::divisor().terms().
using IdeleRep = std::vector<LaurentSeries<QuotElem>>;

struct RayClassGen {
  IdeleRep tuple;        // canonical idele-class representative
  long long order;       // matching invariant factor
  RatFunc rep_function;  // h = tuple at every modulus place (exact congruence)
  Divisor cycle;         // div(h), a degree-0 cycle on U
};

inline RatFunc congruence_representative(const Modulus& D, const IdeleRep& t);

class RayClassGroup {
 public:
  explicit RayClassGroup(const Modulus& D) : D_(D), locals_(raydetail::local_factors(D)) {
    const Fq* F = D_.field();
    long long total = 1;
    for (const auto& L : locals_) total = snf::chk_mul(total, L.units);
    require(total <= (1L << 21), errc::BudgetExceeded,
            "local unit group too large to enumerate (" + std::to_string(total) + ")");

    // full enumeration of unit tuples, folded modulo the diagonal F_q^x
    for (long long step = 0; step < total; ++step) {
      IdeleRep t;
      long long rem = step;
      for (std::size_t i = 0; i < locals_.size(); ++i) {
        t.push_back(decode_unit(i, rem % locals_[i].units));
        rem /= locals_[i].units;
      }
      ClassKey key = canonical(&t);
      if (index_.emplace(key, static_cast<int>(reps_.size())).second) reps_.push_back(t);
    }
    long long expected = ray_class_order_formula(D_);
    require(static_cast<long long>(reps_.size()) == expected, errc::PreconditionViolated,
            "unit tuple enumeration disagrees with the closed-form order");
    require(reps_.size() <= 4096, errc::BudgetExceeded, "ray class group too large");

    decompose();
    for (std::size_t i = 0; i < gen_class_.size(); ++i) {
      const IdeleRep& tu = reps_[static_cast<std::size_t>(gen_class_[i])];
      RatFunc h = congruence_representative(D_, tu);
      gens_.push_back(RayClassGen{tu, group_.factors[i], h, divisor_of(h)});
    }
  }

  const Modulus& modulus() const { return D_; }
  const FinAbGroup& group() const { return group_; }
  const std::vector<RayClassGen>& generators() const { return gens_; }
  long long order() const { return static_cast<long long>(reps_.size()); }

  // exponents w.r.t. generators(), entries in [0, factors[i])
  std::vector<long> class_exponents(const IdeleRep& t) const {
    IdeleRep u = normalize(t);
    ClassKey key = canonical(&u);
    auto it = index_.find(key);
    require(it != index_.end(), errc::PreconditionViolated, "tuple is not a unit tuple for this modulus");
    return expo_[static_cast<std::size_t>(it->second)];
  }

  IdeleRep tuple_of_function(const RatFunc& g) const {
    require(!g.is_zero(), errc::ZeroFunction, "class of the zero function");
    IdeleRep t;
    for (const auto& L : locals_) {
      LaurentSeries<QuotElem> s = expand_at(g, L.v, L.n);
      require(!s.is_zero() && s.val() == 0, errc::PreconditionViolated,
              "function is not a unit at " + L.v.to_string());
      t.push_back(s);
    }
    return t;
  }

  std::vector<long> class_of_function(const RatFunc& g) const {
    return class_exponents(tuple_of_function(g));
  }

 private:
  using ClassKey = std::vector<long>;

  LaurentSeries<QuotElem> decode_unit(std::size_t i, long u) const {
    const auto& L = locals_[i];
    QuotElem zero = QuotElem::from_base(L.K, L.K->base->zero());
    LaurentSeries<QuotElem> s(zero, L.n);
    s.set_coeff(0, QuotElem::by_index(L.K, 1 + u % (L.K->size - 1)));
    u /= (L.K->size - 1);
    for (long e = 1; e < L.n; ++e, u /= L.K->size)
      s.set_coeff(e, QuotElem::by_index(L.K, u % L.K->size));
    return s;
  }

  // shape-check and truncate a caller tuple to the modulus depths
  IdeleRep normalize(const IdeleRep& t) const {
    require(t.size() == locals_.size(), errc::LengthMismatch, "tuple length != number of modulus places");
    IdeleRep u;
    for (std::size_t i = 0; i < locals_.size(); ++i) {
      require(t[i].prec() >= locals_[i].n, errc::InsufficientPrecision, "tuple entry too shallow");
      u.push_back(t[i].truncated(locals_[i].n));
    }
    return u;
  }

  ClassKey key_of(const IdeleRep& t) const {
    ClassKey k;
    for (std::size_t i = 0; i < locals_.size(); ++i)
      for (long e = 0; e < locals_[i].n; ++e) k.push_back(t[i].coeff(e).index());
    return k;
  }

  // lexicographically least F_q^x-scaling; *t is replaced by the winner
  ClassKey canonical(IdeleRep* t) const {
    const Fq* F = D_.field();
    ClassKey best = key_of(*t);
    IdeleRep winner = *t;
    for (long c = 2; c < F->q(); ++c) {
      FieldElem s = F->element_by_index(c);
      IdeleRep scaled;
      for (std::size_t i = 0; i < locals_.size(); ++i) {
        QuotElem sc = QuotElem::from_base(locals_[i].K, s);
        LaurentSeries<QuotElem> r((*t)[i].coeff_sample(), locals_[i].n);
        for (const auto& [e, v] : (*t)[i].coeffs()) r.set_coeff(e, sc * v);
        scaled.push_back(r);
      }
      ClassKey k = key_of(scaled);
      if (k < best) {
        best = k;
        winner = scaled;
      }
    }
    *t = winner;
    return best;
  }

  int mul(int a, int b) const {
    IdeleRep t;
    for (std::size_t i = 0; i < locals_.size(); ++i)
      t.push_back(reps_[static_cast<std::size_t>(a)][i] * reps_[static_cast<std::size_t>(b)][i]);
    ClassKey key = canonical(&t);
    auto it = index_.find(key);
    require(it != index_.end(), errc::PreconditionViolated, "unit product escaped the enumeration");
    return it->second;
  }

  int identity_class() const {
    IdeleRep t;
    for (std::size_t i = 0; i < locals_.size(); ++i) t.push_back(decode_unit(i, 0));
    ClassKey key = canonical(&t);
    return index_.at(key);
  }

  long order_in_quotient(int h, const std::vector<char>& inH) const {
    long k = 1;
    int cur = h;
    while (!inH[static_cast<std::size_t>(cur)]) {
      cur = mul(cur, h);
      ++k;
    }
    return k;
  }

  // Greedy invariant-factor decomposition: peel off a maximal-order cyclic
  // direct summand at each layer. A coset of maximal order in G/H always
  // contains an element whose order in G equals that quotient order; such a
  // lift generates a complement of H inside <H, lift>.
  void decompose() {
    std::size_t N = reps_.size();
    int e = identity_class();
    std::vector<char> inH(N, 0);
    std::vector<int> Hlist{e};
    inH[static_cast<std::size_t>(e)] = 1;
    std::vector<int> gens_desc;
    std::vector<long> orders_desc;
    while (Hlist.size() < N) {
      int best = -1;
      long best_d = 0;
      for (int h = 0; h < static_cast<int>(N); ++h) {
        if (inH[static_cast<std::size_t>(h)]) continue;
        long d = order_in_quotient(h, inH);
        if (d > best_d) {
          best_d = d;
          best = h;
        }
      }
      int lift = -1;
      for (int eta : Hlist) {
        int cand = mul(best, eta);
        long k = 1;
        int cur = cand;
        while (cur != e) {
          cur = mul(cur, cand);
          ++k;
        }
        if (k == best_d) {
          lift = cand;
          break;
        }
      }
      require(lift >= 0, errc::PreconditionViolated, "no exact-order lift for a maximal coset");
      std::vector<int> grown;
      int pw = e;
      for (long j = 0; j < best_d; ++j) {
        for (int eta : Hlist) grown.push_back(mul(eta, pw));
        pw = mul(pw, lift);
      }
      for (int g : grown) inH[static_cast<std::size_t>(g)] = 1;
      require(grown.size() == Hlist.size() * static_cast<std::size_t>(best_d) &&
                  std::set<int>(grown.begin(), grown.end()).size() == grown.size(),
              errc::PreconditionViolated, "cyclic layer is not a direct summand");
      Hlist = std::move(grown);
      gens_desc.push_back(lift);
      orders_desc.push_back(best_d);
    }
    for (std::size_t i = 0; i + 1 < orders_desc.size(); ++i)
      require(orders_desc[i] % orders_desc[i + 1] == 0, errc::PreconditionViolated,
              "invariant factor chain broken");

    // exponent dictionary; surjectivity + cardinality make it a bijection
    expo_.assign(N, {});
    std::vector<char> seen(N, 0);
    std::vector<long> exp(gens_desc.size(), 0);
    for (;;) {
      int cls = e;
      for (std::size_t i = 0; i < gens_desc.size(); ++i)
        for (long j = 0; j < exp[i]; ++j) cls = mul(cls, gens_desc[i]);
      require(!seen[static_cast<std::size_t>(cls)], errc::PreconditionViolated,
              "generator exponents collide");
      seen[static_cast<std::size_t>(cls)] = 1;
      expo_[static_cast<std::size_t>(cls)] = std::vector<long>(exp.rbegin(), exp.rend());
      std::size_t i = 0;
      while (i < exp.size() && ++exp[i] == orders_desc[i]) exp[i++] = 0;
      if (i == exp.size()) break;
    }
    for (std::size_t i = 0; i < N; ++i)
      require(seen[i] == 1, errc::PreconditionViolated, "generators do not span");

    gen_class_.assign(gens_desc.rbegin(), gens_desc.rend());
    group_.factors.assign(orders_desc.rbegin(), orders_desc.rend());
  }

  Modulus D_;
  std::vector<raydetail::LocalFactor> locals_;
  FinAbGroup group_;
  std::vector<RayClassGen> gens_;
  std::vector<int> gen_class_;
  std::map<ClassKey, int> index_;
  std::vector<IdeleRep> reps_;
  std::vector<std::vector<long>> expo_;
};

inline RayClassGroup ray_class_group(const Modulus& D) { return RayClassGroup(D); }

// A global function congruent to the given unit tuple at every modulus
// place: CRT at the finite part, and when infinity carries multiplicity the
// top coefficients are steered through an auxiliary denominator w^k with w
// an irreducible outside |D|. The result h satisfies, exactly,
// expand_at(h, v, n_v) == t_v for all v in |D|; div(h) lives on U.
inline RatFunc congruence_representative(const Modulus& D, const IdeleRep& t) {
  const Fq* F = D.field();
  FieldElem z = F->zero();
  auto locals = raydetail::local_factors(D);
  require(t.size() == locals.size(), errc::LengthMismatch, "tuple length != number of modulus places");

  const LaurentSeries<QuotElem>* tinf = nullptr;
  long ninf = 0;
  std::vector<std::pair<Poly<FieldElem>, Poly<FieldElem>>> crt;  // (f^n, target residue)
  for (std::size_t i = 0; i < locals.size(); ++i) {
    const auto& L = locals[i];
    require(t[i].prec() == L.n && !t[i].is_zero() && t[i].val() == 0, errc::PreconditionViolated,
            "tuple entry is not a depth-n_v unit");
    if (L.v.is_infinite()) {
      tinf = &t[i];
      ninf = L.n;
      continue;
    }
    Poly<FieldElem> f = L.v.poly(), fN = f.pow(L.n);
    Poly<FieldElem> A = localdetail::hensel_root(f, fN);
    Poly<FieldElem> r(z), fe = Poly<FieldElem>::constant(F->one());
    for (long e = 0; e < L.n; ++e) {
      Poly<FieldElem> c = t[i].coeff(e).rep();
      if (!c.is_zero()) r = (r + localdetail::compose_mod(c, A, fN) * fe) % fN;
      fe = fe * f;
    }
    crt.emplace_back(fN, r);
  }

  // auxiliary denominator for the infinite jet
  Poly<FieldElem> wk = Poly<FieldElem>::constant(F->one());
  long wdeg = 0;
  if (ninf > 0) {
    Poly<FieldElem> w(z);
    for (long d = 1; wdeg == 0; ++d)
      for (const auto& f : monic_irreducibles(z, d)) {
        if (D.contains(Place::finite(f))) continue;
        w = f;
        wdeg = d;
        break;
      }
    long m = D.finite_part().degree();
    long k = (m + ninf + wdeg - 1) / wdeg;
    wk = w.pow(k);
  }

  // h0 = t_v * wk mod f_v^{n_v} at every finite place, via iterated CRT
  Poly<FieldElem> h0(z), mprod = Poly<FieldElem>::constant(F->one());
  for (const auto& [fN, r0] : crt) {
    Poly<FieldElem> r = (r0 * wk) % fN;
    Poly<FieldElem> diff = (r - h0) % fN;
    Poly<FieldElem> adj = localdetail::mulmod(diff, localdetail::invmod(mprod % fN, fN), fN);
    h0 = h0 + mprod * adj;
    mprod = mprod * fN;
  }
  if (ninf == 0) return RatFunc(h0);

  // steer the top n_inf coefficients: with N = h0 + mprod*Q and
  // Ddeg = deg wk, require rev(N) = t_inf * rev(wk) mod t^{n_inf}.
  long m = mprod.degree(), Ddeg = wk.degree();
  std::vector<FieldElem> target;  // coefficients of t_inf * rev(wk)
  for (long j = 0; j < ninf; ++j) {
    FieldElem Tj = z;
    for (long a = 0; a <= j; ++a) {
      QuotElem ca = tinf->coeff(a);
      FieldElem ra = ca.rep().is_zero() ? z : ca.rep().coeff(0);
      Tj = Tj + ra * wk.coeff(Ddeg - (j - a));
    }
    target.push_back(Tj);
  }
  Poly<FieldElem> Q(z), N = h0;
  for (long j = 0; j < ninf; ++j) {
    FieldElem have = N.coeff(Ddeg - j);
    Q.set_coeff(Ddeg - m - j, target[static_cast<std::size_t>(j)] - have);
    N = h0 + mprod * Q;
  }
  RatFunc h(N, wk);
  for (std::size_t i = 0; i < locals.size(); ++i)
    require(expand_at(h, locals[i].v, locals[i].n) == t[i], errc::PreconditionViolated,
            "congruence representative failed its own expansion check");
  return h;
}

// Restriction of a unit tuple along D' >= D: drop places outside |D| and
// truncate the surviving entries to the shallower depths.
inline IdeleRep restrict_tuple(const Modulus& from, const Modulus& to, const IdeleRep& t) {
  require(to.divisor().dominated_by(from.divisor()), errc::PreconditionViolated,
          "restriction target is not dominated by the source modulus");
  auto src = raydetail::local_factors(from);
  require(t.size() == src.size(), errc::LengthMismatch, "tuple length != number of modulus places");
  IdeleRep out;
  for (const auto& [v, n] : to.divisor().terms())
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i].v == v) {
        out.push_back(t[i].truncated(n));
        break;
      }
  require(out.size() == to.divisor().terms().size(), errc::PreconditionViolated,
          "restriction lost a place");
  return out;
}

// Independent presentation of C(P^1, D)^0: generators are the places of U of
// degree <= bound plus one degree-normalization generator, relations the
// divisors of enumerated congruence elements. The normalization generator's
// relation column is identically zero by the product formula, so it is
// realized as the requirement that the place lattice have corank exactly 1.
// The Smith form is computed modulo twice the closed-form order (the lattice
// plus m*Z^S determines the torsion once the corank certificate holds, and
// modular reduction keeps the wide elimination from overflowing); a result is
// accepted once exactly one invariant factor equals the modulus and the rest
// multiply to the closed-form order. The bound grows up to deg_bound until
// that certificate holds.
struct RayClassOracleResult {
  FinAbGroup group;
  long bound_used = 0;
};

inline RayClassOracleResult ray_class_oracle(const Modulus& D, long deg_bound) {
  require(deg_bound >= 1 && deg_bound <= 6, errc::BudgetExceeded,
          "oracle degree bound must lie in [1, 6]");
  const Fq* F = D.field();
  FieldElem z = F->zero();
  long long want = ray_class_order_formula(D);

  for (long B = 1; B <= deg_bound; ++B) {
    std::vector<Place> cols;
    for (long d = 1; d <= B; ++d)
      for (const auto& f : monic_irreducibles(z, d))
        if (Place P = Place::finite(f); !D.contains(P)) cols.push_back(P);
    if (Place inf = Place::infinity(F); !D.contains(inf)) cols.push_back(inf);
    if (cols.empty()) continue;
    std::map<Place, int> at;
    for (std::size_t i = 0; i < cols.size(); ++i) at.emplace(cols[i], static_cast<int>(i));

    long long mod = snf::chk_mul(2, want);
    snf::RowLattice L(static_cast<int>(cols.size()), mod);
    std::optional<FinAbGroup> got;
    auto certify = [&]() {
      if (L.rank() + 1 < static_cast<int>(cols.size())) return false;
      std::vector<long long> diag = snf::smith_diagonal(L.rows(), mod, cols.size());
      long long tors = 1;
      int free_rank = 0;
      std::vector<long long> tfac;
      for (long long d : diag) {
        if (d == mod) {
          ++free_rank;
          continue;
        }
        tors = snf::chk_mul(tors, d);
        if (d > 1) tfac.push_back(d);
      }
      if (free_rank != 1 || tors != want) return false;
      got = FinAbGroup::from_smith_diagonal(tfac);
      return true;
    };
    long pending = 0;
    raydetail::for_congruence_elements(D, B, [&](const RatFunc& g) {
      snf::Row row(cols.size(), 0);
      Divisor dg = divisor_of(g);
      for (const auto& [P, n] : dg.terms()) {
        auto it = at.find(P);
        if (it == at.end()) return false;  // relation leaves the generator set
        row[static_cast<std::size_t>(it->second)] = n;
      }
      if (L.add_row(std::move(row))) pending = 0;
      if (++pending % 64 == 0 && certify()) return true;
      return false;
    });
    if (got || certify()) return {*got, B};
  }
  require(false, errc::BudgetExceeded,
          "ray class presentation did not certify by degree " + std::to_string(deg_bound));
  return {};
}

// Artin-Schreier-Witt character chi = delta_s(f), f in W_s(F_q(x)) given in
// display order: components[0] is the weight-p^{s-1} slot.
class ASWCharacter {
 public:
  explicit ASWCharacter(std::vector<RatFunc> components) : c_(std::move(components)) {
    require(!c_.empty() && c_.size() <= 2, errc::Unsupported, "Witt length must be 1 or 2");
    for (const auto& g : c_)
      require(g.base_field() == c_[0].base_field(), errc::PreconditionViolated,
              "character components over different fields");
  }

  int s() const { return static_cast<int>(c_.size()); }
  int p() const { return c_[0].p(); }
  const Fq* field() const { return c_[0].base_field(); }
  const std::vector<RatFunc>& components() const { return c_; }
  bool is_trivial() const {
    for (const auto& g : c_)
      if (!g.is_zero()) return false;
    return true;
  }

 private:
  std::vector<RatFunc> c_;
};

// Conductor divisor: at each candidate place expand the components in
// k(v)((t_v)) and take the local Artin conductor of the Witt vector.
inline Divisor global_conductor(const ASWCharacter& chi) {
  const Fq* F = chi.field();
  int p = chi.p(), s = chi.s();
  Divisor out(F);
  std::set<Place> cand{Place::infinity(F)};
  for (const RatFunc& g : chi.components())
    if (!g.is_zero())
      for (const auto& [f, mult] : poly_factor(g.den()).factors) cand.insert(Place::finite(f));
  for (const Place& v : cand) {
    long depth = 0;
    for (const RatFunc& g : chi.components()) depth = std::max(depth, -place_valuation(g, v));
    if (depth == 0) continue;
    long bound = depth;
    for (int j = 1; j < s; ++j) bound *= p;
    long art = with_precision_retry(default_precision(bound, s), [&](long prec) {
      std::vector<LaurentSeries<QuotElem>> xs;
      for (const RatFunc& g : chi.components()) xs.push_back(expand_at(g, v, prec));
      return artin_conductor(WittSeries<QuotElem>(p, xs));
    });
    if (art > 0) out.add(v, art);
  }
  return out;
}

// chi(Frob_P) = Tr_{k(P)/F_p} f(P) as an integer in [0, p^s), computed as
// sum_{i < [k(P):F_p]} F^i(f(P)) in W_s(k(P)); the sum is Frobenius-fixed,
// hence lands in W_s(F_p).
inline long frobenius_eval(const ASWCharacter& chi, const Place& P) {
  const Fq* F = chi.field();
  int p = chi.p(), s = chi.s();
  for (const RatFunc& g : chi.components()) {
    bool pole = P.is_infinite() ? g.num().degree() > g.den().degree()
                                : (!g.is_zero() && P.poly().divides(g.den()));
    require(!pole, errc::RamifiedPlace, "character component has a pole at " + P.to_string());
  }
  std::vector<QuotElem> vals;
  for (const RatFunc& g : chi.components()) vals.push_back(value_at(g, P));
  WittVector<QuotElem> acc = witt_zero(p, vals[0].zero(), s), cur(p, vals);
  long m = F->n() * P.degree();
  for (long i = 0; i < m; ++i) {
    acc = witt_add(acc, cur);
    cur = witt_frobenius(cur);
  }
  const Fq* Fp = Fq::get(p, 1);
  std::vector<FieldElem> comps;
  for (int j = 0; j < s; ++j) {
    const Poly<FieldElem>& r = acc.std_comp(j).rep();
    require(r.degree() <= 0, errc::PreconditionViolated, "Witt trace left the prime field");
    FieldElem c = r.is_zero() ? F->zero() : r.coeff(0);
    long val = -1;
    for (long i = 0; i < p; ++i)
      if (c == F->from_int(i)) {
        val = i;
        break;
      }
    require(val >= 0, errc::PreconditionViolated, "Witt trace left the prime field");
    comps.push_back(Fp->from_int(val));
  }
  return witt_to_int(WittVector<FieldElem>(p, comps));
}

// chi evaluated on div(g)|_U by Z-linear extension of Frobenius evaluation.
inline long character_on_divisor(const ASWCharacter& chi, const Modulus& D, const RatFunc& g) {
  long mod = 1;
  for (int j = 0; j < chi.s(); ++j) mod *= chi.p();
  long acc = 0;
  Divisor dg = divisor_of(g);
  for (const auto& [P, n] : dg.terms()) {
    require(!D.contains(P), errc::PreconditionViolated, "congruence divisor meets the modulus");
    acc = (acc + (n % mod) * frobenius_eval(chi, P)) % mod;
  }
  return (acc % mod + mod) % mod;
}

// Schmid's local symbol Tr_{k(v)/F_p} Res_{t_v}(a db/b), valued in [0, p).
inline int schmid_local(const RatFunc& a, const RatFunc& b, const Place& v) {
  require(!b.is_zero(), errc::ZeroFunction, "Schmid symbol needs b != 0");
  if (a.is_zero()) return 0;
  return with_precision_retry(16, [&](long prec) {
    LaurentSeries<QuotElem> sa = expand_at(a, v, prec);
    LaurentSeries<QuotElem> sb = expand_at(b, v, prec);
    return ((sa * d_form(sb).alpha) / sb).coeff(-1).trace_to_prime();
  });
}

// Sum of local symbols over the joint support (plus infinity) vanishes.
inline bool schmid_reciprocity_check(const RatFunc& a, const RatFunc& b) {
  require(!a.is_zero() && !b.is_zero(), errc::ZeroFunction, "Schmid reciprocity on the zero function");
  std::set<Place> S{Place::infinity(a.base_field())};
  Divisor da = divisor_of(a), db = divisor_of(b);
  for (const auto& [v, n] : da.terms()) S.insert(v);
  for (const auto& [v, n] : db.terms()) S.insert(v);
  long sum = 0;
  for (const Place& v : S) sum += schmid_local(a, b, v);
  return sum % a.p() == 0;
}

struct FactorizationReport {
  long trials = 0;
  bool ok = true;
  std::optional<RatFunc> counterexample;
};

// Randomized check that chi factors through C(X,D): chi(div g) = 0 for g in
// the congruence subgroup mod D. With D below the conductor this is expected
// to fail, which is what the negative controls look for.
inline FactorizationReport factorization_report(const ASWCharacter& chi, const Modulus& D,
                                                long trials, Rng& rng) {
  const Fq* F = D.field();
  FieldElem z = F->zero();
  Poly<FieldElem> M = D.finite_part();
  long m = M.degree(), ninf = D.inf_mult();
  FactorizationReport rep;
  for (long trial = 0; trial < trials; ++trial) {
    std::optional<RatFunc> g;
    for (int attempt = 0; attempt < 256 && !g; ++attempt) {
      long ddn = (ninf > 0 ? m + ninf : 0) + rng.range(0, 3);
      Poly<FieldElem> Dn = monic_poly_by_index(z, ddn, static_cast<long>(rng.below(
                                                           static_cast<std::uint64_t>(monic_poly_count(z, ddn)))));
      if (m > 0 && !poly_ext_gcd(Dn, M)[0].is_one()) continue;
      long cap = ninf > 0 ? ddn - ninf - m : rng.range(0, 3);
      Poly<FieldElem> Q(z);
      for (long e = 0; e <= cap; ++e)
        Q.set_coeff(e, F->element_by_index(static_cast<long>(rng.below(static_cast<std::uint64_t>(F->q())))));
      if (Q.is_zero()) continue;
      g = RatFunc(Dn + M * Q, Dn);
    }
    require(g.has_value(), errc::NonTermination, "could not sample a congruence element");
    ++rep.trials;
    if (character_on_divisor(chi, D, *g) != 0) {
      rep.ok = false;
      rep.counterexample = *g;
      return rep;
    }
  }
  return rep;
}

inline bool factorization_check(const ASWCharacter& chi, const Modulus& D, long trials,
                                std::uint64_t seed = 0) {
  Rng rng(seed);
  return factorization_report(chi, D, trials, rng).ok;
}

// Deterministic sweep for a congruence element with chi(div g) != 0; empty
// when the sweep up to deg_bound finds none. Elements whose divisor meets a
// ramified place outside |D| are skipped: Frobenius evaluation has no value
// there.
inline std::optional<RatFunc> find_violation(const ASWCharacter& chi, const Modulus& D,
                                             long deg_bound) {
  std::optional<RatFunc> hit;
  raydetail::for_congruence_elements(D, deg_bound, [&](const RatFunc& g) {
    try {
      if (character_on_divisor(chi, D, g) != 0) {
        hit = g;
        return true;
      }
    } catch (const Error& e) {
      if (e.code() != errc::RamifiedPlace) throw;
    }
    return false;
  });
  return hit;
}

}  // namespace ramify
