#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "ramify/errors.hpp"
#include "ramify/fq.hpp"
#include "ramify/poly.hpp"

namespace ramify {

// Residue field F_q[x]/(f) at a finite place, f monic irreducible. Contexts
// are canonicalized through a registry so elements of the same field share one
// context pointer and compare cheaply.

struct QuotCtx {
  const Fq* base;
  Poly<FieldElem> mod;  // monic irreducible
  long deg;
  long size;  // q^deg
};

using QuotCtxPtr = std::shared_ptr<const QuotCtx>;

inline QuotCtxPtr quot_ctx(const Poly<FieldElem>& mod) {
  require(mod.degree() >= 1 && mod.is_monic(), errc::PreconditionViolated,
          "residue field modulus must be monic of positive degree");
  require(poly_is_irreducible(mod), errc::PreconditionViolated,
          "residue field modulus must be irreducible");
  const Fq* F = mod.zero_sample().field();
  static std::mutex mu;
  static std::map<std::pair<const Fq*, std::string>, QuotCtxPtr> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(F, mod.to_string("x"));
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  long size = 1;
  for (long i = 0; i < mod.degree(); ++i) {
    require(size <= (1L << 40) / F->q(), errc::BudgetExceeded, "residue field too large");
    size *= F->q();
  }
  auto ctx = std::make_shared<QuotCtx>(QuotCtx{F, mod, mod.degree(), size});
  registry.emplace(key, ctx);
  return ctx;
}

class QuotElem {
 public:
  QuotElem(QuotCtxPtr ctx, const Poly<FieldElem>& value)
      : C_(std::move(ctx)), r_(value % C_->mod) {}

  static QuotElem from_base(const QuotCtxPtr& ctx, const FieldElem& c) {
    return QuotElem(ctx, Poly<FieldElem>::constant(c));
  }
  static QuotElem gen(const QuotCtxPtr& ctx) {  // class of x
    return QuotElem(ctx, Poly<FieldElem>::x(ctx->base->zero()));
  }

  const QuotCtxPtr& ctx() const { return C_; }
  const Poly<FieldElem>& rep() const { return r_; }
  int p() const { return C_->base->p(); }
  long field_size() const { return C_->size; }
  bool is_zero() const { return r_.is_zero(); }
  bool is_one() const { return r_.is_one(); }
  QuotElem zero() const { return QuotElem(C_, Poly<FieldElem>::zero(C_->base->zero())); }
  QuotElem one() const { return from_base(C_, C_->base->one()); }

  friend QuotElem operator+(const QuotElem& a, const QuotElem& b) {
    a.check(b);
    return QuotElem(a.C_, a.r_ + b.r_);
  }
  friend QuotElem operator-(const QuotElem& a, const QuotElem& b) {
    a.check(b);
    return QuotElem(a.C_, a.r_ - b.r_);
  }
  QuotElem operator-() const { return QuotElem(C_, -r_); }
  friend QuotElem operator*(const QuotElem& a, const QuotElem& b) {
    a.check(b);
    return QuotElem(a.C_, a.r_ * b.r_);
  }
  QuotElem inv() const {
    require(!is_zero(), errc::PreconditionViolated, "inverse of zero residue");
    auto [g, u, v] = poly_ext_gcd(r_, C_->mod);
    require(g.is_one(), errc::PreconditionViolated, "residue modulus not coprime");
    (void)v;
    return QuotElem(C_, u);
  }
  friend QuotElem operator/(const QuotElem& a, const QuotElem& b) { return a * b.inv(); }

  QuotElem pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    QuotElem r = one(), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  // Frobenius x -> x^p generates Gal(k(v)/F_p); k(v) is perfect with
  // pth_root = pow(|k|/p).
  QuotElem frobenius() const { return pow(C_->base->p()); }
  QuotElem pth_root() const { return pow(C_->size / C_->base->p()); }

  // Absolute trace down to the prime field, as an integer in [0, p).
  int trace_to_prime() const {
    QuotElem acc = zero(), c = *this;
    long n = C_->base->n() * C_->deg;
    for (long i = 0; i < n; ++i) {
      acc = acc + c;
      c = c.frobenius();
    }
    require(acc.r_.degree() <= 0, errc::PreconditionViolated, "trace escaped the prime field");
    return acc.r_.is_zero() ? 0 : acc.r_.coeff(0).to_int();
  }

  friend bool operator==(const QuotElem& a, const QuotElem& b) {
    a.check(b);
    return a.r_ == b.r_;
  }
  friend bool operator!=(const QuotElem& a, const QuotElem& b) { return !(a == b); }
  friend bool operator<(const QuotElem& a, const QuotElem& b) {
    a.check(b);
    return a.r_ < b.r_;
  }

  // index in [0, q^deg): coefficient tuple little-endian in the base index
  long index() const {
    long idx = 0, mul = 1;
    for (long k = 0; k < C_->deg; ++k) {
      idx += C_->base->index_of(r_.coeff(k)) * mul;
      mul *= C_->base->q();
    }
    return idx;
  }
  static QuotElem by_index(const QuotCtxPtr& ctx, long idx) {
    Poly<FieldElem> r(ctx->base->zero());
    for (long k = 0; k < ctx->deg; ++k) {
      FieldElem c = ctx->base->element_by_index(idx % ctx->base->q());
      if (!c.is_zero()) r.set_coeff(k, c);
      idx /= ctx->base->q();
    }
    return QuotElem(ctx, r);
  }

  std::string to_string() const { return r_.to_string("z"); }

 private:
  void check(const QuotElem& o) const {
    require(C_ == o.C_, errc::PreconditionViolated, "mixed residue field contexts");
  }
  QuotCtxPtr C_;
  Poly<FieldElem> r_;
};

template <>
struct field_enum<QuotElem> {
  static long size(const QuotElem& sample) { return sample.field_size(); }
  static QuotElem element(const QuotElem& sample, long i) {
    return QuotElem::by_index(sample.ctx(), i);
  }
  static const void* key(const QuotElem& sample) { return sample.ctx().get(); }
};

}  // namespace ramify
