#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ramify/errors.hpp"
#include "ramify/snf.hpp"

namespace ramify {

// Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_k, every
// d_i >= 2; the trivial group has no factors.
struct FinAbGroup {
  std::vector<long long> factors;

  long long order() const {
    long long n = 1;
    for (long long d : factors) n = snf::chk_mul(n, d);
    return n;
  }
  bool is_trivial() const { return factors.empty(); }

  friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) {
    return a.factors == b.factors;
  }
  friend bool operator!=(const FinAbGroup& a, const FinAbGroup& b) { return !(a == b); }

  std::string to_string() const {
    if (factors.empty()) return "trivial";
    std::string out;
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) out += " x ";
      out += "Z/" + std::to_string(factors[i]);
    }
    return out;
  }

  static FinAbGroup from_smith_diagonal(const std::vector<long long>& diag) {
    FinAbGroup g;
    for (long long d : diag)
      if (d >= 2) g.factors.push_back(d);
    std::sort(g.factors.begin(), g.factors.end());
    return g;
  }
};

// Invariant factors recovered from the order statistics of a full element
// enumeration: for each prime ell, #{g : g^{ell^j} = e} = ell^{sum min(j, lam_i)}
// determines the partition (lam_i) of the ell-part. Independent of any
// generator search, so it cross-checks the constructive decomposition.
inline FinAbGroup invariant_factors_from_orders(const std::vector<long long>& orders) {
  FinAbGroup out;
  if (orders.empty()) return out;
  long long expo = 1;
  for (long long o : orders) {
    require(o >= 1, errc::PreconditionViolated, "element order must be positive");
    long long g = std::gcd(expo, o);
    expo = snf::chk_mul(expo / g, o);
  }
  if (expo == 1) return out;

  std::vector<long long> primes;
  long long e = expo;
  for (long long ell = 2; ell * ell <= e; ++ell)
    if (e % ell == 0) {
      primes.push_back(ell);
      while (e % ell == 0) e /= ell;
    }
  if (e > 1) primes.push_back(e);

  // per-prime partitions, largest part first
  std::map<long long, std::vector<int>> partitions;
  for (long long ell : primes) {
    std::vector<long long> torsion;  // torsion[j] = #{g : g^{ell^j} = e}
    torsion.push_back(1);
    for (long long pj = ell;; pj *= ell) {
      long long cnt = 0;
      for (long long o : orders) {
        long long op = 1;  // ell-part of o
        long long t = o;
        while (t % ell == 0) {
          op *= ell;
          t /= ell;
        }
        // g^{ell^j} = e iff ord(g) is an ell-power dividing ell^j
        if (t == 1 && pj % op == 0) ++cnt;
      }
      torsion.push_back(cnt);
      if (cnt == torsion[torsion.size() - 2]) break;
    }
    std::vector<int> parts_ge;  // #parts >= j, from log_ell jumps
    for (size_t j = 1; j + 1 < torsion.size(); ++j) {
      long long ratio = torsion[j] / torsion[j - 1];
      require(torsion[j] % torsion[j - 1] == 0, errc::PreconditionViolated,
              "torsion counts not a p-group filtration");
      int lg = 0;
      while (ratio > 1) {
        require(ratio % ell == 0, errc::PreconditionViolated, "torsion jump not a power");
        ratio /= ell;
        ++lg;
      }
      parts_ge.push_back(lg);
    }
    std::vector<int> partition;  // conjugate of parts_ge
    for (size_t i = 0; i < parts_ge.size(); ++i)
      for (int c = (i + 1 < parts_ge.size() ? parts_ge[i] - parts_ge[i + 1] : parts_ge[i]);
           c > 0; --c)
        partition.push_back(static_cast<int>(i) + 1);
    std::sort(partition.rbegin(), partition.rend());
    partitions[ell] = partition;
  }

  size_t k = 0;
  for (const auto& [ell, parts] : partitions) k = std::max(k, parts.size());
  std::vector<long long> descending(k, 1);
  for (const auto& [ell, parts] : partitions)
    for (size_t i = 0; i < parts.size(); ++i) {
      long long pw = 1;
      for (int j = 0; j < parts[i]; ++j) pw = snf::chk_mul(pw, ell);
      descending[i] = snf::chk_mul(descending[i], pw);
    }
  for (auto it = descending.rbegin(); it != descending.rend(); ++it)
    if (*it >= 2) out.factors.push_back(*it);
  return out;
}

}  // namespace ramify
