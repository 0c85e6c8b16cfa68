#pragma once

#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include "ramify/errors.hpp"

namespace ramify {
namespace snf {

using Row = std::vector<long long>;
using Mat = std::vector<Row>;

inline long long chk_add(long long a, long long b) {
  long long r;
  require(!__builtin_add_overflow(a, b, &r), errc::PreconditionViolated,
          "integer overflow in lattice reduction");
  return r;
}
inline long long chk_mul(long long a, long long b) {
  long long r;
  require(!__builtin_mul_overflow(a, b, &r), errc::PreconditionViolated,
          "integer overflow in lattice reduction");
  return r;
}

// Incremental row-echelon accumulator for an integer row lattice; pivots kept
// per column via Euclidean elimination, so rank and pivot structure are
// available after each added row.
//
// With modulus m > 0 the object represents span(rows) + m*Z^cols and keeps
// every entry in [0, m). Plain Euclidean echelon forms suffer exponential
// coefficient fill-in on wide matrices; the modular form bounds all
// intermediates by m^2 and is the only mode safe for hundreds of columns.
class RowLattice {
 public:
  explicit RowLattice(int cols, long long modulus = 0) : cols_(cols), mod_(modulus), pivot_row_(cols, -1) {
    require(modulus >= 0, errc::PreconditionViolated, "lattice modulus must be nonnegative");
  }

  int cols() const { return cols_; }
  long long modulus() const { return mod_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const Mat& rows() const { return rows_; }

  // returns true if the row increased the rank
  bool add_row(Row r) {
    require(static_cast<int>(r.size()) == cols_, errc::LengthMismatch, "row width mismatch");
    if (mod_ > 0)
      for (auto& x : r) x = red(x);
    for (int c = 0; c < cols_; ++c) {
      if (r[c] == 0) continue;
      int pr = pivot_row_[c];
      if (pr < 0) {
        if (r[c] < 0)
          for (auto& x : r) x = -x;
        pivot_row_[c] = static_cast<int>(rows_.size());
        pivot_col_.push_back(c);
        rows_.push_back(std::move(r));
        return true;
      }
      // Euclid on column c between r and the pivot row
      Row& p = rows_[pr];
      while (r[c] != 0) {
        long long q = p[c] / r[c];
        if (q != 0)
          for (int k = 0; k < cols_; ++k) p[k] = red(chk_add(p[k], chk_mul(-q, r[k])));
        if (p[c] == 0) {
          std::swap(p, r);
          continue;
        }
        q = r[c] / p[c];
        for (int k = 0; k < cols_; ++k) r[k] = red(chk_add(r[k], chk_mul(-q, p[k])));
      }
      if (p[c] < 0)
        for (auto& x : p) x = -x;
    }
    return false;
  }

 private:
  long long red(long long v) const {
    if (mod_ == 0) return v;
    v %= mod_;
    return v < 0 ? v + mod_ : v;
  }

  int cols_;
  long long mod_;
  Mat rows_;
  std::vector<int> pivot_row_;  // column -> row index or -1
  std::vector<int> pivot_col_;
};

// Smith normal form diagonal of an integer matrix (destructive on a copy).
// Returns d_1 | d_2 | ... | d_r (positive), r = rank.
//
// With modulus m > 0 the diagonal computed is that of span(rows) + m*Z^cols.
// Entries are normalized into [0, m) throughout; each reduction moves a row
// by an element of m*Z^cols and column operations fix m*Z^cols, so the
// lattice-plus-m*Z^cols is preserved even though the row span itself drifts.
// Writing the drifted span as U diag(d_i) V, adding m*Z^cols turns each d_i
// into gcd(d_i, m) and supplies m for every column without a pivot, which
// keeps the divisibility chain. The result has exactly cols entries, each
// dividing m.
inline std::vector<long long> smith_diagonal(Mat m, long long modulus = 0, size_t ncols = 0) {
  std::vector<long long> diag;
  size_t cols = m.empty() ? ncols : m[0].size();
  if (modulus > 0) {
    require(cols > 0, errc::PreconditionViolated, "modular Smith form needs explicit columns");
    for (auto& row : m)
      for (auto& x : row) {
        x %= modulus;
        if (x < 0) x += modulus;
      }
  }
  size_t rows = m.size();
  auto red = [&](long long v) {
    if (modulus == 0) return v;
    v %= modulus;
    return v < 0 ? v + modulus : v;
  };
  size_t k = 0;
  while (k < rows && k < cols) {
    // locate a minimal nonzero entry in the trailing submatrix
    size_t bi = k, bj = k;
    long long best = 0;
    for (size_t i = k; i < rows; ++i)
      for (size_t j = k; j < cols; ++j) {
        long long a = m[i][j] < 0 ? -m[i][j] : m[i][j];
        if (a != 0 && (best == 0 || a < best)) {
          best = a;
          bi = i;
          bj = j;
        }
      }
    if (best == 0) break;
    std::swap(m[k], m[bi]);
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][k], m[i][bj]);

    bool clean = true;
    for (size_t i = k + 1; i < rows; ++i) {
      long long q = m[i][k] / m[k][k];
      if (q != 0)
        for (size_t j = k; j < cols; ++j) m[i][j] = red(chk_add(m[i][j], chk_mul(-q, m[k][j])));
      if (m[i][k] != 0) clean = false;
    }
    for (size_t j = k + 1; j < cols; ++j) {
      long long q = m[k][j] / m[k][k];
      if (q != 0)
        for (size_t i = k; i < rows; ++i) m[i][j] = red(chk_add(m[i][j], chk_mul(-q, m[i][k])));
      if (m[k][j] != 0) clean = false;
    }
    if (!clean) continue;  // remainders left; re-select the pivot

    // divisibility: pivot must divide the rest of the submatrix
    bool fixed = false;
    for (size_t i = k + 1; i < rows && !fixed; ++i)
      for (size_t j = k + 1; j < cols && !fixed; ++j)
        if (m[i][j] % m[k][k] != 0) {
          for (size_t t = k; t < cols; ++t) m[k][t] = red(chk_add(m[k][t], m[i][t]));
          fixed = true;
        }
    if (fixed) continue;

    diag.push_back(m[k][k] < 0 ? -m[k][k] : m[k][k]);
    ++k;
  }
  if (modulus > 0) {
    for (auto& d : diag) d = std::gcd(d, modulus);
    while (diag.size() < cols) diag.push_back(modulus);
  }
  return diag;
}

}  // namespace snf
}  // namespace ramify
