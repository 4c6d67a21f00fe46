#ifndef STICKEL_LINALG_HPP
#define STICKEL_LINALG_HPP

// Dense exact linear algebra: rational row reduction and integer normal
// forms (HNF/SNF).  Everything here is plain O(n^3) elimination; the desk
// scale of the rest of the project never needs more.

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stickel {

struct QMat {
  size_t rows = 0, cols = 0;
  std::vector<mpq_class> a;

  QMat() = default;
  QMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, mpq_class(0)) {}

  mpq_class& at(size_t i, size_t j) { return a[i * cols + j]; }
  const mpq_class& at(size_t i, size_t j) const { return a[i * cols + j]; }

  static QMat identity(size_t n) {
    QMat m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  QMat transpose() const {
    QMat t(cols, rows);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool operator==(const QMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline QMat mul(const QMat& x, const QMat& y) {
  assert(x.cols == y.rows);
  QMat z(x.rows, y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (size_t j = 0; j < y.cols; ++j)
        z.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return z;
}

inline std::vector<mpq_class> mul_vec(const QMat& m, const std::vector<mpq_class>& v) {
  assert(m.cols == v.size());
  std::vector<mpq_class> out(m.rows, mpq_class(0));
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j)
      if (m.at(i, j) != 0) out[i] += m.at(i, j) * v[j];
  return out;
}

// In-place reduced row echelon form; returns the pivot column of each
// pivot row in order.
inline std::vector<size_t> rref(QMat& m) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
    size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != row)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
    mpq_class inv = 1 / m.at(row, col);
    for (size_t j = col; j < m.cols; ++j) m.at(row, j) *= inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      mpq_class f = m.at(i, col);
      for (size_t j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }

// Right kernel: columns form a basis of { x : m x = 0 }.
inline QMat kernel(QMat m) {
  std::vector<size_t> pivots = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (size_t p : pivots) is_pivot[p] = true;
  std::vector<size_t> free_cols;
  for (size_t j = 0; j < m.cols; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  QMat k(m.cols, free_cols.size());
  for (size_t fi = 0; fi < free_cols.size(); ++fi) {
    size_t f = free_cols[fi];
    k.at(f, fi) = 1;
    for (size_t r = 0; r < pivots.size(); ++r) k.at(pivots[r], fi) = -m.at(r, f);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Integer lattices.  A lattice is presented by the columns of an integer
// matrix; hnf() returns the unique column-style Hermite normal form, so two
// lattices are equal iff their HNFs are identical.
// ---------------------------------------------------------------------------

struct ZMat {
  size_t rows = 0, cols = 0;
  std::vector<mpz_class> a;

  ZMat() = default;
  ZMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, mpz_class(0)) {}

  mpz_class& at(size_t i, size_t j) { return a[i * cols + j]; }
  const mpz_class& at(size_t i, size_t j) const { return a[i * cols + j]; }

  bool operator==(const ZMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

// Column HNF.  The result has one column per lattice basis vector, pivot
// rows strictly increasing, positive pivots, and entries left of a pivot
// reduced into [0, pivot).
inline ZMat hnf(ZMat m) {
  size_t pivot_col = 0;
  std::vector<size_t> pivot_rows;
  std::vector<size_t> pivot_cols;
  for (size_t r = 0; r < m.rows && pivot_col < m.cols; ++r) {
    // Euclid across the active columns until row r has one nonzero entry.
    while (true) {
      size_t best = m.cols;
      for (size_t j = pivot_col; j < m.cols; ++j) {
        if (m.at(r, j) == 0) continue;
        if (best == m.cols || cmp(abs(m.at(r, j)), abs(m.at(r, best))) < 0) best = j;
      }
      if (best == m.cols) break;  // row r is zero on active columns
      bool reduced_any = false;
      for (size_t j = pivot_col; j < m.cols; ++j) {
        if (j == best || m.at(r, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m.at(r, j).get_mpz_t(), m.at(r, best).get_mpz_t());
        if (q != 0)
          for (size_t i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, best);
        if (m.at(r, j) != 0) reduced_any = true;
      }
      if (!reduced_any) {
        // single nonzero entry left; move it into the pivot slot
        if (best != pivot_col)
          for (size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, best), m.at(i, pivot_col));
        if (m.at(r, pivot_col) < 0)
          for (size_t i = 0; i < m.rows; ++i) m.at(i, pivot_col) = -m.at(i, pivot_col);
        pivot_rows.push_back(r);
        pivot_cols.push_back(pivot_col);
        ++pivot_col;
        break;
      }
    }
  }
  // Reduce entries left of each pivot.
  for (size_t k = 0; k < pivot_cols.size(); ++k) {
    size_t r = pivot_rows[k], c = pivot_cols[k];
    for (size_t j = 0; j < c; ++j) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m.at(r, j).get_mpz_t(), m.at(r, c).get_mpz_t());
      if (q != 0)
        for (size_t i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, c);
    }
  }
  ZMat h(m.rows, pivot_col);
  for (size_t j = 0; j < pivot_col; ++j)
    for (size_t i = 0; i < m.rows; ++i) h.at(i, j) = m.at(i, j);
  return h;
}

// Membership of v in the column lattice of an HNF basis.
inline bool hnf_contains(const ZMat& h, const std::vector<mpz_class>& v) {
  assert(h.rows == v.size());
  std::vector<mpz_class> w = v;
  size_t col = 0;
  for (size_t r = 0; r < h.rows; ++r) {
    bool pivot_here = false;
    if (col < h.cols && h.at(r, col) != 0) {
      // pivot row of column `col` is the first nonzero row
      pivot_here = true;
      for (size_t i = 0; i < r; ++i)
        if (h.at(i, col) != 0) { pivot_here = false; break; }
    }
    if (pivot_here) {
      mpz_class q, rem;
      mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), w[r].get_mpz_t(), h.at(r, col).get_mpz_t());
      if (rem != 0) return false;
      if (q != 0)
        for (size_t i = r; i < h.rows; ++i) w[i] -= q * h.at(i, col);
      ++col;
    } else if (w[r] != 0) {
      return false;
    }
  }
  return true;
}

// Smith normal form of a small matrix, tracking the right transform:
// returns diagonal d and unimodular V with  U*m*V = diag(d)  for some
// unimodular U.  Used for abelian group structure computations only.
inline void snf_with_right_transform(ZMat m, std::vector<mpz_class>& d, ZMat& v) {
  size_t n = std::min(m.rows, m.cols);
  v = ZMat(m.cols, m.cols);
  for (size_t i = 0; i < m.cols; ++i) v.at(i, i) = 1;
  size_t t = 0;
  while (t < n) {
    // find a nonzero entry in the remaining block
    size_t pi = m.rows, pj = m.cols;
    for (size_t i = t; i < m.rows; ++i)
      for (size_t j = t; j < m.cols; ++j)
        if (m.at(i, j) != 0 && (pi == m.rows || cmp(abs(m.at(i, j)), abs(m.at(pi, pj))) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi == m.rows) break;
    if (pi != t)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(pi, j), m.at(t, j));
    if (pj != t) {
      for (size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, pj), m.at(i, t));
      for (size_t i = 0; i < v.rows; ++i) std::swap(v.at(i, pj), v.at(i, t));
    }
    bool dirty = false;
    for (size_t i = t + 1; i < m.rows; ++i) {
      if (m.at(i, t) == 0) continue;
      mpz_class q = m.at(i, t) / m.at(t, t);
      for (size_t j = 0; j < m.cols; ++j) m.at(i, j) -= q * m.at(t, j);
      if (m.at(i, t) != 0) dirty = true;
    }
    for (size_t j = t + 1; j < m.cols; ++j) {
      if (m.at(t, j) == 0) continue;
      mpz_class q = m.at(t, j) / m.at(t, t);
      for (size_t i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, t);
      for (size_t i = 0; i < v.rows; ++i) v.at(i, j) -= q * v.at(i, t);
      if (m.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;
    // divisibility condition d_t | entries below-right
    bool fixed = true;
    for (size_t i = t + 1; i < m.rows && fixed; ++i)
      for (size_t j = t + 1; j < m.cols && fixed; ++j)
        if (m.at(i, j) % m.at(t, t) != 0) {
          for (size_t jj = 0; jj < m.cols; ++jj) m.at(t, jj) += m.at(i, jj);
          fixed = false;
        }
    if (!fixed) continue;
    if (m.at(t, t) < 0) {
      for (size_t i = 0; i < m.rows; ++i) m.at(i, t) = -m.at(i, t);
      for (size_t i = 0; i < v.rows; ++i) v.at(i, t) = -v.at(i, t);
    }
    ++t;
  }
  d.assign(n, mpz_class(0));
  for (size_t i = 0; i < t; ++i) d[i] = m.at(i, i);
}

// Exact inverse of a unimodular integer matrix.
inline ZMat unimodular_inverse(const ZMat& v) {
  assert(v.rows == v.cols);
  size_t n = v.rows;
  QMat aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug.at(i, j) = mpq_class(v.at(i, j));
    aug.at(i, n + i) = 1;
  }
  rref(aug);
  ZMat inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      mpq_class q = aug.at(i, n + j);
      if (q.get_den() != 1) throw std::runtime_error("unimodular_inverse: matrix not unimodular");
      inv.at(i, j) = q.get_num();
    }
  return inv;
}

}  // namespace stickel

#endif
