#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "logprism/zmod.hpp"

namespace logprism {

// Integer vectors and lattices in Z^k. Everything here is exact over Z; entries
// stay small in our use, overflow is detected rather than wrapped.

using IVec = std::vector<int64_t>;

inline int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("Overflow", "integer lattice arithmetic");
  return r;
}

inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("Overflow", "integer lattice arithmetic");
  return r;
}

inline IVec vadd(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
  return r;
}

inline IVec vsub(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], -b[i]);
  return r;
}

inline IVec vscale(int64_t c, const IVec& a) {
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = checked_mul(c, a[i]);
  return r;
}

inline int64_t dot(const IVec& a, const IVec& b) {
  int64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

inline bool is_zero_vec(const IVec& v) {
  return std::all_of(v.begin(), v.end(), [](int64_t x) { return x == 0; });
}

inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::string vec_string(const IVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// Integer matrix acting on column vectors: rows x cols.
struct ZMat {
  int rows = 0, cols = 0;
  std::vector<int64_t> a;

  ZMat() = default;
  ZMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}

  int64_t& at(int i, int j) { return a[size_t(i) * cols + j]; }
  int64_t at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static ZMat identity(int n) {
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static ZMat scalar(int n, int64_t c) {
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = c;
    return m;
  }
  // columns given as vectors (image of basis vectors)
  static ZMat from_columns(const std::vector<IVec>& cs, int r) {
    ZMat m(r, int(cs.size()));
    for (size_t j = 0; j < cs.size(); ++j)
      for (int i = 0; i < r; ++i) m.at(i, int(j)) = cs[j][i];
    return m;
  }
  static ZMat from_rows(const std::vector<IVec>& rs, int c) {
    ZMat m(int(rs.size()), c);
    for (size_t i = 0; i < rs.size(); ++i)
      for (int j = 0; j < c; ++j) m.at(int(i), j) = rs[i][j];
    return m;
  }

  IVec row(int i) const { return IVec(a.begin() + size_t(i) * cols, a.begin() + size_t(i + 1) * cols); }
  IVec col(int j) const {
    IVec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
  }

  IVec operator()(const IVec& x) const {
    if (int(x.size()) != cols) throw Error("DimensionMismatch", "lattice map applied to " + vec_string(x));
    IVec y(rows, 0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) y[i] = checked_add(y[i], checked_mul(at(i, j), x[j]));
    return y;
  }

  ZMat transpose() const {
    ZMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool operator==(const ZMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline ZMat operator*(const ZMat& x, const ZMat& y) {
  if (x.cols != y.rows) throw Error("DimensionMismatch", "integer matrix product");
  ZMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l)
      if (x.at(i, l))
        for (int j = 0; j < y.cols; ++j) r.at(i, j) = checked_add(r.at(i, j), checked_mul(x.at(i, l), y.at(l, j)));
  return r;
}

// Unimodular row reduction pivoting on the first `pivot_cols` columns.
// Returns all rows (zero rows on the bottom of the pivot block are kept, so
// the caller can read off a kernel from trailing augmented columns).
inline std::vector<IVec> echelon_rows(std::vector<IVec> rows, int pivot_cols, std::vector<int>* pivots = nullptr) {
  int r = 0;
  const int nr = int(rows.size());
  if (pivots) pivots->clear();
  for (int c = 0; c < pivot_cols && r < nr; ++c) {
    while (true) {
      int best = -1;
      for (int i = r; i < nr; ++i)
        if (rows[i][c] != 0 && (best < 0 || std::llabs(rows[i][c]) < std::llabs(rows[best][c]))) best = i;
      if (best < 0) break;
      std::swap(rows[r], rows[best]);
      bool clean = true;
      for (int i = r + 1; i < nr; ++i) {
        if (rows[i][c] == 0) continue;
        int64_t q = floor_div(rows[i][c], rows[r][c]);
        rows[i] = vsub(rows[i], vscale(q, rows[r]));
        if (rows[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (r < nr && rows[r][c] != 0) {
      if (rows[r][c] < 0) rows[r] = vscale(-1, rows[r]);
      for (int i = 0; i < r; ++i) {
        int64_t q = floor_div(rows[i][c], rows[r][c]);
        if (q) rows[i] = vsub(rows[i], vscale(q, rows[r]));
      }
      if (pivots) pivots->push_back(c);
      ++r;
    }
  }
  return rows;
}

// Hermite normal form basis of the lattice spanned by `gens` in Z^k.
struct Lattice {
  int k = 0;
  std::vector<IVec> basis;  // HNF rows
  std::vector<int> pivots;

  Lattice() = default;
  Lattice(int k_, const std::vector<IVec>& gens) : k(k_) {
    for (auto& g : gens)
      if (int(g.size()) != k) throw Error("DimensionMismatch", "lattice generator " + vec_string(g));
    auto rows = echelon_rows(gens, k, &pivots);
    rows.resize(pivots.size());
    basis = std::move(rows);
  }

  int rank() const { return int(basis.size()); }

  // canonical representative of v modulo the lattice
  IVec reduce(IVec v) const {
    for (size_t i = 0; i < basis.size(); ++i) {
      int c = pivots[i];
      int64_t q = floor_div(v[c], basis[i][c]);
      if (q) v = vsub(v, vscale(q, basis[i]));
    }
    return v;
  }

  bool contains(const IVec& v) const { return is_zero_vec(reduce(v)); }

  // coordinates in the HNF basis, if v lies in the lattice
  std::optional<IVec> coords(IVec v) const {
    IVec c(basis.size(), 0);
    for (size_t i = 0; i < basis.size(); ++i) {
      int col = pivots[i];
      if (v[col] % basis[i][col] != 0) return std::nullopt;
      c[i] = v[col] / basis[i][col];
      v = vsub(v, vscale(c[i], basis[i]));
    }
    if (!is_zero_vec(v)) return std::nullopt;
    return c;
  }

  IVec combine(const IVec& c) const {
    IVec v(k, 0);
    for (size_t i = 0; i < basis.size(); ++i) v = vadd(v, vscale(c[i], basis[i]));
    return v;
  }

  bool operator==(const Lattice& o) const { return k == o.k && basis == o.basis; }
  bool contains(const Lattice& o) const {
    return std::all_of(o.basis.begin(), o.basis.end(), [&](const IVec& b) { return contains(b); });
  }
};

// Basis of {x in Z^n : A x = 0}.
inline std::vector<IVec> kernel_z(const ZMat& A) {
  const int n = A.cols, m = A.rows;
  std::vector<IVec> rows(n, IVec(m + n, 0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) rows[j][i] = A.at(i, j);
    rows[j][m + j] = 1;
  }
  std::vector<int> piv;
  rows = echelon_rows(rows, m, &piv);
  std::vector<IVec> ker;
  for (int r = int(piv.size()); r < n; ++r) ker.emplace_back(rows[r].begin() + m, rows[r].end());
  return Lattice(n, ker).basis;
}

// Some x in Z^n with A x = b.
inline std::optional<IVec> solve_z(const ZMat& A, const IVec& b) {
  const int n = A.cols, m = A.rows;
  std::vector<IVec> rows(n, IVec(m + n, 0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) rows[j][i] = A.at(i, j);
    rows[j][m + j] = 1;
  }
  std::vector<int> piv;
  rows = echelon_rows(rows, m, &piv);
  // rows[r][0..m) spans the image; track combinations in the tail
  IVec rem = b, x(n, 0);
  for (size_t r = 0; r < piv.size(); ++r) {
    int c = piv[r];
    if (rem[c] % rows[r][c] != 0) return std::nullopt;
    int64_t q = rem[c] / rows[r][c];
    for (int i = 0; i < m; ++i) rem[i] = checked_add(rem[i], -checked_mul(q, rows[r][i]));
    for (int j = 0; j < n; ++j) x[j] = checked_add(x[j], checked_mul(q, rows[r][m + j]));
  }
  if (!is_zero_vec(rem)) return std::nullopt;
  return x;
}

// Invariant factors (nonzero, divisibility-ordered) of an integer matrix.
inline std::vector<int64_t> invariant_factors(ZMat A) {
  std::vector<int64_t> d;
  int t = 0;
  while (t < std::min(A.rows, A.cols)) {
    int pi = -1, pj = -1;
    for (int i = t; i < A.rows; ++i)
      for (int j = t; j < A.cols; ++j)
        if (A.at(i, j) && (pi < 0 || std::llabs(A.at(i, j)) < std::llabs(A.at(pi, pj)))) pi = i, pj = j;
    if (pi < 0) break;
    for (int j = 0; j < A.cols; ++j) std::swap(A.at(t, j), A.at(pi, j));
    for (int i = 0; i < A.rows; ++i) std::swap(A.at(i, t), A.at(i, pj));
    bool done = true;
    for (int i = t + 1; i < A.rows; ++i) {
      int64_t q = floor_div(A.at(i, t), A.at(t, t));
      for (int j = t; j < A.cols; ++j) A.at(i, j) = checked_add(A.at(i, j), -checked_mul(q, A.at(t, j)));
      if (A.at(i, t)) done = false;
    }
    for (int j = t + 1; j < A.cols; ++j) {
      int64_t q = floor_div(A.at(t, j), A.at(t, t));
      for (int i = t; i < A.rows; ++i) A.at(i, j) = checked_add(A.at(i, j), -checked_mul(q, A.at(i, t)));
      if (A.at(t, j)) done = false;
    }
    if (!done) continue;
    // enforce divisibility against the rest of the block
    int64_t piv = A.at(t, t);
    int bad = -1;
    for (int i = t + 1; i < A.rows && bad < 0; ++i)
      for (int j = t + 1; j < A.cols; ++j)
        if (A.at(i, j) % piv) {
          bad = i;
          break;
        }
    if (bad >= 0) {
      for (int j = t; j < A.cols; ++j) A.at(t, j) = checked_add(A.at(t, j), A.at(bad, j));
      continue;
    }
    d.push_back(std::llabs(piv));
    ++t;
  }
  return d;
}

}  // namespace logprism
