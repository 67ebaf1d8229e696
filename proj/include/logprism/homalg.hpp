#pragma once

// Cochain complexes of finite free Z/p^n-modules, cohomology through Smith
// normal form, Koszul complexes, Bockstein and decalage, and cosimplicial
// bookkeeping.

#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "zmod.hpp"

namespace logprism {

using SparseVec = std::map<int, int64_t>;

// Column-major sparse matrix over Z/p^k.
struct SparseMat {
  int rows = 0, cols = 0;
  int64_t mod = 1;
  std::vector<SparseVec> col;

  SparseMat() = default;
  SparseMat(int r, int c, int64_t m) : rows(r), cols(c), mod(m), col(size_t(c)) {}

  static SparseMat identity(int n, int64_t m) {
    SparseMat I(n, n, m);
    for (int i = 0; i < n; ++i)
      if (1 % m) I.col[i][i] = 1;
    return I;
  }

  void add(int i, int j, int64_t v) {
    v = mod_norm(v, mod);
    if (!v) return;
    auto& c = col[j];
    auto it = c.find(i);
    if (it == c.end()) {
      c.emplace(i, v);
    } else {
      it->second = (it->second + v) % mod;
      if (!it->second) c.erase(it);
    }
  }
  int64_t at(int i, int j) const {
    auto it = col[j].find(i);
    return it == col[j].end() ? 0 : it->second;
  }
  bool is_zero() const {
    for (auto& c : col)
      if (!c.empty()) return false;
    return true;
  }
  friend bool operator==(const SparseMat& a, const SparseMat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.col == b.col;
  }
};

inline SparseVec sp_apply(const SparseMat& A, const SparseVec& x) {
  SparseVec out;
  for (auto& [j, xj] : x) {
    if (!xj) continue;
    for (auto& [i, a] : A.col[j]) {
      int64_t& s = out[i];
      s = (s + mul_mod(a, xj, A.mod)) % A.mod;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second ? std::next(it) : out.erase(it);
  return out;
}

inline SparseMat operator*(const SparseMat& A, const SparseMat& B) {
  if (A.cols != B.rows) throw Error("DimensionMismatch", "sparse product");
  SparseMat C(A.rows, B.cols, std::min(A.mod, B.mod));
  for (int j = 0; j < B.cols; ++j) C.col[j] = sp_apply(A, B.col[j]);
  return C;
}

inline SparseMat sp_combine(const SparseMat& A, const SparseMat& B, int64_t sb) {
  if (A.rows != B.rows || A.cols != B.cols) throw Error("DimensionMismatch", "sparse sum");
  SparseMat C = A;
  for (int j = 0; j < B.cols; ++j)
    for (auto& [i, v] : B.col[j]) C.add(i, j, mul_mod(v, mod_norm(sb, C.mod), C.mod));
  return C;
}
inline SparseMat operator+(const SparseMat& A, const SparseMat& B) { return sp_combine(A, B, 1); }
inline SparseMat operator-(const SparseMat& A, const SparseMat& B) { return sp_combine(A, B, -1); }

inline SparseMat sp_reduce(const SparseMat& A, int64_t m) {
  SparseMat B(A.rows, A.cols, m);
  for (int j = 0; j < A.cols; ++j)
    for (auto& [i, v] : A.col[j]) B.add(i, j, v % m);
  return B;
}

inline Mat to_dense(const SparseMat& A, const std::vector<int>& rows, const std::vector<int>& cols, int p, int k) {
  Mat M(int(rows.size()), int(cols.size()), p, k);
  std::map<int, int> ri;
  for (size_t i = 0; i < rows.size(); ++i) ri[rows[i]] = int(i);
  for (size_t j = 0; j < cols.size(); ++j)
    for (auto& [i, v] : A.col[cols[j]]) {
      auto it = ri.find(i);
      if (it != ri.end()) M.at(it->second, int(j)) = v % M.mod();
    }
  return M;
}

struct CochainComplex {
  int p = 2, n = 1;
  int lo = 0;  // degree of the first module
  std::vector<std::vector<std::string>> labels;
  std::vector<SparseMat> d;  // d[i]: module i -> module i+1

  int64_t mod() const { return ipow(p, n); }
  int length() const { return int(labels.size()); }
  int dim(int deg) const {
    int i = deg - lo;
    return (i < 0 || i >= length()) ? 0 : int(labels[i].size());
  }
  // Differential leaving degree deg (zero matrix off the ends).
  SparseMat diff(int deg) const {
    int i = deg - lo;
    if (i >= 0 && i + 1 < length()) return d[i];
    return SparseMat(dim(deg + 1), dim(deg), mod());
  }
};

inline bool d_squared_zero(const CochainComplex& X) {
  for (int i = 0; i + 2 < X.length(); ++i)
    if (!(X.d[i + 1] * X.d[i]).is_zero()) return false;
  return true;
}

inline CochainComplex reduce_complex(const CochainComplex& X, int k) {
  CochainComplex Y = X;
  Y.n = k;
  for (auto& m : Y.d) m = sp_reduce(m, Y.mod());
  return Y;
}

// H^i as a Z/p^n-module: direct sum of cyclic pieces Z/p^{order}.
struct Cohomology {
  int degree = 0;
  int free_rank = 0;                     // pieces of order p^n
  std::vector<int> torsion;              // exponents 0 < v < n, sorted
  std::vector<SparseVec> reps;           // one cocycle per piece
  std::vector<int> orders;               // exponent of each piece

  int total() const { return int(reps.size()); }
};

namespace detail {

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(size_t(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// H = ker(B) / im(A) on a dense block; reps in local coordinates.
inline void dense_cohomology(const Mat& A, const Mat& B, int r, int p, int n, std::vector<std::vector<int64_t>>& reps,
                             std::vector<int>& orders) {
  const int64_t m = ipow(p, n);
  // SNF of B^T gives V with B V = (column-echelon diagonal) and V^{-1}.
  Mat Bt(B.cols, B.rows, p, n);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) Bt.at(j, i) = B.at(i, j);
  auto s = smith_normal_form(Bt, {true, true, false});
  // x = V y with V = row_ops^T, V^{-1} = row_inv^T
  auto V = [&](int i, int j) { return s.row_ops.at(j, i); };
  auto Vinv = [&](int i, int j) { return s.row_inv.at(j, i); };
  std::vector<int> shift, order, idx;
  for (int j = 0; j < r; ++j) {
    int v = j < s.rank() ? s.vals[j] : n;  // B e_j has order-killing exponent
    int o = j < s.rank() ? v : n;
    if (o == 0) continue;
    idx.push_back(j);
    shift.push_back(n - o);
    order.push_back(o);
  }
  const int mk = int(idx.size());
  if (!mk) return;
  Mat Rel(mk, A.cols + mk, p, n);
  for (int c = 0; c < A.cols; ++c)
    for (int a = 0; a < mk; ++a) {
      int j = idx[a];
      int64_t y = 0;
      for (int l = 0; l < r; ++l)
        if (A.at(l, c)) y = (y + mul_mod(Vinv(j, l), A.at(l, c), m)) % m;
      int64_t ps = ipow(p, shift[a]);
      if (y % ps) throw Error("NotAComplex", "image leaves the kernel");
      Rel.at(a, c) = (y / ps) % m;
    }
  for (int a = 0; a < mk; ++a) Rel.at(a, A.cols + a) = ipow(p, order[a]) % m;
  auto t = smith_normal_form(Rel, {false, true, false});
  for (int i = 0; i < mk; ++i) {
    int w = i < t.rank() ? t.vals[i] : n;
    if (w == 0) continue;
    std::vector<int64_t> x(r, 0);
    for (int a = 0; a < mk; ++a) {
      int64_t c = t.row_inv.at(a, i);
      if (!c) continue;
      int64_t y = mul_mod(c, ipow(p, shift[a]) % m, m);
      for (int l = 0; l < r; ++l) x[l] = (x[l] + mul_mod(V(l, idx[a]), y, m)) % m;
    }
    reps.push_back(std::move(x));
    orders.push_back(w);
  }
}

}  // namespace detail

// Basis indices of degree i grouped by connectivity through d_{i-1} and d_i.
inline std::vector<std::vector<int>> components(const CochainComplex& X, int deg) {
  const int r0 = X.dim(deg - 1), r = X.dim(deg), r1 = X.dim(deg + 1);
  detail::DSU dsu(r0 + r + r1);
  SparseMat A = X.diff(deg - 1), B = X.diff(deg);
  for (int j = 0; j < r0; ++j)
    for (auto& [i, v] : A.col[j]) dsu.unite(j, r0 + i);
  for (int j = 0; j < r; ++j)
    for (auto& [i, v] : B.col[j]) dsu.unite(r0 + j, r0 + r + i);
  std::map<int, std::vector<int>> comp;
  for (int j = 0; j < r; ++j) comp[dsu.find(r0 + j)].push_back(j);
  std::vector<std::vector<int>> out;
  for (auto& kv : comp) out.push_back(kv.second);
  return out;
}

inline Cohomology cohomology(const CochainComplex& X, int deg) {
  Cohomology H;
  H.degree = deg;
  const int r = X.dim(deg);
  if (!r) return H;
  SparseMat A = X.diff(deg - 1), B = X.diff(deg);
  for (auto& comp : components(X, deg)) {
    std::set<int> acols, brows;
    std::set<int> cset(comp.begin(), comp.end());
    for (int j = 0; j < A.cols; ++j)
      for (auto& [i, v] : A.col[j])
        if (cset.count(i)) {
          acols.insert(j);
          break;
        }
    for (int j : comp)
      for (auto& [i, v] : B.col[j]) brows.insert(i);
    Mat Ad = to_dense(A, comp, {acols.begin(), acols.end()}, X.p, X.n);
    Mat Bd = to_dense(B, {brows.begin(), brows.end()}, comp, X.p, X.n);
    std::vector<std::vector<int64_t>> reps;
    std::vector<int> orders;
    detail::dense_cohomology(Ad, Bd, int(comp.size()), X.p, X.n, reps, orders);
    for (size_t a = 0; a < reps.size(); ++a) {
      SparseVec v;
      for (size_t l = 0; l < comp.size(); ++l)
        if (reps[a][l]) v[comp[l]] = reps[a][l];
      H.reps.push_back(std::move(v));
      H.orders.push_back(orders[a]);
      if (orders[a] == X.n)
        ++H.free_rank;
      else
        H.torsion.push_back(orders[a]);
    }
  }
  std::sort(H.torsion.begin(), H.torsion.end());
  return H;
}

// Is v a coboundary plus a combination of the given cocycles? Returns the
// coefficients on `basis` when it is.  Work is restricted to the components
// touched by v.
inline std::optional<std::vector<int64_t>> express_class(const CochainComplex& X, int deg, const Cohomology& H,
                                                         const SparseVec& v) {
  SparseMat A = X.diff(deg - 1);
  std::set<int> rows;
  for (auto& comp : components(X, deg)) {
    bool hit = false;
    for (int j : comp)
      if (v.count(j)) hit = true;
    for (auto& rep : H.reps)
      for (int j : comp)
        if (rep.count(j)) hit = true;
    if (hit) rows.insert(comp.begin(), comp.end());
  }
  std::vector<int> rv(rows.begin(), rows.end());
  std::map<int, int> ri;
  for (size_t i = 0; i < rv.size(); ++i) ri[rv[i]] = int(i);
  std::vector<int> acols;
  for (int j = 0; j < A.cols; ++j)
    for (auto& [i, x] : A.col[j])
      if (ri.count(i)) {
        acols.push_back(j);
        break;
      }
  const int nh = H.total();
  Mat M(int(rv.size()), nh + int(acols.size()), X.p, X.n);
  for (int a = 0; a < nh; ++a)
    for (auto& [i, x] : H.reps[a]) M.at(ri.at(i), a) = x;
  for (size_t c = 0; c < acols.size(); ++c)
    for (auto& [i, x] : A.col[acols[c]]) M.at(ri.at(i), nh + int(c)) = x;
  std::vector<int64_t> b(rv.size(), 0);
  for (auto& [i, x] : v) {
    auto it = ri.find(i);
    if (it == ri.end()) return std::nullopt;
    b[it->second] = x;
  }
  auto sol = solve(M, b);
  if (!sol) return std::nullopt;
  std::vector<int64_t> c(sol->begin(), sol->begin() + nh);
  for (int a = 0; a < nh; ++a) c[a] = c[a] % ipow(X.p, H.orders[a]);
  return c;
}

// Matrix of H^deg(f) in the rep bases (rows: target pieces, cols: source).
inline std::optional<Mat> induced_map(const CochainComplex& Xs, const Cohomology& Hs, const CochainComplex& Xt,
                                      const Cohomology& Ht, const SparseMat& f) {
  Mat out(Ht.total(), Hs.total(), Xt.p, Xt.n);
  for (int a = 0; a < Hs.total(); ++a) {
    auto c = express_class(Xt, Ht.degree, Ht, sp_apply(f, Hs.reps[a]));
    if (!c) return std::nullopt;
    for (int b = 0; b < Ht.total(); ++b) out.at(b, a) = (*c)[b];
  }
  return out;
}

// f_{i+1} d = d f_i on the common degrees.
inline bool is_chain_map(const CochainComplex& Xs, const CochainComplex& Xt, const std::vector<SparseMat>& f) {
  for (int i = 0; i + 1 < int(f.size()); ++i) {
    int deg = Xs.lo + i;
    if (!(f[i + 1] * Xs.diff(deg) == Xt.diff(deg) * f[i])) return false;
  }
  return true;
}

// Cohomological Koszul complex of commuting endomorphisms of a free module.
inline CochainComplex koszul_complex(int p, int n, const std::vector<std::string>& basis, const std::vector<SparseMat>& ops,
                                     const std::vector<std::string>& op_labels) {
  const int r = int(ops.size());
  for (int s = 0; s < r; ++s)
    for (int t = s + 1; t < r; ++t)
      if (!(ops[s] * ops[t] == ops[t] * ops[s]))
        throw Error("NotCommuting", op_labels[s] + " and " + op_labels[t]);
  CochainComplex X;
  X.p = p;
  X.n = n;
  const int64_t m = X.mod();
  const int N = int(basis.size());
  std::vector<std::vector<unsigned>> subsets(size_t(r + 1));
  for (unsigned S = 0; S < (1u << r); ++S) subsets[__builtin_popcount(S)].push_back(S);
  auto label = [&](unsigned S) {
    std::string s;
    for (int i = 0; i < r; ++i)
      if (S >> i & 1) s += (s.empty() ? "" : "^") + op_labels[i];
    return s;
  };
  for (int i = 0; i <= r; ++i) {
    std::vector<std::string> lab;
    for (unsigned S : subsets[i])
      for (auto& b : basis) lab.push_back(i == 0 ? b : b + " " + label(S));
    X.labels.push_back(lab);
  }
  for (int i = 0; i < r; ++i) {
    std::map<unsigned, int> pos;
    for (size_t k = 0; k < subsets[i + 1].size(); ++k) pos[subsets[i + 1][k]] = int(k);
    SparseMat D(int(subsets[i + 1].size()) * N, int(subsets[i].size()) * N, m);
    for (size_t k = 0; k < subsets[i].size(); ++k) {
      unsigned S = subsets[i][k];
      for (int s = 0; s < r; ++s) {
        if (S >> s & 1) continue;
        int sign = (__builtin_popcount(S & ((1u << s) - 1)) % 2) ? -1 : 1;
        int row0 = pos.at(S | (1u << s)) * N;
        for (int b = 0; b < N; ++b)
          for (auto& [i2, v] : ops[s].col[b]) D.add(row0 + i2, int(k) * N + b, sign * v);
      }
    }
    X.d.push_back(D);
  }
  return X;
}

// The submodule f^i X^i (columns) as a dense generator matrix.
inline Mat power_apply(const Mat& F, int e, int dim, int p, int n) {
  Mat P = Mat::identity(dim, p, n);
  for (int i = 0; i < e; ++i) P = F * P;
  return P;
}

// (eta_f X)^i = { x in f^i X^i : dx in f^{i+1} X^{i+1} }, returned as
// generators (columns).  F[i] is multiplication by f on X^i.
inline std::vector<Mat> eta_decalage(const CochainComplex& X, const std::vector<Mat>& F) {
  std::vector<Mat> out;
  for (int i = 0; i < X.length(); ++i) {
    const int deg = X.lo + i, r = X.dim(deg), r1 = X.dim(deg + 1);
    Mat Fi = power_apply(F[i], i, r, X.p, X.n);
    if (i + 1 >= X.length()) {
      out.push_back(Fi);
      continue;
    }
    Mat Fi1 = power_apply(F[i + 1], i + 1, r1, X.p, X.n);
    std::vector<int> allr(r), allr1(r1);
    std::iota(allr.begin(), allr.end(), 0);
    std::iota(allr1.begin(), allr1.end(), 0);
    Mat Dd = to_dense(X.diff(deg), allr1, allr, X.p, X.n);
    // kernel of [d F^i | -F^{i+1}] projected to the first block
    Mat left = Dd * Fi;
    Mat right(r1, r1, X.p, X.n);
    for (int a = 0; a < r1; ++a)
      for (int b = 0; b < r1; ++b) right.at(a, b) = mod_norm(-Fi1.at(a, b), X.mod());
    Mat K = kernel(hcat(left, right));
    Mat Y = column_block(K, 0, r);
    out.push_back(Fi * Y);
  }
  return out;
}

// Y with Phi = F^i Y for every degree, plus the decalage condition on the
// columns of Phi; nullopt when Phi does not factor.
inline std::optional<std::vector<Mat>> factor_through_eta(const CochainComplex& X, const std::vector<Mat>& F,
                                                          const std::vector<Mat>& Phi) {
  std::vector<Mat> Ys;
  for (int i = 0; i < int(Phi.size()); ++i) {
    const int deg = X.lo + i, r = X.dim(deg);
    Mat Fi = power_apply(F[i], i, r, X.p, X.n);
    Mat Y(r, Phi[i].cols, X.p, X.n);
    for (int c = 0; c < Phi[i].cols; ++c) {
      std::vector<int64_t> b(r);
      for (int a = 0; a < r; ++a) b[a] = Phi[i].at(a, c);
      auto s = solve(Fi, b);
      if (!s) return std::nullopt;
      for (int a = 0; a < r; ++a) Y.at(a, c) = (*s)[a];
    }
    if (i + 1 < X.length()) {
      const int r1 = X.dim(deg + 1);
      Mat Fi1 = power_apply(F[i + 1], i + 1, r1, X.p, X.n);
      std::vector<int> allr(r), allr1(r1);
      std::iota(allr.begin(), allr.end(), 0);
      std::iota(allr1.begin(), allr1.end(), 0);
      Mat DP = to_dense(X.diff(deg), allr1, allr, X.p, X.n) * Phi[i];
      for (int c = 0; c < DP.cols; ++c) {
        std::vector<int64_t> b(r1);
        for (int a = 0; a < r1; ++a) b[a] = DP.at(a, c);
        if (!solve(Fi1, b)) return std::nullopt;
      }
    }
    Ys.push_back(Y);
  }
  return Ys;
}

// Bockstein for 0 -> X/d -> X/d^2 -> X/d -> 0: `up` is multiplication by d
// from X1 = X/d into X2 = X/d^2, `down` the reduction X2 -> X1.
struct Bockstein {
  std::vector<Cohomology> H;  // H^i(X1)
  std::vector<Mat> beta;      // H^i -> H^{i+1} in rep coordinates
  bool squares_to_zero = true;
};

inline Bockstein bockstein(const CochainComplex& X1, const CochainComplex& X2, const std::vector<SparseMat>& up,
                           const std::vector<SparseMat>& down) {
  Bockstein B;
  for (int i = 0; i < X1.length(); ++i) B.H.push_back(cohomology(X1, X1.lo + i));
  auto dense_all = [&](const SparseMat& S, int p, int n) {
    std::vector<int> rr(S.rows), cc(S.cols);
    std::iota(rr.begin(), rr.end(), 0);
    std::iota(cc.begin(), cc.end(), 0);
    return to_dense(S, rr, cc, p, n);
  };
  for (int i = 0; i + 1 < X1.length(); ++i) {
    const int deg = X1.lo + i;
    Mat Dn = dense_all(down[i], X2.p, X2.n), Up = dense_all(up[i + 1], X2.p, X2.n);
    Mat beta(B.H[i + 1].total(), B.H[i].total(), X1.p, X1.n);
    for (int a = 0; a < B.H[i].total(); ++a) {
      std::vector<int64_t> b(X1.dim(deg), 0);
      for (auto& [j, v] : B.H[i].reps[a]) b[j] = v;
      auto lift = solve(Dn, b);
      if (!lift) throw Error("WindowNotStable", "reduction is not onto");
      SparseVec l;
      for (size_t j = 0; j < lift->size(); ++j)
        if ((*lift)[j]) l[int(j)] = (*lift)[j];
      SparseVec dl = sp_apply(X2.diff(deg), l);
      std::vector<int64_t> rhs(X2.dim(deg + 1), 0);
      for (auto& [j, v] : dl) rhs[j] = v;
      auto z = solve(Up, rhs);
      if (!z) throw Error("WindowNotStable", "connecting map leaves the window");
      SparseVec zz;
      for (size_t j = 0; j < z->size(); ++j)
        if ((*z)[j] % X1.mod()) zz[int(j)] = (*z)[j] % X1.mod();
      auto c = express_class(X1, deg + 1, B.H[i + 1], zz);
      if (!c) throw Error("WindowNotStable", "Bockstein image is not a cocycle");
      for (int b2 = 0; b2 < B.H[i + 1].total(); ++b2) beta.at(b2, a) = (*c)[b2];
    }
    B.beta.push_back(beta);
  }
  for (size_t i = 0; i + 1 < B.beta.size(); ++i) {
    Mat sq = B.beta[i + 1] * B.beta[i];
    for (int r = 0; r < sq.rows; ++r)
      for (int c = 0; c < sq.cols; ++c)
        if (sq.at(r, c) % ipow(X1.p, B.H[i + 2].orders[r])) B.squares_to_zero = false;
  }
  return B;
}

// Cosimplicial objects given by faces and degeneracies on elements.
template <class Elem>
struct Cosimplicial {
  int nmax = 0;
  std::function<std::vector<Elem>(int)> generators;
  std::function<Elem(int, int, const Elem&)> face;        // A^n -> A^{n+1}, j = 0..n+1
  std::function<Elem(int, int, const Elem&)> degeneracy;  // A^n -> A^{n-1}, j = 0..n-1
  std::function<bool(const Elem&, const Elem&)> equal;
};

struct IdentityReport {
  bool ok = true;
  std::string failure;  // "dd n=.. i=.. j=.. gen=.."
  int checked = 0;
};

inline std::string identity_tag(const char* kind, int n, int i, int j, size_t g) {
  return std::string(kind) + " n=" + std::to_string(n) + " i=" + std::to_string(i) + " j=" + std::to_string(j) +
         " gen=" + std::to_string(g);
}

template <class Elem>
IdentityReport check_cosimplicial_identities(const Cosimplicial<Elem>& C) {
  IdentityReport rep;
  auto fail = [&](std::string s) {
    if (rep.ok) rep.failure = std::move(s);
    rep.ok = false;
  };
  for (int n = 0; n <= C.nmax && rep.ok; ++n) {
    auto gens = C.generators(n);
    for (size_t g = 0; g < gens.size() && rep.ok; ++g) {
      const Elem& x = gens[g];
      // faces: d_j d_i = d_i d_{j-1} for i < j
      if (n + 2 <= C.nmax)
        for (int j = 1; j <= n + 2; ++j)
          for (int i = 0; i < j; ++i) {
            ++rep.checked;
            if (!C.equal(C.face(n + 1, j, C.face(n, i, x)), C.face(n + 1, i, C.face(n, j - 1, x))))
              return fail(identity_tag("dd", n, i, j, g)), rep;
          }
      // degeneracies: s_j s_i = s_i s_{j+1} for i <= j
      if (n >= 2)
        for (int i = 0; i <= n - 2; ++i)
          for (int j = i; j <= n - 2; ++j) {
            ++rep.checked;
            if (!C.equal(C.degeneracy(n - 1, j, C.degeneracy(n, i, x)), C.degeneracy(n - 1, i, C.degeneracy(n, j + 1, x))))
              return fail(identity_tag("ss", n, i, j, g)), rep;
          }
      // mixed: s_j d_i on A^n, landing in A^n
      if (n + 1 <= C.nmax)
        for (int j = 0; j <= n; ++j)
          for (int i = 0; i <= n + 1; ++i) {
            ++rep.checked;
            Elem lhs = C.degeneracy(n + 1, j, C.face(n, i, x));
            bool good;
            if (i == j || i == j + 1)
              good = C.equal(lhs, x);
            else if (i < j)
              good = C.equal(lhs, C.face(n - 1, i, C.degeneracy(n, j - 1, x)));
            else
              good = C.equal(lhs, C.face(n - 1, i - 1, C.degeneracy(n, j, x)));
            if (!good) return fail(identity_tag("sd", n, i, j, g)), rep;
          }
    }
  }
  return rep;
}

// Associated (unnormalized) complex of a cosimplicial module whose levels are
// free with the given bases and whose faces are matrices.
inline CochainComplex associated_complex(int p, int n, const std::vector<std::vector<std::string>>& bases,
                                         const std::vector<std::vector<SparseMat>>& faces) {
  CochainComplex X;
  X.p = p;
  X.n = n;
  X.labels = bases;
  const int64_t m = X.mod();
  for (size_t lvl = 0; lvl + 1 < bases.size(); ++lvl) {
    SparseMat D(int(bases[lvl + 1].size()), int(bases[lvl].size()), m);
    for (size_t j = 0; j < faces[lvl].size(); ++j) D = sp_combine(D, faces[lvl][j], (j % 2) ? -1 : 1);
    X.d.push_back(D);
  }
  return X;
}

inline std::string cohomology_string(const Cohomology& H, int n) {
  std::string s = "H^" + std::to_string(H.degree) + " = (Z/p^" + std::to_string(n) + ")^" + std::to_string(H.free_rank);
  for (int v : H.torsion) s += " + Z/p^" + std::to_string(v);
  return s;
}

}  // namespace logprism
