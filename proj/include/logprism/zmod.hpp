#pragma once

// Scalars and dense matrices over Z/p^k, with Smith normal form.
// Z/p^k is a chain ring: every ideal is (p^j), so pivoting on the entry of
// least p-adic valuation always divides the rest of the active block.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace logprism {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

inline bool is_prime(int64_t v) {
  if (v < 2) return false;
  for (int64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline int64_t mod_norm(int64_t a, int64_t m) {
  if (m == 1) return 0;
  a %= m;
  return a < 0 ? a + m : a;
}

inline int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

// v_p(a) for a in Z/p^k, with v_p(0) = k.
inline int valuation(int64_t a, int p, int k) {
  int64_t m = ipow(p, k);
  a = mod_norm(a, m);
  if (a == 0) return k;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

inline int64_t inv_mod(int64_t a, int64_t m) {
  int64_t g = m, x = 0, x1 = 1, a1 = mod_norm(a, m);
  while (a1) {
    int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw Error("NotAUnit", std::to_string(a) + " mod " + std::to_string(m));
  return mod_norm(x, m);
}

// Exact binomials up to 66 choose k fit in uint64.
inline uint64_t binom_exact(int n, int k) {
  static const auto table = [] {
    std::vector<std::vector<uint64_t>> t(67);
    for (int i = 0; i <= 66; ++i) {
      t[i].assign(i + 1, 1);
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (k < 0 || k > n) return 0;
  if (n > 66) throw Error("Overflow", "binomial beyond 66");
  return table[n][k];
}

// m must be a prime power p^e.
inline int64_t binom_mod(int n, int k, int64_t m) {
  if (n <= 66) return static_cast<int64_t>(binom_exact(n, k) % static_cast<uint64_t>(m));
  if (k < 0 || k > n) return 0;
  if (m == 1) return 0;
  int64_t p = 2;
  while (m % p) ++p;
  int v = 0;
  int64_t unit = 1;
  auto absorb = [&](int64_t f, int sign) {
    while (f % p == 0) {
      f /= p;
      v += sign;
    }
    f %= m;
    unit = mul_mod(unit, sign > 0 ? f : inv_mod(f, m), m);
  };
  for (int i = 1; i <= k; ++i) {
    absorb(n - k + i, 1);
    absorb(i, -1);
  }
  int64_t r = unit;
  for (int i = 0; i < v && r; ++i) r = mul_mod(r, p, m);
  return r;
}

// p^j / j! as an element of Z/p^k (it is p-integral).
inline int64_t p_pow_over_fact(int p, int j, int k) {
  int64_t m = ipow(p, k);
  int vf = 0;
  int64_t unit = 1;
  for (int i = 2; i <= j; ++i) {
    int64_t f = i;
    while (f % p == 0) {
      f /= p;
      ++vf;
    }
    unit = mul_mod(unit, mod_norm(f, m), m);
  }
  int e = j - vf;
  if (e >= k) return 0;
  return mul_mod(ipow(p, e) % m, inv_mod(unit, m), m);
}

// (a)! / (b)! for a >= b, reduced mod m.
inline int64_t fact_ratio_mod(int a, int b, int64_t m) {
  int64_t r = 1 % m;
  for (int i = b + 1; i <= a; ++i) r = mul_mod(r, i % m, m);
  return r;
}

// Dense matrix over Z/p^k, row-major, entries normalized to [0, p^k).
struct Mat {
  int rows = 0, cols = 0;
  int p = 2, k = 1;
  std::vector<int64_t> a;

  Mat() = default;
  Mat(int r, int c, int p_, int k_) : rows(r), cols(c), p(p_), k(k_), a(size_t(r) * c, 0) {}

  int64_t mod() const { return ipow(p, k); }
  int64_t& at(int i, int j) { return a[size_t(i) * cols + j]; }
  int64_t at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static Mat identity(int n, int p, int k) {
    Mat m(n, n, p, k);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1 % m.mod();
    return m;
  }

  bool is_zero() const {
    return std::all_of(a.begin(), a.end(), [](int64_t v) { return v == 0; });
  }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && p == o.p && k == o.k && a == o.a;
  }
};

inline Mat operator*(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw Error("DimensionMismatch", "matrix product");
  Mat r(x.rows, y.cols, x.p, std::min(x.k, y.k));
  int64_t m = r.mod();
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l) {
      int64_t v = x.at(i, l) % m;
      if (!v) continue;
      for (int j = 0; j < y.cols; ++j) {
        int64_t w = y.at(l, j);
        if (w) r.at(i, j) = (r.at(i, j) + mul_mod(v, w, m)) % m;
      }
    }
  return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
  Mat r = x;
  int64_t m = r.mod();
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = mod_norm(x.a[i] - y.a[i], m);
  return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
  Mat r = x;
  int64_t m = r.mod();
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = (x.a[i] + y.a[i]) % m;
  return r;
}

inline Mat reduce_mod(const Mat& x, int k) {
  Mat r(x.rows, x.cols, x.p, k);
  int64_t m = r.mod();
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] % m;
  return r;
}

inline Mat hcat(const Mat& x, const Mat& y) {
  if (x.rows != y.rows) throw Error("DimensionMismatch", "hcat");
  Mat r(x.rows, x.cols + y.cols, x.p, x.k);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
  }
  return r;
}

inline Mat column_block(const Mat& x, int r0, int r1) {
  Mat r(r1 - r0, x.cols, x.p, x.k);
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(i - r0, j) = x.at(i, j);
  return r;
}

struct SmithResult {
  // row_ops * M * col_ops = D; D has diag[i] = p^{vals[i]} for i < rank and
  // zeros elsewhere.  row_inv = row_ops^{-1}.
  Mat row_ops, row_inv, col_ops;
  std::vector<int> vals;  // non-decreasing valuations of the nonzero pivots
  int rank() const { return int(vals.size()); }
};

struct SmithOptions {
  bool rows = true;
  bool row_inverse = true;
  bool cols = true;
};

inline SmithResult smith_normal_form(Mat M, SmithOptions opt = {}) {
  const int p = M.p, k = M.k;
  const int64_t m = M.mod();
  SmithResult res;
  if (opt.rows) res.row_ops = Mat::identity(M.rows, p, k);
  if (opt.row_inverse) res.row_inv = Mat::identity(M.rows, p, k);
  if (opt.cols) res.col_ops = Mat::identity(M.cols, p, k);

  // valuation cache for the active block
  auto val = [&](int64_t v) { return v == 0 ? k : valuation(v, p, k); };
  const int lim = std::min(M.rows, M.cols);
  for (int t = 0; t < lim; ++t) {
    int bi = -1, bj = -1, bv = k;
    for (int i = t; i < M.rows && bv > 0; ++i)
      for (int j = t; j < M.cols; ++j) {
        int64_t e = M.at(i, j);
        if (!e) continue;
        int v = val(e);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (bi < 0) break;
    if (bi != t) {
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(t, j), M.at(bi, j));
      if (opt.rows)
        for (int j = 0; j < M.rows; ++j) std::swap(res.row_ops.at(t, j), res.row_ops.at(bi, j));
      if (opt.row_inverse)
        for (int i = 0; i < M.rows; ++i) std::swap(res.row_inv.at(i, t), res.row_inv.at(i, bi));
    }
    if (bj != t) {
      for (int i = 0; i < M.rows; ++i) std::swap(M.at(i, t), M.at(i, bj));
      if (opt.cols)
        for (int i = 0; i < M.cols; ++i) std::swap(res.col_ops.at(i, t), res.col_ops.at(i, bj));
    }
    // normalize the pivot to p^bv
    int64_t piv = M.at(t, t);
    int64_t pv = ipow(p, bv);
    int64_t u = piv / pv;  // piv = pv * u exactly as integers in [0, m)
    int64_t uinv = inv_mod(u, m);
    if (u % m != 1) {
      for (int j = 0; j < M.cols; ++j) M.at(t, j) = mul_mod(M.at(t, j), uinv, m);
      if (opt.rows)
        for (int j = 0; j < M.rows; ++j) res.row_ops.at(t, j) = mul_mod(res.row_ops.at(t, j), uinv, m);
      if (opt.row_inverse)
        for (int i = 0; i < M.rows; ++i) res.row_inv.at(i, t) = mul_mod(res.row_inv.at(i, t), u, m);
    }
    // clear column t below and above
    for (int i = 0; i < M.rows; ++i) {
      if (i == t) continue;
      int64_t e = M.at(i, t);
      if (!e) continue;
      int64_t c = e / pv;  // exact since v(e) >= bv
      int64_t nc = mod_norm(-c, m);
      for (int j = t; j < M.cols; ++j)
        if (M.at(t, j)) M.at(i, j) = (M.at(i, j) + mul_mod(nc, M.at(t, j), m)) % m;
      if (opt.rows)
        for (int j = 0; j < M.rows; ++j)
          if (res.row_ops.at(t, j))
            res.row_ops.at(i, j) = (res.row_ops.at(i, j) + mul_mod(nc, res.row_ops.at(t, j), m)) % m;
      if (opt.row_inverse)
        for (int r = 0; r < M.rows; ++r)
          if (res.row_inv.at(r, i))
            res.row_inv.at(r, t) = (res.row_inv.at(r, t) + mul_mod(c % m, res.row_inv.at(r, i), m)) % m;
    }
    // clear row t to the right; row t is now (0..0, p^bv, *)
    for (int j = t + 1; j < M.cols; ++j) {
      int64_t e = M.at(t, j);
      if (!e) continue;
      int64_t c = e / pv;
      int64_t nc = mod_norm(-c, m);
      M.at(t, j) = 0;
      if (opt.cols)
        for (int i = 0; i < M.cols; ++i)
          if (res.col_ops.at(i, t))
            res.col_ops.at(i, j) = (res.col_ops.at(i, j) + mul_mod(nc, res.col_ops.at(i, t), m)) % m;
    }
    res.vals.push_back(bv);
  }
  return res;
}

// Elementary-divisor valuations only.
inline std::vector<int> elementary_divisors(const Mat& M) {
  return smith_normal_form(M, {false, false, false}).vals;
}

// Generators (as columns) of ker(M) in (Z/p^k)^cols.
inline Mat kernel(const Mat& M) {
  auto s = smith_normal_form(M, {false, false, true});
  std::vector<std::vector<int64_t>> gens;
  const int64_t m = M.mod();
  for (int j = 0; j < M.cols; ++j) {
    int64_t scale = 1;
    if (j < s.rank()) {
      int v = s.vals[j];
      if (v == 0) continue;
      scale = ipow(M.p, M.k - v);
    }
    std::vector<int64_t> g(M.cols);
    bool nz = false;
    for (int i = 0; i < M.cols; ++i) {
      g[i] = mul_mod(s.col_ops.at(i, j), scale, m);
      nz = nz || g[i];
    }
    if (nz) gens.push_back(std::move(g));
  }
  Mat K(M.cols, int(gens.size()), M.p, M.k);
  for (int j = 0; j < K.cols; ++j)
    for (int i = 0; i < M.cols; ++i) K.at(i, j) = gens[j][i];
  return K;
}

// Some x with M x = b, or nullopt.
inline std::optional<std::vector<int64_t>> solve(const Mat& M, const std::vector<int64_t>& b) {
  if (int(b.size()) != M.rows) throw Error("DimensionMismatch", "solve");
  auto s = smith_normal_form(M, {true, false, true});
  const int64_t m = M.mod();
  std::vector<int64_t> pb(M.rows, 0);
  for (int i = 0; i < M.rows; ++i) {
    int64_t acc = 0;
    for (int j = 0; j < M.rows; ++j)
      if (s.row_ops.at(i, j) && b[j]) acc = (acc + mul_mod(s.row_ops.at(i, j), mod_norm(b[j], m), m)) % m;
    pb[i] = acc;
  }
  std::vector<int64_t> y(M.cols, 0);
  for (int i = 0; i < M.rows; ++i) {
    if (i < s.rank()) {
      int64_t pv = ipow(M.p, s.vals[i]);
      if (pb[i] % pv != 0) return std::nullopt;
      y[i] = pb[i] / pv;
    } else if (pb[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<int64_t> x(M.cols, 0);
  for (int i = 0; i < M.cols; ++i) {
    int64_t acc = 0;
    for (int j = 0; j < M.cols; ++j)
      if (s.col_ops.at(i, j) && y[j]) acc = (acc + mul_mod(s.col_ops.at(i, j), y[j], m)) % m;
    x[i] = acc;
  }
  return x;
}

inline std::vector<int64_t> apply(const Mat& M, const std::vector<int64_t>& x) {
  std::vector<int64_t> r(M.rows, 0);
  const int64_t m = M.mod();
  for (int i = 0; i < M.rows; ++i) {
    int64_t acc = 0;
    for (int j = 0; j < M.cols; ++j)
      if (M.at(i, j) && x[j]) acc = (acc + mul_mod(M.at(i, j), mod_norm(x[j], m), m)) % m;
    r[i] = acc;
  }
  return r;
}

}  // namespace logprism
