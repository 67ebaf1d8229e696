#pragma once

// Exact Laurent polynomials in q over Z, and their images in the finite
// coefficient rings Lambda = Z/p^n[t]/(...) with q = 1 + t.

#include <map>

#include "zlattice.hpp"

namespace logprism {

// sum_i c[i] q^(lo + i)
struct QPoly {
  int lo = 0;
  std::vector<int64_t> c;

  static QPoly constant(int64_t a) { return a ? QPoly{0, {a}} : QPoly{}; }
  static QPoly monomial(int e, int64_t a = 1) { return a ? QPoly{e, {a}} : QPoly{}; }

  bool is_zero() const { return c.empty(); }
  int hi() const { return lo + int(c.size()) - 1; }
  int64_t at(int e) const { return (e < lo || e > hi()) ? 0 : c[size_t(e - lo)]; }

  QPoly& trim() {
    size_t a = 0;
    while (a < c.size() && !c[a]) ++a;
    size_t b = c.size();
    while (b > a && !c[b - 1]) --b;
    c = std::vector<int64_t>(c.begin() + long(a), c.begin() + long(b));
    lo = c.empty() ? 0 : lo + int(a);
    return *this;
  }

  int64_t eval1() const {
    int64_t s = 0;
    for (int64_t v : c) s = checked_add(s, v);
    return s;
  }

  friend bool operator==(const QPoly& a, const QPoly& b) { return a.lo == b.lo && a.c == b.c; }

  std::string to_string() const {
    if (c.empty()) return "0";
    std::string s;
    for (int e = hi(); e >= lo; --e) {
      int64_t v = at(e);
      if (!v) continue;
      if (!s.empty()) s += v < 0 ? " - " : " + ";
      else if (v < 0) s += "-";
      int64_t a = v < 0 ? -v : v;
      std::string mon = e == 0 ? "" : e == 1 ? "q" : "q^" + std::to_string(e);
      if (mon.empty()) s += std::to_string(a);
      else s += (a == 1 ? "" : std::to_string(a) + "*") + mon;
    }
    return s;
  }
};

inline QPoly combine(const QPoly& a, const QPoly& b, int64_t sb) {
  if (a.is_zero() && b.is_zero()) return {};
  int lo = a.is_zero() ? b.lo : b.is_zero() ? a.lo : std::min(a.lo, b.lo);
  int hi = a.is_zero() ? b.hi() : b.is_zero() ? a.hi() : std::max(a.hi(), b.hi());
  QPoly r{lo, std::vector<int64_t>(size_t(hi - lo + 1), 0)};
  for (int e = lo; e <= hi; ++e) r.c[size_t(e - lo)] = checked_add(a.at(e), checked_mul(sb, b.at(e)));
  return r.trim();
}
inline QPoly operator+(const QPoly& a, const QPoly& b) { return combine(a, b, 1); }
inline QPoly operator-(const QPoly& a, const QPoly& b) { return combine(a, b, -1); }
inline QPoly operator-(const QPoly& a) { return combine({}, a, -1); }

inline QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  QPoly r{a.lo + b.lo, std::vector<int64_t>(a.c.size() + b.c.size() - 1, 0)};
  for (size_t i = 0; i < a.c.size(); ++i)
    if (a.c[i])
      for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = checked_add(r.c[i + j], checked_mul(a.c[i], b.c[j]));
  return r.trim();
}

inline QPoly qpow(const QPoly& a, int e) {
  QPoly r = QPoly::constant(1);
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

// [a]_q = (q^a - 1)/(q - 1) for any integer a.
inline QPoly q_int(int64_t a) {
  if (a == 0) return {};
  if (a > 0) return QPoly{0, std::vector<int64_t>(size_t(a), 1)};
  return QPoly{int(a), std::vector<int64_t>(size_t(-a), -1)};
}

// q -> q^e
inline QPoly subst_power(const QPoly& a, int e) {
  if (a.is_zero()) return {};
  if (e == 0) return QPoly::constant(a.eval1());
  QPoly r;
  for (int k = a.lo; k <= a.hi(); ++k) r = r + QPoly::monomial(k * e, a.at(k));
  return r;
}

// Exact quotient a / b in Z[q^{+-1}]; b must have leading and trailing
// coefficient +-1.  Throws NotDivisible otherwise.
inline QPoly divexact(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw Error("NotDivisible", "division by zero polynomial");
  if (a.is_zero()) return {};
  const int64_t lead = b.c.back();
  if (lead != 1 && lead != -1) throw Error("NotDivisible", "divisor " + b.to_string() + " is not monic");
  std::vector<int64_t> r = a.c;
  const int db = int(b.c.size()) - 1;
  const int dq = int(r.size()) - 1 - db;
  if (dq < 0) throw Error("NotDivisible", a.to_string() + " by " + b.to_string());
  std::vector<int64_t> quo(size_t(dq + 1), 0);
  for (int i = dq; i >= 0; --i) {
    int64_t v = r[size_t(i + db)] * lead;
    quo[size_t(i)] = v;
    if (!v) continue;
    for (int j = 0; j <= db; ++j) r[size_t(i + j)] = checked_add(r[size_t(i + j)], -checked_mul(v, b.c[size_t(j)]));
  }
  for (int64_t v : r)
    if (v) throw Error("NotDivisible", a.to_string() + " by " + b.to_string());
  QPoly out{a.lo - b.lo, quo};
  return out.trim();
}

inline bool divides(const QPoly& b, const QPoly& a) {
  try {
    divexact(a, b);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// prod_{i=lo..hi} [i]_q
inline QPoly q_int_product(int lo, int hi) {
  QPoly r = QPoly::constant(1);
  for (int i = lo; i <= hi; ++i) r = r * q_int(i);
  return r;
}
inline QPoly q_factorial(int k) { return q_int_product(1, k); }

// Sparse matrices with entries in Z[q^{+-1}], column-major.
struct QMat {
  int rows = 0, cols = 0;
  std::vector<std::map<int, QPoly>> col;

  QMat() = default;
  QMat(int r, int c) : rows(r), cols(c), col(size_t(c)) {}

  void add(int i, int j, const QPoly& v) {
    if (v.is_zero()) return;
    auto& cc = col[size_t(j)];
    auto it = cc.find(i);
    if (it == cc.end()) {
      cc.emplace(i, v);
    } else {
      it->second = it->second + v;
      if (it->second.is_zero()) cc.erase(it);
    }
  }
  QPoly at(int i, int j) const {
    auto it = col[size_t(j)].find(i);
    return it == col[size_t(j)].end() ? QPoly{} : it->second;
  }
  bool is_zero() const {
    for (auto& c : col)
      if (!c.empty()) return false;
    return true;
  }
  friend bool operator==(const QMat& a, const QMat& b) { return a.rows == b.rows && a.cols == b.cols && a.col == b.col; }
};

inline QMat operator*(const QMat& A, const QMat& B) {
  if (A.cols != B.rows) throw Error("DimensionMismatch", "q-matrix product");
  QMat C(A.rows, B.cols);
  for (int j = 0; j < B.cols; ++j)
    for (auto& [k, b] : B.col[size_t(j)])
      for (auto& [i, a] : A.col[size_t(k)]) C.add(i, j, a * b);
  return C;
}

inline QMat qmat_combine(const QMat& A, const QMat& B, int64_t sb) {
  QMat C = A;
  for (int j = 0; j < B.cols; ++j)
    for (auto& [i, v] : B.col[size_t(j)]) C.add(i, j, combine({}, v, sb));
  return C;
}

inline QMat qmat_identity(int n) {
  QMat I(n, n);
  for (int i = 0; i < n; ++i) I.add(i, i, QPoly::constant(1));
  return I;
}

// Finite coefficient ring Lambda over Z/p^n with q = 1 + t:
//   Trunc: Z/p^n[t]/(t^dim)
//   Monic: Z/p^n[t]/(f), f monic of degree dim
//   Point: Z/p^n, q = 1
struct Lambda {
  enum class Kind { Trunc, Monic, Point };
  Kind kind = Kind::Point;
  int p = 2, n = 1;
  int dim = 1;
  std::vector<int64_t> f;  // Monic only, low to high, f[dim] = 1
  std::string name = "q=1";

  int64_t mod() const { return ipow(p, n); }

  using Elem = std::vector<int64_t>;

  Elem reduce(Elem a) const {
    const int64_t m = mod();
    for (auto& v : a) v = mod_norm(v, m);
    if (kind == Kind::Monic) {
      for (int i = int(a.size()) - 1; i >= dim; --i) {
        int64_t v = a[size_t(i)];
        if (!v) continue;
        for (int j = 0; j <= dim; ++j) a[size_t(i - dim + j)] = mod_norm(a[size_t(i - dim + j)] - mul_mod(v, f[size_t(j)], m), m);
      }
    }
    a.resize(size_t(dim), 0);
    return a;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    const int64_t m = mod();
    if (kind == Kind::Point) return {mul_mod(a[0], b[0], m)};
    Elem r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i])
        for (size_t j = 0; j < b.size(); ++j) {
          if (kind == Kind::Trunc && int(i + j) >= dim) break;
          r[i + j] = (r[i + j] + mul_mod(a[i], b[j], m)) % m;
        }
    return reduce(r);
  }

  Elem one() const {
    Elem e(size_t(dim), 0);
    e[0] = 1 % mod();
    return e;
  }
  Elem q() const {
    if (kind == Kind::Point) return one();
    Elem e{1, 1};
    return reduce(e);
  }
  // (1 + t)^{-1}: t is nilpotent modulo p in every supported Lambda
  Elem q_inverse() const {
    if (kind == Kind::Point) return one();
    Elem t = reduce(Elem{0, 1}), acc = one(), term = one();
    Elem mt = t;
    for (auto& v : mt) v = mod_norm(-v, mod());
    for (int i = 0; i < dim * n * p + 4; ++i) {
      term = mul(term, mt);
      bool zero = std::all_of(term.begin(), term.end(), [](int64_t v) { return v == 0; });
      if (zero) return acc;
      for (int j = 0; j < dim; ++j) acc[size_t(j)] = (acc[size_t(j)] + term[size_t(j)]) % mod();
    }
    throw Error("TruncationLoss", "1 + t is not invertible in " + name);
  }

  Elem from_q(const QPoly& a) const {
    Elem r(size_t(dim), 0);
    if (a.is_zero()) return r;
    const int64_t m = mod();
    Elem qq = q(), qi = q_inverse();
    Elem power = one();
    const Elem& step = a.lo >= 0 ? qq : qi;
    for (int i = 0; i < std::abs(a.lo); ++i) power = mul(power, step);
    for (size_t k = 0; k < a.c.size(); ++k) {
      if (a.c[k])
        for (int j = 0; j < dim; ++j) r[size_t(j)] = (r[size_t(j)] + mul_mod(power[size_t(j)], mod_norm(a.c[k], m), m)) % m;
      power = mul(power, qq);
    }
    return r;
  }

  // Matrix of multiplication by a on the basis 1, t, ..., t^{dim-1}.
  Mat mult_matrix(const QPoly& a) const { return mult_matrix_elem(from_q(a)); }
  Mat mult_matrix_elem(const Elem& x) const {
    Mat M(dim, dim, p, n);
    for (int j = 0; j < dim; ++j) {
      Elem tj(size_t(dim), 0);
      tj[size_t(j)] = 1;
      Elem col = mul(x, tj);
      for (int i = 0; i < dim; ++i) M.at(i, j) = col[size_t(i)];
    }
    return M;
  }

  std::string basis_label(int j) const {
    if (kind == Kind::Point) return "";
    return j == 0 ? "1" : j == 1 ? "t" : "t^" + std::to_string(j);
  }
};

inline Lambda lambda_point(int p, int n) { return Lambda{Lambda::Kind::Point, p, n, 1, {}, "q=1"}; }

inline Lambda lambda_trunc(int p, int n, int cap) {
  return Lambda{Lambda::Kind::Trunc, p, n, cap + 1, {}, "t^" + std::to_string(cap + 1)};
}

// Integer coefficients of a(1 + t) for a polynomial a (lo >= 0).
inline std::vector<int64_t> shift_to_t(const QPoly& a) {
  if (a.is_zero()) return {};
  if (a.lo < 0) throw Error("ContractViolation", "shift_to_t needs a polynomial");
  std::vector<int64_t> r(size_t(a.hi() + 1), 0);
  for (int k = a.lo; k <= a.hi(); ++k)
    for (int j = 0; j <= k; ++j) r[size_t(j)] = checked_add(r[size_t(j)], checked_mul(a.at(k), int64_t(binom_exact(k, j))));
  while (!r.empty() && !r.back()) r.pop_back();
  return r;
}

// Z/p^n[t]/(g(q)^k) for a monic polynomial g in q with g(1+t) monic in t.
inline Lambda lambda_mod_power(int p, int n, const QPoly& g, int k, const std::string& name) {
  auto gt = shift_to_t(qpow(g, k));
  if (gt.empty() || gt.back() != 1) throw Error("ContractViolation", "modulus must be monic in t");
  Lambda L{Lambda::Kind::Monic, p, n, int(gt.size()) - 1, gt, name};
  for (auto& v : L.f) v = mod_norm(v, L.mod());
  return L;
}

inline Lambda lambda_mod_pq(int p, int n, int k = 1) {
  return lambda_mod_power(p, n, q_int(p), k, k == 1 ? "[p]_q" : "[p]_q^" + std::to_string(k));
}

// Cyclotomic polynomials, cached.
inline const QPoly& cyclotomic(int d) {
  static std::map<int, QPoly> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  QPoly f = QPoly::monomial(d) - QPoly::constant(1);
  for (int e = 1; e < d; ++e)
    if (d % e == 0) f = divexact(f, cyclotomic(e));
  return cache.emplace(d, f).first->second;
}

using CycFactors = std::map<int, int>;  // d -> multiplicity of Phi_d

// [a]_{q^e} = prod over d | ae, d not dividing e, of Phi_d
inline CycFactors q_int_factors(int a, int e = 1) {
  CycFactors f;
  for (int d = 1; d <= a * e; ++d)
    if ((a * e) % d == 0 && e % d != 0) f[d] += 1;
  return f;
}

inline QPoly cyc_product(const CycFactors& f) {
  QPoly r = QPoly::constant(1);
  for (auto& [d, e] : f)
    for (int i = 0; i < e; ++i) r = r * cyclotomic(d);
  return r;
}

// Is d a power of p (including d = 1)?
inline bool is_p_power(int d, int p) {
  while (d % p == 0) d /= p;
  return d == 1;
}

// num / (dint * prod Phi_d^e), kept reduced.  Elements of Z_p[[q-1]] are
// exactly those whose reduced denominator avoids p and every Phi_{p^k}.
struct QRat {
  QPoly num;
  int64_t dint = 1;
  CycFactors cyc;

  static QRat from(const QPoly& a) { return QRat{a, 1, {}}.normalized(); }
  static QRat constant(int64_t c) { return from(QPoly::constant(c)); }

  bool is_zero() const { return num.is_zero(); }

  QRat normalized() const {
    QRat r = *this;
    if (r.num.is_zero()) return QRat{};
    for (auto it = r.cyc.begin(); it != r.cyc.end();) {
      while (it->second > 0 && divides(cyclotomic(it->first), r.num)) {
        r.num = divexact(r.num, cyclotomic(it->first));
        --it->second;
      }
      it = it->second ? std::next(it) : r.cyc.erase(it);
    }
    int64_t g = std::llabs(r.dint);
    for (int64_t v : r.num.c) g = std::gcd(g, std::llabs(v));
    if (r.dint < 0) g = -g;
    if (g != 1 && g != 0) {
      for (auto& v : r.num.c) v /= g;
      r.dint /= g;
    }
    return r;
  }

  bool in_D(int p) const {
    if (dint % p == 0) return false;
    for (auto& [d, e] : cyc)
      if (e > 0 && is_p_power(d, p)) return false;
    return true;
  }

  // all integer coefficients of the numerator divisible by p (for in_D values
  // this is divisibility by p in Z_p[[q-1]])
  bool divisible_by(int p) const {
    for (int64_t v : num.c)
      if (v % p) return false;
    return true;
  }

  // value at q = 1 modulo m = p^n; requires in_D
  int64_t eval1_mod(int p, int64_t m) const {
    if (!in_D(p)) throw Error("NotIntegral", "value at q = 1 of a non-integral coefficient");
    int64_t den = mod_norm(dint, m);
    for (auto& [d, e] : cyc)
      for (int i = 0; i < e; ++i) den = mul_mod(den, mod_norm(cyclotomic(d).eval1(), m), m);
    return mul_mod(mod_norm(num.eval1(), m), inv_mod(den, m), m);
  }

  // exact polynomial, when the denominator is trivial
  std::optional<QPoly> as_poly() const {
    if (dint != 1 || !cyc.empty()) return std::nullopt;
    return num;
  }

  std::string to_string() const {
    std::string s = "(" + num.to_string() + ")";
    if (dint != 1) s += "/" + std::to_string(dint);
    for (auto& [d, e] : cyc) s += "/Phi_" + std::to_string(d) + (e > 1 ? "^" + std::to_string(e) : "");
    return s;
  }
};

inline QRat operator*(const QRat& a, const QRat& b) {
  if (a.is_zero() || b.is_zero()) return {};
  QRat r{a.num * b.num, checked_mul(a.dint, b.dint), a.cyc};
  for (auto& [d, e] : b.cyc) r.cyc[d] += e;
  return r.normalized();
}

inline QRat qrat_combine(const QRat& a, const QRat& b, int64_t sb) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return QRat{combine({}, b.num, sb), b.dint, b.cyc}.normalized();
  CycFactors l = a.cyc;
  for (auto& [d, e] : b.cyc) l[d] = std::max(l[d], e);
  auto cofactor = [&](const CycFactors& c) {
    CycFactors r;
    for (auto& [d, e] : l) {
      auto it = c.find(d);
      int rest = e - (it == c.end() ? 0 : it->second);
      if (rest) r[d] = rest;
    }
    return cyc_product(r);
  };
  int64_t g = std::gcd(a.dint, b.dint);
  int64_t L = checked_mul(a.dint / g, b.dint);
  QPoly na = a.num * cofactor(a.cyc) * QPoly::constant(L / a.dint);
  QPoly nb = b.num * cofactor(b.cyc) * QPoly::constant(L / b.dint);
  return QRat{combine(na, nb, sb), L, l}.normalized();
}
inline QRat operator+(const QRat& a, const QRat& b) { return qrat_combine(a, b, 1); }
inline QRat operator-(const QRat& a, const QRat& b) { return qrat_combine(a, b, -1); }

inline QRat divide_by_cyc(const QRat& a, const CycFactors& f) {
  QRat r = a;
  for (auto& [d, e] : f) r.cyc[d] += e;
  return r.normalized();
}

inline QRat divide_by_int(const QRat& a, int64_t c) {
  QRat r = a;
  r.dint = checked_mul(r.dint, c);
  return r.normalized();
}

// q -> q^p on a coefficient
inline QRat subst_power(const QRat& a, int p) {
  if (a.is_zero()) return {};
  QRat r{subst_power(a.num, p), a.dint, {}};
  for (auto& [d, e] : a.cyc) {
    r.cyc[d * p] += e;
    if (d % p) r.cyc[d] += e;
  }
  return r.normalized();
}

}  // namespace logprism
