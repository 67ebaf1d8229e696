#pragma once

// Truncated monoid algebras over Z/p^n.
//
// A ring is a list of variables (ordinary, Laurent, or divided-power) plus
// gradings with caps.  An element stores its terms, the p-adic precision k
// (valid mod p^k) and, per grading, the degree up to which its terms are
// known.  Terms above a grading's window are dropped; the window is an ideal
// because every grading is nonnegative on the terms that occur.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "zmod.hpp"

namespace logprism {

constexpr int kMaxVars = 16;
using Mono = std::array<int16_t, kMaxVars>;

struct MonoHash {
  size_t operator()(const Mono& m) const noexcept {
    uint64_t h = 1469598103934665603ull;
    for (int16_t e : m) {
      h ^= static_cast<uint16_t>(e);
      h *= 1099511628211ull;
    }
    return size_t(h);
  }
};

inline Mono mono_zero() {
  Mono m{};
  m.fill(0);
  return m;
}

using Terms = std::vector<std::pair<Mono, int64_t>>;

class CoeffRing {
 public:
  CoeffRing(int p, int n) : p_(p), n_(n) {
    if (!is_prime(p)) throw Error("ConfigError", "p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw Error("ConfigError", "precision exponent must be positive");
    if (ipow(p, n + 1) >= (int64_t(1) << 31)) throw Error("ConfigError", "p^n too large for the kernel");
  }
  int p() const { return p_; }
  int n() const { return n_; }
  int64_t modulus() const { return ipow(p_, n_); }
  bool operator==(const CoeffRing& o) const { return p_ == o.p_ && n_ == o.n_; }

 private:
  int p_, n_;
};

enum class VarKind { Poly, Laurent, DividedPower };

struct Var {
  std::string name;
  VarKind kind = VarKind::Poly;
};

struct Grading {
  std::string name;
  std::vector<int> weights;  // one per variable
  int cap = 0;
};

struct TruncSpec {
  std::vector<Grading> gradings;
  int delta_depth = 0;
};

struct RingSpec {
  CoeffRing coeff;
  std::vector<Var> vars;
  TruncSpec trunc;
  std::vector<Terms> nonzerodivisors;  // declared beyond constants and monomials

  int nvars() const { return int(vars.size()); }
  int p() const { return coeff.p(); }
  int n() const { return coeff.n(); }

  bool has_var(const std::string& name) const {
    for (auto& v : vars)
      if (v.name == name) return true;
    return false;
  }

  int var_index(const std::string& name) const {
    for (int i = 0; i < nvars(); ++i)
      if (vars[i].name == name) return i;
    throw Error("UnknownVariable", name);
  }

  int degree(const Mono& m, int g) const {
    const auto& w = trunc.gradings[g].weights;
    int d = 0;
    for (int i = 0; i < nvars(); ++i) d += w[i] * m[i];
    return d;
  }

  bool same_layout(const RingSpec& o) const {
    if (!(coeff == o.coeff) || vars.size() != o.vars.size()) return false;
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name != o.vars[i].name || vars[i].kind != o.vars[i].kind) return false;
    if (trunc.gradings.size() != o.trunc.gradings.size()) return false;
    for (size_t g = 0; g < trunc.gradings.size(); ++g)
      if (trunc.gradings[g].weights != o.trunc.gradings[g].weights ||
          trunc.gradings[g].cap != o.trunc.gradings[g].cap)
        return false;
    return true;
  }
};

using Ring = std::shared_ptr<const RingSpec>;

inline Ring make_ring(int p, int n, std::vector<Var> vars, std::vector<Grading> gradings, int delta_depth = 0) {
  if (int(vars.size()) > kMaxVars) throw Error("ConfigError", "too many variables");
  for (auto& g : gradings) {
    if (g.weights.size() != vars.size()) throw Error("ConfigError", "grading " + g.name + " has wrong length");
    if (g.cap < 0) throw Error("ConfigError", "negative degree cap");
    for (size_t i = 0; i < vars.size(); ++i)
      if (g.weights[i] < 0) throw Error("ConfigError", "negative grading weight on " + vars[i].name);
  }
  return std::make_shared<RingSpec>(RingSpec{CoeffRing(p, n), std::move(vars), {std::move(gradings), delta_depth}, {}});
}

// Same ring with a different p-adic precision exponent.
inline Ring with_precision(const Ring& r, int n) {
  auto s = std::make_shared<RingSpec>(*r);
  s->coeff = CoeffRing(r->p(), n);
  return s;
}

class RingElem;
inline Ring with_nonzerodivisor(const Ring& r, const RingElem& f);

class RingElem {
 public:
  RingElem() = default;
  explicit RingElem(Ring r) : ring_(std::move(r)), prec_(ring_->n()) {
    for (auto& g : ring_->trunc.gradings) valid_.push_back(g.cap);
  }

  static RingElem zero(const Ring& r) { return RingElem(r); }
  static RingElem constant(const Ring& r, int64_t c) {
    RingElem e(r);
    e.add_term(mono_zero(), c);
    e.normalize();
    return e;
  }
  static RingElem monomial(const Ring& r, const Mono& m, int64_t c = 1) {
    RingElem e(r);
    e.add_term(m, c);
    e.normalize();
    return e;
  }
  static RingElem var(const Ring& r, int i, int e = 1) {
    Mono m = mono_zero();
    m[i] = int16_t(e);
    return monomial(r, m);
  }
  static RingElem var(const Ring& r, const std::string& name, int e = 1) {
    return var(r, r->var_index(name), e);
  }
  static RingElem from_terms(const Ring& r, const Terms& t, int prec = -1) {
    RingElem e(r);
    if (prec >= 0) e.prec_ = std::min(prec, r->n());
    for (auto& [m, c] : t) e.add_term(m, c);
    e.normalize();
    return e;
  }

  const Ring& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  int precision() const { return prec_; }
  const std::vector<int>& window() const { return valid_; }
  int64_t modulus() const { return ipow(ring_->p(), prec_); }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  int64_t coeff(const Mono& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const auto& a, const Mono& b) { return a.first < b; });
    return (it != terms_.end() && it->first == m) ? it->second : 0;
  }
  int64_t constant_coeff() const { return coeff(mono_zero()); }

  bool in_window(const Mono& m) const {
    for (size_t g = 0; g < valid_.size(); ++g)
      if (ring_->degree(m, int(g)) > valid_[g]) return false;
    return true;
  }

  // Lowest degree among the terms in grading g (0 for the zero element).
  int min_degree(int g) const {
    int d = 0;
    bool first = true;
    for (auto& [m, c] : terms_) {
      int e = ring_->degree(m, g);
      if (first || e < d) d = e;
      first = false;
    }
    return d;
  }
  int max_degree(int g) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, ring_->degree(m, g));
    return d;
  }

  RingElem with_window(std::vector<int> w) const {
    RingElem e = *this;
    for (size_t g = 0; g < w.size(); ++g) e.valid_[g] = std::min(e.valid_[g], w[g]);
    e.normalize();
    return e;
  }
  RingElem with_prec(int k) const {
    RingElem e = *this;
    e.prec_ = std::max(0, std::min(k, prec_));
    e.normalize();
    return e;
  }
  // Move to another ring with the same variable layout (e.g. after declaring
  // a nonzerodivisor); gradings/caps must agree.
  RingElem rehome(const Ring& r) const {
    if (!ring_->same_layout(*r)) throw Error("RingMismatch", "rehome to a ring with different layout");
    RingElem e = *this;
    e.ring_ = r;
    return e;
  }

  friend RingElem operator+(const RingElem& a, const RingElem& b) { return a.combine(b, 1); }
  friend RingElem operator-(const RingElem& a, const RingElem& b) { return a.combine(b, -1); }
  RingElem operator-() const {
    RingElem e = *this;
    for (auto& [m, c] : e.terms_) c = mod_norm(-c, e.modulus());
    return e;
  }
  friend RingElem operator*(const RingElem& a, const RingElem& b) { return a.mul(b); }
  friend RingElem operator*(int64_t c, const RingElem& a) { return a.scale(c); }

  RingElem scale(int64_t c) const {
    RingElem e = *this;
    int64_t m = modulus();
    for (auto& [mm, cc] : e.terms_) cc = mul_mod(cc, mod_norm(c, m), m);
    e.normalize();
    return e;
  }

  // Multiplication by p^j; precision rises by j (bounded by n).
  RingElem times_p(int j = 1) const {
    RingElem e = *this;
    int newk = std::min(ring_->n(), prec_ + j);
    int64_t m = ipow(ring_->p(), newk);
    int64_t pj = ipow(ring_->p(), j) % m;
    e.prec_ = newk;
    for (auto& [mm, cc] : e.terms_) cc = mul_mod(cc, pj, m);
    e.normalize();
    return e;
  }

  RingElem pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RingElem r = constant(ring_, 1).with_prec(prec_).with_window(valid_);
    RingElem b = *this;
    while (e) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  // Units are lead term times (1 + topologically nilpotent), see unit_split.
  bool is_unit() const { return unit_split().has_value(); }

  RingElem inverse() const {
    auto sp = unit_split();
    if (!sp) throw Error("NotAUnit", to_string());
    auto [lead, c] = *sp;
    Mono inv_m = mono_zero();
    for (int i = 0; i < kMaxVars; ++i) inv_m[i] = int16_t(-lead[i]);
    int64_t m = modulus();
    RingElem lead_inv = monomial(ring_, inv_m, inv_mod(c, m)).with_prec(prec_).with_window(valid_);
    RingElem r = (*this * lead_inv) - constant(ring_, 1);  // topologically nilpotent
    RingElem acc = constant(ring_, 1).with_prec(prec_).with_window(valid_);
    RingElem term = acc;
    int guard = 4 * (prec_ + 1);
    for (auto& g : ring_->trunc.gradings) guard += 4 * (g.cap + 1);
    for (int i = 0; i < guard && !term.is_zero(); ++i) {
      term = -(term * r);
      acc = acc + term;
    }
    if (!term.is_zero()) throw Error("TruncationLoss", "geometric series did not terminate in window");
    return acc * lead_inv;
  }

  // Equality at the common precision and window.
  friend bool equal_at(const RingElem& a, const RingElem& b) {
    check_same(a, b);
    int k = std::min(a.prec_, b.prec_);
    std::vector<int> w = a.valid_;
    for (size_t g = 0; g < w.size(); ++g) w[g] = std::min(w[g], b.valid_[g]);
    return a.with_prec(k).with_window(w).terms_ == b.with_prec(k).with_window(w).terms_;
  }
  friend bool operator==(const RingElem& a, const RingElem& b) { return equal_at(a, b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      std::string mon = mono_string(m);
      if (mon.empty())
        os << c;
      else if (c == 1)
        os << mon;
      else
        os << c << "*" << mon;
    }
    return os.str();
  }

  std::string mono_string(const Mono& m) const {
    std::string s;
    for (int i = 0; i < ring_->nvars(); ++i) {
      if (!m[i]) continue;
      if (!s.empty()) s += "*";
      std::string base = ring_->vars[i].name;
      if (ring_->vars[i].kind == VarKind::DividedPower)
        s += "g" + std::to_string(m[i]) + "(" + base + ")";
      else
        s += m[i] == 1 ? base : base + "^" + std::to_string(m[i]);
    }
    return s;
  }

  static void check_same(const RingElem& a, const RingElem& b) {
    if (a.ring_ != b.ring_ && !a.ring_->same_layout(*b.ring_))
      throw Error("RingMismatch", "operands live in different rings");
  }

 private:
  void add_term(const Mono& m, int64_t c) { terms_.emplace_back(m, c); }

  // Sort, merge, reduce, truncate.
  void normalize() {
    int64_t m = modulus();
    std::sort(terms_.begin(), terms_.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Terms out;
    out.reserve(terms_.size());
    for (auto& [mm, c] : terms_) {
      if (!out.empty() && out.back().first == mm)
        out.back().second = (out.back().second + mod_norm(c, m)) % m;
      else
        out.emplace_back(mm, mod_norm(c, m));
    }
    terms_.clear();
    for (auto& t : out)
      if (t.second != 0 && in_window(t.first)) terms_.push_back(t);
  }

  RingElem combine(const RingElem& b, int sign) const {
    check_same(*this, b);
    RingElem e(ring_);
    e.prec_ = std::min(prec_, b.prec_);
    for (size_t g = 0; g < valid_.size(); ++g) e.valid_[g] = std::min(valid_[g], b.valid_[g]);
    e.terms_ = terms_;
    for (auto& [m, c] : b.terms_) e.terms_.emplace_back(m, sign * c);
    e.normalize();
    return e;
  }

  RingElem mul(const RingElem& b) const {
    check_same(*this, b);
    RingElem e(ring_);
    e.prec_ = std::min(prec_, b.prec_);
    for (size_t g = 0; g < valid_.size(); ++g) {
      // lowest degree either factor can contribute, counting its unknown tail
      int mda = is_zero() ? valid_[g] + 1 : std::min(min_degree(int(g)), valid_[g] + 1);
      int mdb = b.is_zero() ? b.valid_[g] + 1 : std::min(b.min_degree(int(g)), b.valid_[g] + 1);
      e.valid_[g] = std::min(ring_->trunc.gradings[g].cap, std::min(valid_[g] + mdb, b.valid_[g] + mda));
    }
    int64_t m = e.modulus();
    if (m == 1) return e;
    const int nv = ring_->nvars();
    bool has_dp = false;
    for (auto& v : ring_->vars) has_dp = has_dp || v.kind == VarKind::DividedPower;
    std::unordered_map<Mono, int64_t, MonoHash> acc;
    acc.reserve(terms_.size() * b.terms_.size());
    for (auto& [ma, ca] : terms_) {
      for (auto& [mb, cb] : b.terms_) {
        Mono mm;
        for (int i = 0; i < kMaxVars; ++i) mm[i] = int16_t(ma[i] + mb[i]);
        if (!e.in_window(mm)) continue;
        int64_t c = mul_mod(ca % m, cb % m, m);
        if (has_dp)
          for (int i = 0; i < nv; ++i)
            if (ring_->vars[i].kind == VarKind::DividedPower && ma[i] && mb[i])
              c = mul_mod(c, binom_mod(mm[i], ma[i], m), m);
        if (!c) continue;
        auto& slot = acc[mm];
        slot = (slot + c) % m;
      }
    }
    e.terms_.reserve(acc.size());
    for (auto& kv : acc)
      if (kv.second) e.terms_.push_back(kv);
    std::sort(e.terms_.begin(), e.terms_.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return e;
  }

  // Lead term: unit coefficient on a Laurent monomial such that every other
  // term, divided by it, is topologically nilpotent (p | coefficient, or
  // degrees >= 0 in all gradings and > 0 in one).
  std::optional<std::pair<Mono, int64_t>> unit_split() const {
    if (prec_ == 0) return std::nullopt;
    const int p = ring_->p();
    const size_t ng = valid_.size();
    for (auto& [lm, lc] : terms_) {
      if (lc % p == 0) continue;
      bool laurent = true;
      for (int i = 0; i < ring_->nvars(); ++i)
        if (lm[i] != 0 && ring_->vars[i].kind != VarKind::Laurent) laurent = false;
      if (!laurent) continue;
      bool ok = true;
      for (auto& [m, c] : terms_) {
        if (m == lm || c % p == 0) continue;
        bool pos = false;
        for (size_t g = 0; g < ng; ++g) {
          int d = ring_->degree(m, int(g)) - ring_->degree(lm, int(g));
          if (d < 0) ok = false;
          if (d > 0) pos = true;
        }
        if (!pos) ok = false;
        if (!ok) break;
      }
      if (ok) return std::make_pair(lm, lc);
    }
    return std::nullopt;
  }

  Ring ring_;
  Terms terms_;
  int prec_ = 0;
  std::vector<int> valid_;
};

inline Ring with_nonzerodivisor(const Ring& r, const RingElem& f) {
  auto s = std::make_shared<RingSpec>(*r);
  s->nonzerodivisors.push_back(f.terms());
  return s;
}

// Exact division by a declared nonzerodivisor.
//  - a constant u*p^v: precision drops by v;
//  - a monomial with unit coefficient: the window shrinks by its degree;
//  - a declared polynomial: solved on the window of the variables it
//    involves; the window is cut to where the quotient is unique.
inline RingElem divide_exact(const RingElem& a, const RingElem& b) {
  RingElem::check_same(a, b);
  const Ring& R = a.ring();
  const int p = R->p();
  if (b.is_zero()) throw Error("UnsupportedDivisor", "division by zero");
  const bool const_divisor = b.size() == 1 && b.terms()[0].first == mono_zero();
  if (a.is_zero() && !const_divisor) return a;
  const int k = std::min(a.precision(), b.precision());
  const int64_t mk = ipow(p, k);

  // constant divisor
  if (const_divisor) {
    int64_t c = b.terms()[0].second;
    int v = valuation(c, p, k);
    if (v >= k) throw Error("UnsupportedDivisor", "divisor vanishes at this precision");
    int64_t u = inv_mod((c / ipow(p, v)) % mk, mk);
    int64_t pv = ipow(p, v);
    Terms out;
    RingElem ak = a.with_prec(k);
    for (auto& [m, cc] : ak.terms()) {
      if (cc % pv != 0) throw Error("NotDivisible", a.to_string() + " by " + b.to_string());
      out.emplace_back(m, mul_mod(cc / pv, u, mk));
    }
    RingElem r = RingElem::from_terms(R, out, k - v);
    return r.with_window(a.window());
  }

  // unit-coefficient monomial
  if (b.size() == 1 && b.terms()[0].second % p != 0) {
    const Mono& bm = b.terms()[0].first;
    int64_t u = inv_mod(b.terms()[0].second % mk, mk);
    std::vector<int> w = a.window();
    for (size_t g = 0; g < w.size(); ++g) w[g] -= R->degree(bm, int(g));
    Terms out;
    RingElem ak = a.with_prec(k);
    for (auto& [m, cc] : ak.terms()) {
      Mono q;
      for (int i = 0; i < kMaxVars; ++i) q[i] = int16_t(m[i] - bm[i]);
      for (int i = 0; i < R->nvars(); ++i) {
        if (q[i] < 0 && R->vars[i].kind != VarKind::Laurent)
          throw Error("NotDivisible", a.to_string() + " by " + b.to_string());
        if (R->vars[i].kind == VarKind::DividedPower && bm[i] != 0)
          throw Error("UnsupportedDivisor", "monomial division through a divided-power variable");
      }
      out.emplace_back(q, mul_mod(cc, u, mk));
    }
    RingElem r = RingElem::from_terms(R, out, k);
    for (size_t g = 0; g < w.size(); ++g)
      if (w[g] < 0) throw Error("TruncationLoss", "window exhausted by division");
    return r.with_window(w);
  }

  // declared polynomial nonzerodivisor
  bool declared = false;
  for (auto& t : R->nonzerodivisors) declared = declared || t == b.terms();
  for (auto& t : b.ring()->nonzerodivisors) declared = declared || t == b.terms();
  if (!declared) throw Error("UnsupportedDivisor", b.to_string() + " is not a declared nonzerodivisor");

  const int nv = R->nvars();
  std::vector<bool> inV(nv, false);
  for (auto& [m, c] : b.terms())
    for (int i = 0; i < nv; ++i)
      if (m[i]) inV[i] = true;
  for (int i = 0; i < nv; ++i)
    if (inV[i] && R->vars[i].kind != VarKind::Poly)
      throw Error("UnsupportedDivisor", "polynomial divisor must involve ordinary variables only");
  // division grading: first grading in which b has positive top degree
  int gstar = -1;
  for (size_t g = 0; g < R->trunc.gradings.size(); ++g)
    if (b.max_degree(int(g)) > 0) {
      gstar = int(g);
      break;
    }
  if (gstar < 0) throw Error("UnsupportedDivisor", "divisor has no graded direction");
  for (int i = 0; i < nv; ++i) {
    if (!inV[i]) continue;
    bool pos = false;
    for (auto& g : R->trunc.gradings) pos = pos || g.weights[i] > 0;
    if (!pos) throw Error("UnsupportedDivisor", "variable without a finite window");
  }

  // group the terms of a by their part outside V
  auto split = [&](const Mono& m) {
    Mono rest = m, vpart = mono_zero();
    for (int i = 0; i < nv; ++i)
      if (inV[i]) {
        vpart[i] = m[i];
        rest[i] = 0;
      }
    return std::make_pair(rest, vpart);
  };
  std::map<Mono, Terms> groups;
  RingElem ak = a.with_prec(k);
  for (auto& [m, c] : ak.terms()) {
    auto [rest, vpart] = split(m);
    groups[rest].emplace_back(vpart, c);
  }

  // enumerate V-monomials whose degree in every grading is <= bound[g]
  auto enumerate_v = [&](const std::vector<int>& bound) {
    std::vector<Mono> out;
    std::vector<int> vidx;
    for (int i = 0; i < nv; ++i)
      if (inV[i]) vidx.push_back(i);
    Mono cur = mono_zero();
    std::function<void(size_t)> rec = [&](size_t pos) {
      if (pos == vidx.size()) {
        out.push_back(cur);
        return;
      }
      int i = vidx[pos];
      for (int e = 0;; ++e) {
        cur[i] = int16_t(e);
        bool ok = true;
        for (size_t g = 0; g < bound.size(); ++g)
          if (R->degree(cur, int(g)) > bound[g]) ok = false;
        if (!ok) break;
        rec(pos + 1);
      }
      cur[i] = 0;
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<int> win = a.window();
  for (size_t g = 0; g < win.size(); ++g) win[g] = std::min(win[g], b.window()[g]);
  Terms out;
  int new_cut = win[gstar];
  for (auto& [rest, vterms] : groups) {
    std::vector<int> bound(win.size());
    for (size_t g = 0; g < win.size(); ++g) bound[g] = win[g] - R->degree(rest, int(g));
    auto basis = enumerate_v(bound);
    if (basis.empty()) continue;
    std::map<Mono, int> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = int(i);
    Mat M(int(basis.size()), int(basis.size()), p, k);
    for (size_t j = 0; j < basis.size(); ++j)
      for (auto& [bm, bc] : b.terms()) {
        Mono prod;
        for (int i = 0; i < kMaxVars; ++i) prod[i] = int16_t(basis[j][i] + bm[i]);
        auto it = index.find(prod);
        if (it != index.end()) M.at(it->second, int(j)) = (M.at(it->second, int(j)) + bc % mk) % mk;
      }
    std::vector<int64_t> rhs(basis.size(), 0);
    for (auto& [vm, c] : vterms) {
      auto it = index.find(vm);
      if (it != index.end()) rhs[it->second] = c;
    }
    auto sol = solve(M, rhs);
    if (!sol) throw Error("NotDivisible", a.to_string() + " by " + b.to_string());
    Mat K = kernel(M);
    for (int j = 0; j < K.cols; ++j)
      for (size_t i = 0; i < basis.size(); ++i)
        if (K.at(int(i), j)) {
          Mono full = rest;
          for (int v = 0; v < nv; ++v)
            if (inV[v]) full[v] = basis[i][v];
          new_cut = std::min(new_cut, R->degree(full, gstar) - 1);
        }
    for (size_t i = 0; i < basis.size(); ++i)
      if ((*sol)[i]) {
        Mono full = rest;
        for (int v = 0; v < nv; ++v)
          if (inV[v]) full[v] = basis[i][v];
        out.emplace_back(full, (*sol)[i]);
      }
  }
  if (new_cut < 0) throw Error("TruncationLoss", "quotient is not determined anywhere on the window");
  win[gstar] = new_cut;
  return RingElem::from_terms(R, out, k).with_window(win);
}

}  // namespace logprism
