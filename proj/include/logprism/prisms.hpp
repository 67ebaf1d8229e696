#pragma once

// Oriented prisms, q-PD data and envelopes on truncated models.

#include "deltalog.hpp"
#include "homalg.hpp"
#include "qpoly.hpp"

namespace logprism {

struct PrismTriple {
  std::string kind;
  DeltaLogRing ring;
  RingElem d;
};

// Monomials in the listed ordinary variables with degree <= bound[g] in
// every grading.  Each listed variable needs positive weight somewhere.
inline std::vector<Mono> window_monomials(const Ring& R, const std::vector<int>& vars, const std::vector<int>& bound) {
  for (int v : vars) {
    bool pos = false;
    for (auto& g : R->trunc.gradings) pos = pos || g.weights[size_t(v)] > 0;
    if (!pos) throw Error("UnsupportedWindow", "variable " + R->vars[size_t(v)].name + " has no finite window");
  }
  std::vector<Mono> out;
  Mono cur = mono_zero();
  std::function<void(size_t)> rec = [&](size_t pos) {
    if (pos == vars.size()) {
      out.push_back(cur);
      return;
    }
    for (int e = 0;; ++e) {
      cur[size_t(vars[pos])] = int16_t(e);
      bool ok = true;
      for (size_t g = 0; g < bound.size(); ++g)
        if (R->degree(cur, int(g)) > bound[g]) ok = false;
      if (!ok) break;
      rec(pos + 1);
    }
    cur[size_t(vars[pos])] = 0;
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> support_vars(const RingElem& x) {
  std::vector<int> vs;
  for (int i = 0; i < x.ring()->nvars(); ++i)
    for (auto& [m, c] : x.terms())
      if (m[size_t(i)]) {
        vs.push_back(i);
        break;
      }
  return vs;
}

struct PrismReport {
  bool ok = true;
  std::string failure;
  bool nonzerodivisor = false;
  int nzd_window = 0;         // source basis size of the multiplication matrix
  int nzd_max_valuation = 0;  // largest elementary divisor exponent
  bool p_membership = false;
  RingElem a, b;              // p = a d + b phi(d)
  int membership_precision = 0;
  ElementClass d_class = ElementClass::Unknown;
  std::string boundedness = "modeled by truncation";
};

// Multiplication by d from the window shrunk by deg d into the full window,
// computed without truncation; d is a nonzerodivisor there when the matrix
// has full column rank with every elementary divisor below p^n.
inline bool nonzerodivisor_certificate(const RingElem& d, int& window, int& maxval) {
  const Ring& R = d.ring();
  for (int v : support_vars(d))
    if (R->vars[size_t(v)].kind == VarKind::DividedPower)
      throw Error("UnsupportedDivisor", "divided-power variable in the orientation");
  auto vars = support_vars(d);
  std::vector<int> full, src;
  for (size_t g = 0; g < R->trunc.gradings.size(); ++g) {
    full.push_back(R->trunc.gradings[g].cap);
    src.push_back(R->trunc.gradings[g].cap - d.max_degree(int(g)));
  }
  auto S = window_monomials(R, vars, src), T = window_monomials(R, vars, full);
  window = int(S.size());
  std::map<Mono, int> ti;
  for (size_t i = 0; i < T.size(); ++i) ti[T[i]] = int(i);
  Mat M(int(T.size()), int(S.size()), R->p(), d.precision());
  for (size_t j = 0; j < S.size(); ++j)
    for (auto& [m, c] : d.terms()) {
      Mono s;
      for (int i = 0; i < kMaxVars; ++i) s[size_t(i)] = int16_t(m[size_t(i)] + S[j][size_t(i)]);
      int r = ti.at(s);
      M.at(r, int(j)) = (M.at(r, int(j)) + c) % M.mod();
    }
  auto vals = elementary_divisors(M);
  maxval = 0;
  for (int v : vals) maxval = std::max(maxval, v);
  return int(vals.size()) == int(S.size()) && maxval < d.precision();
}

inline PrismReport validate_prism(const DeltaLogRing& L, const RingElem& d) {
  PrismReport rep;
  const DeltaRing& D = L.base;
  const int p = D.ring->p();
  auto fail = [&](const std::string& s) {
    if (rep.ok) rep.failure = s;
    rep.ok = false;
  };
  rep.nonzerodivisor = nonzerodivisor_certificate(d, rep.nzd_window, rep.nzd_max_valuation);
  if (!rep.nonzerodivisor) fail("d is a zero divisor on the window");

  RingElem P = RingElem::constant(D.ring, p);
  bool found = false;
  try {
    rep.a = divide_exact(P, d);
    rep.b = RingElem::zero(D.ring);
    found = true;
  } catch (const Error&) {
  }
  if (!found) {
    RingElem dd = delta_eval(D, d);
    if (dd.is_unit()) {
      RingElem inv = dd.inverse();
      rep.a = -(d.pow(p - 1) * inv);
      rep.b = inv;
      found = true;
    }
  }
  if (found) {
    RingElem lhs = rep.a * d + rep.b * phi(D, d);
    rep.membership_precision = lhs.precision();
    rep.p_membership = lhs == P;
  }
  if (!rep.p_membership) fail("p is not in (d, phi(d)) at precision");
  rep.d_class = element_class(D, d);
  if (rep.d_class != ElementClass::Distinguished) fail("d is not distinguished: " + to_string(rep.d_class));
  return rep;
}

enum class PrismKind { Crystalline, BreuilKisin, QdR, UniversalOriented };

struct ExampleParams {
  int p = 2, n = 3;
  int cap = 8;
  std::vector<int64_t> eisenstein;  // coefficients low to high; empty: u - p
  int depth = 1;
};

// [p]_q in the variable t = q - 1
inline RingElem q_analogue_p(const Ring& R, const std::string& t) {
  auto coeffs = shift_to_t(q_int(R->p()));
  RingElem r = RingElem::zero(R);
  for (size_t j = 0; j < coeffs.size(); ++j) r = r + RingElem::var(R, t, int(j)).scale(coeffs[j]);
  return r;
}

// The q-base Z/p^n[t]/t^{cap+1} with delta(q) = 0, [p]_q declared a nonzerodivisor.
inline DeltaRing q_base(int p, int n, int cap, int depth = 0) {
  Ring R0 = make_ring(p, n, {{"t"}}, {{"t", {1}, cap}}, depth);
  Ring R = with_nonzerodivisor(R0, q_analogue_p(R0, "t"));
  RingElem dt = RingElem::zero(R);
  for (int i = 1; i < p; ++i) dt = dt + RingElem::var(R, "t", i).scale(int64_t(binom_exact(p, i) / uint64_t(p)));
  return make_delta_ring(R, {{"t", dt}});
}

inline PrismTriple make_example(PrismKind kind, const ExampleParams& ps) {
  const int p = ps.p, n = ps.n;
  switch (kind) {
    case PrismKind::Crystalline: {
      DeltaRing D = base_delta_ring(p, n, {}, {}, 0);
      RingElem z = RingElem::zero(D.ring);
      DeltaLogRing L{D, free_monoid(1), {z}, {z}, {}, {}};
      return {"crystalline", L, RingElem::constant(D.ring, p)};
    }
    case PrismKind::BreuilKisin: {
      std::vector<int64_t> E = ps.eisenstein.empty() ? std::vector<int64_t>{-p, 1} : ps.eisenstein;
      const int e = int(E.size()) - 1;
      if (e < 1 || E.back() % p != 1 % p || mod_norm(E.back(), p) != 1)
        throw Error("BadEisenstein", "E is not congruent to u^e mod p");
      for (int i = 0; i < e; ++i)
        if (E[size_t(i)] % p) throw Error("BadEisenstein", "non-leading coefficient not divisible by p");
      if ((E[0] / p) % p == 0) throw Error("BadEisenstein", "constant term is not p times a unit");
      if (e > ps.cap) throw Error("ConfigError", "Eisenstein degree beyond the u-cap");
      Ring R0 = make_ring(p, n, {{"u"}}, {{"u", {1}, ps.cap}});
      RingElem Ep = RingElem::zero(R0);
      for (int i = 0; i <= e; ++i) Ep = Ep + RingElem::var(R0, "u", i).scale(E[size_t(i)]);
      Ring R = with_nonzerodivisor(R0, Ep);
      DeltaRing D = make_delta_ring(R, {{"u", RingElem::zero(R)}});
      DeltaLogRing L{D, free_monoid(1), {RingElem::var(R, "u")}, {RingElem::zero(R)}, {}, {}};
      return {"breuil-kisin", L, Ep.rehome(R)};
    }
    case PrismKind::QdR: {
      DeltaRing D = q_base(p, n, ps.cap);
      return {"qdr", trivial_log_dlog(D, {}), q_analogue_p(D.ring, "t")};
    }
    case PrismKind::UniversalOriented: {
      DeltaRing D = base_delta_ring(p, n, {}, {{"deg", {}, ps.cap}}, ps.depth);
      D = free_delta_adjoin(D, "d", ps.depth, {1});
      // delta(d) is a formal unit: Laurent, weight zero
      auto s = std::make_shared<RingSpec>(*D.ring);
      int i1 = s->var_index("d_1");
      s->vars[size_t(i1)].kind = VarKind::Laurent;
      for (auto& g : s->trunc.gradings) g.weights[size_t(i1)] = 0;
      Ring R = s;
      DeltaRing E{R, {}, D.fault};
      for (auto& dd : D.delta_on_gens)
        E.delta_on_gens.push_back(dd ? std::optional<RingElem>(RingElem::from_terms(R, dd->terms(), dd->precision())) : std::nullopt);
      DeltaLogRing L = adjoin_monoid_dlog(E, {{"x", "y"}}, ps.depth, {1}, {1});
      return {"universal-oriented", L, RingElem::var(L.base.ring, "d")};
    }
  }
  throw Error("ConfigError", "unknown prism kind");
}

// gamma(x) = phi(x)/[p]_q - delta(x)
inline RingElem gamma(const DeltaRing& D, const RingElem& x, const RingElem& pq) {
  RingElem f = phi(D, x);
  return divide_exact(f, pq) - delta_eval(D, x);
}

struct AdjoinedGen {
  std::string name;
  std::string rule;
};

struct EnvelopeResult {
  DeltaLogRing ring;
  std::vector<AdjoinedGen> adjoined;
  TruncSpec window;
  std::string regularity = "not needed";
  std::vector<RingElem> images;  // images of the source variables, when a map is part of the result
};

// Degree-wise homological Koszul complex of distinct variables over Z/p^n;
// H_1 must vanish in every degree up to max_degree.
inline bool variables_regular(int p, int n, int r, int max_degree) {
  for (int e = 1; e <= max_degree; ++e) {
    // monomials of degree k in r variables
    std::function<void(int, int, IVec&, std::vector<IVec>&)> mons = [&](int i, int left, IVec& cur,
                                                                        std::vector<IVec>& out) {
      if (i == r - 1) {
        cur[size_t(i)] = left;
        out.push_back(cur);
        return;
      }
      for (int a = 0; a <= left; ++a) {
        cur[size_t(i)] = a;
        mons(i + 1, left - a, cur, out);
      }
    };
    // K_i basis: (subset S with |S| = i, monomial of degree e - i); stored as
    // cohomological degree r - i
    CochainComplex X;
    X.p = p;
    X.n = n;
    std::vector<std::vector<std::pair<unsigned, IVec>>> basis(size_t(r + 1));
    for (unsigned S = 0; S < (1u << r); ++S) {
      int i = __builtin_popcount(S);
      if (e - i < 0) continue;
      IVec cur(size_t(r), 0);
      std::vector<IVec> ms;
      mons(0, e - i, cur, ms);
      for (auto& m : ms) basis[size_t(i)].push_back({S, m});
    }
    for (int i = r; i >= 0; --i) {
      std::vector<std::string> lab;
      for (auto& [S, m] : basis[size_t(i)]) lab.push_back(std::to_string(S) + vec_string(m));
      X.labels.push_back(lab);
    }
    for (int i = r; i >= 1; --i) {
      std::map<std::pair<unsigned, IVec>, int> pos;
      for (size_t k = 0; k < basis[size_t(i - 1)].size(); ++k) pos[basis[size_t(i - 1)][k]] = int(k);
      SparseMat Dm(int(basis[size_t(i - 1)].size()), int(basis[size_t(i)].size()), X.mod());
      for (size_t k = 0; k < basis[size_t(i)].size(); ++k) {
        auto& [S, m] = basis[size_t(i)][k];
        int sign = 1;
        for (int j = 0; j < r; ++j) {
          if (!(S >> j & 1)) continue;
          IVec m2 = m;
          m2[size_t(j)] += 1;
          Dm.add(pos.at({S & ~(1u << j), m2}), int(k), sign);
          sign = -sign;
        }
      }
      X.d.push_back(Dm);
    }
    if (r >= 1 && cohomology(X, r - 1).total() != 0) return false;
  }
  return true;
}

// Converts terms written with ordinary powers of the listed variables into
// the divided-power basis: x^k = k! g_k(x).
inline RingElem to_divided_powers(const RingElem& x, const Ring& R, const std::vector<int>& dp) {
  Terms t;
  const int64_t m = x.modulus();
  for (auto& [mono, c] : x.terms()) {
    int64_t cc = c;
    for (int v : dp) {
      if (mono[size_t(v)] < 0) throw Error("NotRegular", "negative power of a divided-power generator");
      cc = mul_mod(cc, fact_ratio_mod(mono[size_t(v)], 0, m), m);
    }
    t.emplace_back(mono, cc);
  }
  return RingElem::from_terms(R, t, x.precision());
}

// PD envelope of the ideal generated by distinct ordinary variables.
inline EnvelopeResult pd_envelope(const DeltaLogRing& B, const std::vector<std::string>& gens, int pd_cap) {
  EnvelopeResult out{B, {}, B.base.ring->trunc, "no generators", {}};
  if (gens.empty()) return out;
  const Ring& R0 = B.base.ring;
  std::vector<int> idx;
  for (auto& g : gens) {
    int i = R0->var_index(g);
    if (R0->vars[size_t(i)].kind != VarKind::Poly) throw Error("NotRegular", g + " is not an ordinary variable");
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) throw Error("NotRegular", "repeated generator " + g);
    idx.push_back(i);
  }
  if (!variables_regular(R0->p(), R0->n(), int(idx.size()), pd_cap))
    throw Error("NotRegular", "Koszul H_1 does not vanish on the window");
  out.regularity = "Koszul H_1 = 0 in degrees <= " + std::to_string(pd_cap);
  auto s = std::make_shared<RingSpec>(*R0);
  for (int i : idx) s->vars[size_t(i)].kind = VarKind::DividedPower;
  std::vector<int> w(size_t(R0->nvars()), 0);
  for (int i : idx) w[size_t(i)] = 1;
  s->trunc.gradings.push_back({"pd", w, pd_cap});
  s->nonzerodivisors.clear();
  Ring R = s;
  auto conv = [&](const RingElem& x) { return to_divided_powers(x, R, idx); };
  DeltaRing D{R, {}, B.base.fault};
  for (auto& d : B.base.delta_on_gens) D.delta_on_gens.push_back(d ? std::optional<RingElem>(conv(*d)) : std::nullopt);
  DeltaLogRing L{D, B.monoid, {}, {}, {}, {}};
  for (auto& a : B.alpha_gens) L.alpha_gens.push_back(conv(a));
  for (auto& a : B.dlog_gens) L.dlog_gens.push_back(conv(a));
  for (auto& a : B.alpha_units) L.alpha_units.push_back(conv(a));
  for (auto& a : B.dlog_units) L.dlog_units.push_back(conv(a));
  out.ring = L;
  out.window = R->trunc;
  for (auto& g : gens)
    for (int k = 2; k <= pd_cap; ++k)
      out.adjoined.push_back({"g" + std::to_string(k) + "(" + g + ")", g + "^" + std::to_string(k) + " = " + std::to_string(k) + "! g" + std::to_string(k) + "(" + g + ")"});
  return out;
}

// ---------------------------------------------------------------------------
// q-PD envelope of the unit point u -> 1 over D = Z_p[[q-1]].
//
// F is realized on the q-divided powers g_k = prod_{i<k}(u - q^i) / [k]_q!,
// k <= K; everything is exact modulo the span of g_{>K}, which is an ideal
// stable under phi.  Coefficients are exact rationals in q, and membership
// in D is decided by their reduced denominators.

using FElem = std::vector<QRat>;  // coefficients on g_0..g_K
using UPoly = std::vector<QRat>;  // coefficients on u^0, u^1, ...

// prod_{i<k} (u - q^i) with Z[q] coefficients
inline std::vector<QPoly> q_pochhammer(int k) {
  std::vector<QPoly> P{QPoly::constant(1)};
  for (int i = 0; i < k; ++i) {
    std::vector<QPoly> Q(P.size() + 1);
    for (size_t j = 0; j < P.size(); ++j) {
      Q[j + 1] = Q[j + 1] + P[j];
      Q[j] = Q[j] - P[j] * QPoly::monomial(i);
    }
    P = Q;
  }
  return P;
}

struct QPDSpace {
  int p = 2, K = 4;

  UPoly to_upoly(const FElem& a) const {
    UPoly U;
    for (size_t k = 0; k < a.size(); ++k) {
      if (a[k].is_zero()) continue;
      auto P = q_pochhammer(int(k));
      QRat c = divide_by_cyc(a[k], q_factorials(int(k)));
      if (U.size() < P.size()) U.resize(P.size());
      for (size_t j = 0; j < P.size(); ++j) U[j] = U[j] + c * QRat::from(P[j]);
    }
    return U;
  }

  FElem from_upoly(UPoly U) const {
    FElem out(size_t(K + 1));
    for (int j = int(U.size()) - 1; j >= 0; --j) {
      QRat e = U[size_t(j)];
      if (e.is_zero()) continue;
      auto P = q_pochhammer(j);
      for (size_t i = 0; i < P.size(); ++i) U[i] = U[i] - e * QRat::from(P[i]);
      if (j <= K) out[size_t(j)] = e * QRat::from(q_factorial(j));
    }
    return out;
  }

  static CycFactors q_factorials(int k) {
    CycFactors f;
    for (int i = 2; i <= k; ++i)
      for (auto& [d, e] : q_int_factors(i)) f[d] += e;
    return f;
  }

  FElem mul(const FElem& a, const FElem& b) const {
    UPoly A = to_upoly(a), B = to_upoly(b), C(A.size() + B.size());
    for (size_t i = 0; i < A.size(); ++i)
      if (!A[i].is_zero())
        for (size_t j = 0; j < B.size(); ++j) C[i + j] = C[i + j] + A[i] * B[j];
    return from_upoly(C);
  }
  FElem add(const FElem& a, const FElem& b, int64_t sb = 1) const {
    FElem r(size_t(K + 1));
    for (int k = 0; k <= K; ++k) r[size_t(k)] = qrat_combine(a[size_t(k)], b[size_t(k)], sb);
    return r;
  }
  FElem pow(const FElem& a, int e) const {
    FElem r = basis(0);
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  FElem basis(int k) const {
    FElem r(size_t(K + 1));
    if (k <= K) r[size_t(k)] = QRat::constant(1);
    return r;
  }
  // phi(u) = u^p, phi(q) = q^p
  FElem phi(const FElem& a) const {
    UPoly A = to_upoly(a), B(A.empty() ? 0 : (A.size() - 1) * size_t(p) + 1);
    for (size_t i = 0; i < A.size(); ++i) B[i * size_t(p)] = subst_power(A[i], p);
    return from_upoly(B);
  }
  FElem div_pq(const FElem& a) const {
    FElem r = a;
    for (auto& c : r) c = divide_by_cyc(c, q_int_factors(p));
    return r;
  }
  FElem delta(const FElem& a) const {
    FElem r = add(phi(a), pow(a, p), -1);
    for (auto& c : r) c = divide_by_int(c, p);
    return r;
  }
  FElem gamma(const FElem& a) const { return add(div_pq(phi(a)), delta(a), -1); }

  bool in_F(const FElem& a) const {
    for (auto& c : a)
      if (!c.in_D(p)) return false;
    return true;
  }
  // J = (q - 1) + span g_{>=1}: the kernel of F -> Z_p
  bool in_J(const FElem& a) const { return in_F(a) && (a[0].is_zero() || a[0].num.eval1() == 0); }
};

struct QPDEnvelope {
  int p = 2, n = 1, K = 4, depth = 1;
  QPDSpace space;
  std::vector<std::string> basis;     // labels of g_0..g_K
  std::vector<FElem> gammas;          // gamma^1(z), ..., gamma^depth(z)
  std::vector<AdjoinedGen> adjoined;
  bool relations_ok = true;
  std::string failure;
};

inline std::string qpd_label(int k) { return k == 0 ? "1" : "g" + std::to_string(k) + "(z)"; }

// z = u - 1 = g_1; adjoins gamma(z), gamma^2(z), ... and re-checks
// phi(g) in [p]_q F and gamma(g) in J for every generator g.
inline QPDEnvelope qpd_envelope_unit_point(int p, int n, int K, int depth) {
  QPDEnvelope E;
  E.p = p;
  E.n = n;
  E.K = K;
  E.depth = depth;
  E.space = QPDSpace{p, K};
  for (int k = 0; k <= K; ++k) E.basis.push_back(qpd_label(k));
  auto fail = [&](const std::string& s) {
    if (E.relations_ok) E.failure = s;
    E.relations_ok = false;
  };
  FElem g = E.space.basis(1);
  std::string name = "z";
  for (int k = 1; k <= depth; ++k) {
    if (!E.space.in_F(E.space.div_pq(E.space.phi(g)))) fail("phi(" + name + ") not in [p]_q F");
    FElem next = E.space.gamma(g);
    if (!E.space.in_J(next)) fail("gamma(" + name + ") not in the ideal");
    std::string nn = k == 1 ? "gamma(z)" : "gamma^" + std::to_string(k) + "(z)";
    E.adjoined.push_back({nn, nn + " = phi(" + name + ")/[p]_q - delta(" + name + ")"});
    E.gammas.push_back(next);
    g = next;
    name = nn;
  }
  return E;
}

// Value of an F element at q = 1 in the divided-power ring Z/p^n<z>.
inline RingElem qpd_at_one(const QPDEnvelope& E, const FElem& a, const Ring& pd) {
  const int64_t m = ipow(E.p, E.n);
  RingElem r = RingElem::zero(pd);
  for (int k = 0; k <= E.K; ++k)
    if (!a[size_t(k)].is_zero()) r = r + RingElem::var(pd, "z", k).scale(a[size_t(k)].eval1_mod(E.p, m));
  return r;
}

// The reduced data: Z/p^n<z>, z a divided-power variable capped at K.
inline Ring pd_line(int p, int n, int K) { return make_ring(p, n, {{"z", VarKind::DividedPower}}, {{"pd", {1}, K}}); }

// ---------------------------------------------------------------------------
// Prismatic envelopes of x - w by elimination: x := w + d y with a free
// delta-tower on y.

// delta^k(e), k = 0..depth, computed at precision n + depth and brought back.
inline std::vector<RingElem> delta_tower_images(const DeltaRing& D, const RingElem& e, int depth) {
  const int n = D.ring->n();
  DeltaRing H = with_delta_precision(D, n + depth);
  RingElem x = lift_to(e, H.ring);
  std::vector<RingElem> out;
  for (int k = 0; k <= depth; ++k) {
    out.push_back(RingElem::from_terms(D.ring, x.terms(), std::min(n, x.precision())).with_window(x.window()));
    if (k < depth) x = delta_eval(H, x);
  }
  return out;
}

struct EliminationGen {
  std::string var;   // top of a free delta tower var, var_1, ...
  RingElem rest;     // in the source ring, free of the var tower
  std::string name;  // name of the new tower
};

// Ring homomorphism given by images of the variables (Laurent variables need
// invertible images; divided-power variables are not supported here).
inline RingElem apply_hom(const RingElem& x, const std::vector<RingElem>& images, const Ring& target) {
  RingElem out = RingElem::zero(target).with_prec(x.precision());
  for (auto& [m, c] : x.terms()) {
    RingElem t = RingElem::constant(target, c).with_prec(x.precision());
    for (int i = 0; i < x.ring()->nvars(); ++i) {
      if (!m[size_t(i)]) continue;
      if (x.ring()->vars[size_t(i)].kind == VarKind::DividedPower)
        throw Error("UnsupportedMap", "ring map through a divided-power variable");
      t = t * images[size_t(i)].pow(m[size_t(i)]);
    }
    out = out + t;
  }
  return out;
}

inline EnvelopeResult prismatic_envelope_regular(const DeltaRing& B, const RingElem& d, const std::vector<EliminationGen>& gens,
                                                 int depth) {
  const Ring& R0 = B.ring;
  EnvelopeResult out{trivial_log_dlog(B, {}), {}, R0->trunc, "eliminated variables", {}};
  for (int i = 0; i < R0->nvars(); ++i) out.images.push_back(RingElem::var(R0, i));
  if (gens.empty()) return out;
  // new variable list: drop eliminated towers, append the y towers
  std::set<int> dropped;
  std::vector<std::pair<int, int>> towers;  // (first index, length)
  for (auto& g : gens) {
    int i0 = R0->var_index(g.var);
    int len = 1;
    while (i0 + len < R0->nvars() && R0->vars[size_t(i0 + len)].name == g.var + "_" + std::to_string(len)) ++len;
    if (len < depth + 1) throw Error("DepthExhausted", "tower of " + g.var + " shorter than the envelope depth");
    for (int k = 0; k < len; ++k) dropped.insert(i0 + k);
    towers.push_back({i0, len});
    for (int v : support_vars(g.rest))
      if (dropped.count(v)) throw Error("NotRegular", "generator rest involves the eliminated tower");
  }
  std::vector<Var> vars;
  std::vector<int> keep;
  for (int i = 0; i < R0->nvars(); ++i)
    if (!dropped.count(i)) {
      vars.push_back(R0->vars[size_t(i)]);
      keep.push_back(i);
    }
  std::vector<Grading> gs = R0->trunc.gradings;
  for (auto& g : gs) {
    std::vector<int> w;
    for (int i : keep) w.push_back(g.weights[size_t(i)]);
    g.weights = w;
  }
  for (size_t t = 0; t < gens.size(); ++t)
    for (int k = 0; k < towers[t].second; ++k) {
      vars.push_back({k ? gens[t].name + "_" + std::to_string(k) : gens[t].name, VarKind::Poly});
      for (size_t g = 0; g < gs.size(); ++g) gs[g].weights.push_back(R0->trunc.gradings[g].weights[size_t(towers[t].first + k)]);
    }
  Ring R = make_ring(R0->p(), R0->n(), vars, gs, R0->trunc.delta_depth);
  DeltaRing E{R, std::vector<std::optional<RingElem>>(size_t(R->nvars())), B.fault};
  std::vector<RingElem> img(size_t(R0->nvars()));
  for (size_t j = 0; j < keep.size(); ++j) img[size_t(keep[j])] = RingElem::var(R, int(j));
  // kept deltas: images of the old deltas (they avoid the dropped towers)
  for (size_t j = 0; j < keep.size(); ++j)
    if (B.delta_on_gens[size_t(keep[j])]) {
      auto vs = support_vars(*B.delta_on_gens[size_t(keep[j])]);
      for (int v : vs)
        if (dropped.count(v)) throw Error("NotRegular", "kept delta depends on an eliminated tower");
    }
  auto base_image = [&](const RingElem& x) {
    Terms t;
    for (auto& [m, c] : x.terms()) {
      Mono mm = mono_zero();
      for (size_t j = 0; j < keep.size(); ++j) mm[j] = m[size_t(keep[j])];
      t.emplace_back(mm, c);
    }
    return RingElem::from_terms(R, t, x.precision());
  };
  for (size_t j = 0; j < keep.size(); ++j)
    if (B.delta_on_gens[size_t(keep[j])]) E.delta_on_gens[j] = base_image(*B.delta_on_gens[size_t(keep[j])]);
  int next = int(keep.size());
  for (size_t t = 0; t < gens.size(); ++t) {
    for (int k = 0; k < towers[t].second; ++k)
      if (k + 1 < towers[t].second) E.delta_on_gens[size_t(next + k)] = RingElem::var(R, next + k + 1);
    next += towers[t].second;
  }
  next = int(keep.size());
  RingElem dR = base_image(d);
  for (size_t t = 0; t < gens.size(); ++t) {
    RingElem y = RingElem::var(R, next);
    RingElem x = base_image(gens[t].rest) + dR * y;
    auto tw = delta_tower_images(E, x, towers[t].second - 1);
    for (int k = 0; k < towers[t].second; ++k) img[size_t(towers[t].first + k)] = tw[size_t(k)];
    out.adjoined.push_back({gens[t].name, "d*" + gens[t].name + " = " + gens[t].var + " - (" + gens[t].rest.to_string() + ")"});
    next += towers[t].second;
  }
  out.ring = trivial_log_dlog(E, {});
  out.window = R->trunc;
  out.images = img;
  return out;
}

// ---------------------------------------------------------------------------

struct ExactifiedTriple {
  DeltaLogRing ring;
  Monoid exactified;
  bool exact = false;
  bool surjective = false;
};

// (A, I, M) with M -> N surjective on groups: M' = exactification, A' the
// extension of the log structure to M'.
inline ExactifiedTriple exactify_triple(const DeltaLogRing& L, const MonoidMap& h, int bound) {
  ExactifiedTriple T;
  T.exactified = exactify(h);
  T.ring = extend_to_group(L, T.exactified);
  MonoidMap hp = make_map(T.exactified, h.dst, h.map);
  T.exact = is_exact(hp, bound) == Verdict::True;
  T.surjective = image_lattice(hp) == groupify(h.dst);
  return T;
}

}  // namespace logprism
