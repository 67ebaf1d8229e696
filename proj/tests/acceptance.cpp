// Acceptance run: one line per criterion, exit status 0 iff all pass.
// Usage: acceptance <logprism-cli> <golden-dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "logprism/appxb.hpp"
#include "logprism/cechalex.hpp"
#include "logprism/qderham.hpp"

using namespace logprism;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// ---------------------------------------------------------------------------
// delta oracle: product and sum rules over terms, integers for constants

RingElem oracle_delta_const(const Ring& R, int64_t c, int k) {
  const int p = R->p();
  const int64_t m = ipow(p, k);
  int64_t cp = 1;
  for (int i = 0; i < p; ++i) cp = mul_mod(cp, c, m);
  return RingElem::constant(R, mod_norm(c - cp, m) / p).with_prec(k - 1);
}

struct DeltaOracle {
  const DeltaRing& D;
  int p;

  RingElem carry(const RingElem& a, const RingElem& b) const {
    RingElem s = RingElem::zero(D.ring);
    for (int i = 1; i < p; ++i) s = s + RingElem::constant(D.ring, int64_t(binom_exact(p, i) / p)) * a.pow(i) * b.pow(p - i);
    return s;
  }
  RingElem prod(const RingElem& a, const RingElem& da, const RingElem& b, const RingElem& db) const {
    return a.pow(p) * db + b.pow(p) * da + (da * db).times_p();
  }
  RingElem mono(const Mono& m, int k) const {
    RingElem acc = RingElem::constant(D.ring, 1).with_prec(k), dacc = RingElem::zero(D.ring);
    for (int i = 0; i < D.ring->nvars(); ++i)
      for (int e = 0; e < m[size_t(i)]; ++e) {
        RingElem v = RingElem::var(D.ring, i);
        dacc = prod(acc, dacc, v, *D.delta_on_gens.at(size_t(i)));
        acc = acc * v;
      }
    return dacc;
  }
  RingElem operator()(const RingElem& x) const {
    const int k = x.precision();
    RingElem acc = RingElem::zero(D.ring).with_prec(k), dacc = RingElem::zero(D.ring);
    for (auto& [m, c] : x.terms()) {
      RingElem cm = RingElem::constant(D.ring, c).with_prec(k), mm = RingElem::monomial(D.ring, m);
      dacc = dacc + prod(cm, oracle_delta_const(D.ring, c, k), mm, mono(m, k)) - carry(acc, cm * mm);
      acc = acc + cm * mm;
    }
    return dacc.with_prec(k - 1);
  }
};

RingElem random_elem(const DeltaRing& D, std::mt19937_64& rng, int nterms, int maxexp) {
  const Ring& R = D.ring;
  std::vector<int> vs;
  for (int i = 0; i < R->nvars(); ++i)
    if (D.delta_on_gens[size_t(i)] && R->vars[size_t(i)].kind == VarKind::Poly) vs.push_back(i);
  const int64_t mod = R->coeff.modulus();
  RingElem e = RingElem::constant(R, int64_t(rng() % uint64_t(mod)));
  if (vs.empty()) return e;
  for (int t = 0; t < nterms; ++t) {
    Mono m = mono_zero();
    m[size_t(vs[rng() % vs.size()])] = int16_t(rng() % uint64_t(maxexp + 1));
    if (rng() % 2) m[size_t(vs[rng() % vs.size()])] += 1;
    e = e + RingElem::monomial(R, m, int64_t(rng() % uint64_t(mod)));
  }
  return e;
}

DeltaRing two_free(int p, int n, int depth, int cap) {
  DeltaRing D = base_delta_ring(p, n, {}, {{"deg", {}, cap}}, depth);
  D = free_delta_adjoin(D, "x", depth, {1});
  return free_delta_adjoin(D, "y", depth, {1});
}

Outcome criterion1() {
  Outcome o;
  std::mt19937_64 rng(101);
  for (int p : {2, 3, 5})
    for (int n : {2, 4}) {
      auto D = two_free(p, n, 2, 3 * p);
      DeltaOracle del{D, p};
      const int pairs = n == 4 ? 1000 : 200;
      for (int t = 0; t < pairs && o.ok; ++t) {
        auto x = random_elem(D, rng, 3, 2), y = random_elem(D, rng, 3, 2);
        auto dx = delta_eval(D, x), dy = delta_eval(D, y);
        std::string at = " p=" + std::to_string(p) + " n=" + std::to_string(n) + " x=" + x.to_string();
        o.require(dx == del(x), "delta vs oracle" + at);
        o.require(delta_eval(D, x + y) == dx + dy - del.carry(x, y), "sum rule" + at);
        o.require(delta_eval(D, x * y) == del.prod(x, dx, y, dy), "product rule" + at);
        auto fx = phi(D, x), fy = phi(D, y);
        o.require(phi(D, x + y) == fx + fy && phi(D, x * y) == fx * fy, "phi not a ring map" + at);
        o.require((fx - x.pow(p)).with_prec(1).is_zero(), "phi not Frobenius mod p" + at);
      }
      // delta_log on the free log ring on x: dlog(0) = 0, alpha^p dlog = delta(alpha),
      // dlog(a + b) = dlog a + dlog b + p dlog a dlog b
      auto L = one_generator_log(p, n, 2, 12 * p, 3 * p);
      o.require(log_value(L, IVec{0}).dlog.is_zero(), "dlog(0) != 0");
      for (int t = 0; t < 1000 && o.ok; ++t) {
        int64_t a = int64_t(rng() % 5), b = int64_t(rng() % 5);
        auto va = log_value(L, IVec{a}), vb = log_value(L, IVec{b}), vab = log_value(L, IVec{a + b});
        std::string at = " p=" + std::to_string(p) + " a=" + std::to_string(a) + " b=" + std::to_string(b);
        o.require(va.alpha.pow(p) * va.dlog == delta_eval(L.base, va.alpha), "alpha^p dlog != delta alpha" + at);
        o.require(vab.alpha == va.alpha * vb.alpha, "alpha not multiplicative" + at);
        o.require(vab.dlog == va.dlog + vb.dlog + (va.dlog * vb.dlog).times_p(), "dlog product rule" + at);
      }
    }
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  for (int p : {2, 3, 5}) {
    const int depth = 4, n = 3;
    auto L = one_generator_log(p, n, depth, 4 * p, int(ipow(p, depth)));
    const Ring& R = L.base.ring;
    std::vector<std::string> names;
    for (auto& v : R->vars) names.push_back(v.name);
    o.require(names == std::vector<std::string>{"x", "y0", "y1", "y2", "y3", "y4"}, "generators of the free log ring");
    auto one = RingElem::constant(R, 1);
    auto x = RingElem::var(R, "x"), y0 = RingElem::var(R, "y0");
    o.require(phi(L.base, x) == x.pow(p) * (one + y0.scale(p)), "phi(x) != x^p (1 + p y0)");
    for (int i = 0; i < depth; ++i) {
      auto yi = RingElem::var(R, "y" + std::to_string(i)), yn = RingElem::var(R, "y" + std::to_string(i + 1));
      o.require(phi(L.base, yi) == yi.pow(p) + yn.scale(p), "phi(y" + std::to_string(i) + ")");
    }
    // x^{-1}: dlog = -y0 / (1 + p y0), expanded by hand
    auto G = extend_to_group(L, make_monoid(1, {}, {{1}}));
    const Ring& RG = G.base.ring;
    auto g0 = RingElem::var(RG, "y0");
    RingElem series = RingElem::zero(RG), term = RingElem::constant(RG, 1);
    for (int j = 0; j <= n + 4 * p; ++j) {
      series = series + term;
      term = term * g0.scale(-p);
    }
    auto inv = log_value(G, IVec{-1}), fwd = log_value(G, IVec{1});
    o.require(inv.alpha == RingElem::var(RG, "x", -1), "alpha(-1) != x^-1");
    o.require(inv.dlog == -(g0 * series), "dlog(x^-1) != -y0/(1+p y0)");
    o.require((inv.dlog + fwd.dlog + (inv.dlog * fwd.dlog).scale(p)).is_zero(), "product rule on x * x^-1");
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(303);
  auto w_is_hom = [&](const DeltaRing& D, int trials) {
    for (int t = 0; t < trials; ++t) {
      auto x = random_elem(D, rng, 3, 2), y = random_elem(D, rng, 3, 2);
      auto wx = w2_section(D, x), wy = w2_section(D, y);
      if (!(w2_section(D, x + y) == wx + wy) || !(w2_section(D, x * y) == wx * wy)) return false;
    }
    return true;
  };
  for (int p : {2, 3}) {
    ExampleParams ps{p, 3};
    ps.cap = 6;
    ps.depth = 2;
    std::vector<std::pair<std::string, DeltaRing>> valid = {
        {"two-generator", two_free(p, 3, 2, 3 * p)},
        {"one-generator log", one_generator_log(p, 3, 2, 3 * p, 2 * p).base},
    };
    for (auto k : {PrismKind::Crystalline, PrismKind::BreuilKisin, PrismKind::QdR, PrismKind::UniversalOriented}) {
      auto T = make_example(k, ps);
      valid.push_back({T.kind, T.ring.base});
    }
    for (auto& [name, D] : valid) o.require(w_is_hom(D, 100), "w not a ring map on " + name + " p=" + std::to_string(p));

    struct Fault {
      std::string where;
      DeltaRing D;
      std::string gen;
    };
    auto bk = make_example(PrismKind::BreuilKisin, ps).ring.base;
    auto qb = make_example(PrismKind::QdR, ps).ring.base;
    auto two = two_free(p, 3, 2, 3 * p);
    std::vector<Fault> faults = {{"two-generator", two, "x"},
                                 {"two-generator", two, "y"},
                                 {"two-generator", two, "x_1"},
                                 {"breuil-kisin", bk, "u"},
                                 {"qdr", qb, "t"}};
    for (auto& f : faults) {
      DeltaRing F = f.D;
      F.fault = DeltaFault{RingElem::var(F.ring, f.gen).terms()[0].first};
      bool caught = false;
      for (int t = 0; t < 100 && !caught; ++t) {
        auto x = random_elem(f.D, rng, 3, 2), y = random_elem(f.D, rng, 3, 2);
        auto wx = w2_section(F, x), wy = w2_section(F, y);
        caught = !(w2_section(F, x + y) == wx + wy) || !(w2_section(F, x * y) == wx * wy);
      }
      o.require(caught, "fault on " + f.gen + " in " + f.where + " not detected, p=" + std::to_string(p));
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Monoid oracle: explicit element sets in a box, reached by paths of
// generator steps that stay in the box (enough for coordinate monoids).

int64_t key(const IVec& v) {
  int64_t k = 0;
  for (auto c : v) k = k * 4096 + (c + 2048);
  return k;
}

struct Box {
  int rank = 0;
  std::unordered_set<int64_t> keys;
  std::vector<IVec> elems;
  bool has(const IVec& v) const { return keys.count(key(v)) > 0; }
};

Box reach(const Monoid& M, int R, bool group) {
  Box b;
  b.rank = M.rank;
  std::vector<IVec> steps;
  for (auto& g : M.gens) {
    steps.push_back(g);
    if (group) steps.push_back(vscale(-1, g));
  }
  for (auto& u : M.units) {
    steps.push_back(u);
    steps.push_back(vscale(-1, u));
  }
  IVec zero(size_t(M.rank), 0);
  b.keys.insert(key(zero));
  b.elems.push_back(zero);
  for (size_t i = 0; i < b.elems.size(); ++i)
    for (auto& s : steps) {
      IVec w = vadd(b.elems[i], s);
      bool in = std::all_of(w.begin(), w.end(), [&](int64_t c) { return std::llabs(c) <= R; });
      if (in && b.keys.insert(key(w)).second) b.elems.push_back(w);
    }
  return b;
}

IVec image_of(const MonoidMap& h, const IVec& v) {
  IVec w(size_t(h.map.rows), 0);
  for (int i = 0; i < h.map.rows; ++i)
    for (int j = 0; j < h.map.cols; ++j) w[size_t(i)] += h.map.at(i, j) * v[size_t(j)];
  return w;
}

int stretch(const MonoidMap& h) {
  int s = 1;
  for (int i = 0; i < h.map.rows; ++i) {
    int r = 0;
    for (int j = 0; j < h.map.cols; ++j) r += int(std::llabs(h.map.at(i, j)));
    s = std::max(s, r);
  }
  return s;
}

bool oracle_exact(const MonoidMap& h, int B) {
  Box gp = reach(h.src, B, true), M = reach(h.src, B, false);
  Box N = reach(h.dst, B * stretch(h), false);
  for (auto& v : gp.elems)
    if (N.has(image_of(h, v)) && !M.has(v)) return false;
  return true;
}

// h(m1) + n1 = h(m2) + n2 forces m3 with n1 - h(m3) in N and m1 - m2 + m3 in M;
// only d = m1 - m2 matters.
bool oracle_integral(const MonoidMap& h, int B) {
  const int S = stretch(h);
  Box M = reach(h.src, B, false), M2 = reach(h.src, 2 * B, false), gp = reach(h.src, B, true);
  Box N = reach(h.dst, B, false), Nbig = reach(h.dst, 4 * B * S, false);
  for (auto& d : gp.elems) {
    IVec hd = image_of(h, d);
    for (auto& n1 : N.elems) {
      if (!Nbig.has(vadd(hd, n1))) continue;
      bool found = false;
      for (auto& m3 : M2.elems)
        if (Nbig.has(vsub(n1, image_of(h, m3))) && M2.has(vadd(d, m3))) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  }
  return true;
}

// Relative Frobenius Q (+)_{P,p} P -> Q, (u, w) -> p u + h(w). Classes of the
// pushout group have representatives with w in [0, p)^k when P^gp = Z^k.
bool oracle_cartier(const MonoidMap& h, int p, int B) {
  if (!oracle_integral(h, B)) return false;
  const int k = h.src.rank, S = stretch(h);
  Box U = reach(make_monoid(h.dst.rank, {}, [&] {
                  std::vector<IVec> e;
                  for (int i = 0; i < h.dst.rank; ++i) {
                    IVec v(size_t(h.dst.rank), 0);
                    v[size_t(i)] = 1;
                    e.push_back(v);
                  }
                  return e;
                }()),
                B, true);
  Box Q = reach(h.dst, (p + 2) * B * S, false), P = reach(h.src, (p + 1) * B, false);
  Box A = reach(h.src, B, true);
  std::vector<IVec> ws{IVec{}};
  for (int i = 0; i < k; ++i) {
    std::vector<IVec> next;
    for (auto& w : ws)
      for (int c = 0; c < p; ++c) {
        IVec v = w;
        v.push_back(c);
        next.push_back(v);
      }
    ws = next;
  }
  for (auto& u : U.elems)
    for (auto& w : ws) {
      if (!Q.has(vadd(vscale(p, u), image_of(h, w)))) continue;
      bool in = false;
      for (auto& a : A.elems)
        if (Q.has(vadd(u, image_of(h, a))) && P.has(vsub(w, vscale(p, a)))) {
          in = true;
          break;
        }
      if (!in) return false;
    }
  return true;
}

Verdict of(bool b) { return b ? Verdict::True : Verdict::False; }

Outcome criterion4() {
  Outcome o;
  const int lib = 4, ora = 12;
  for (auto& e : monoid_catalog()) {
    const bool ex = oracle_exact(e.map, ora), in = oracle_integral(e.map, ora);
    o.require(is_exact(e.map, lib) == of(ex), "is_exact disagrees on " + e.name);
    o.require(is_integral(e.map, lib) == of(in), "is_integral disagrees on " + e.name);
    for (int p : {2, 3})
      o.require(is_cartier_type(e.map, p, lib) == of(oracle_cartier(e.map, p, ora)),
                "is_cartier_type disagrees on " + e.name + " p=" + std::to_string(p));
  }
  // named cases, from the oracle side
  o.require(oracle_exact(catalog_map("identity-N").map, ora), "identity not exact");
  o.require(oracle_cartier(catalog_map("semistable").map, 2, ora), "diagonal not Cartier type");
  o.require(oracle_cartier(catalog_map("trivial-to-N").map, 3, ora), "trivial -> N not Cartier type");
  o.require(!oracle_exact(catalog_map("sum").map, ora), "sum reported exact");
  o.require(!oracle_cartier(catalog_map("times-2").map, 2, ora), "times-2 not flagged at p = 2");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  int used = 0;
  for (auto& e : monoid_catalog()) {
    const MonoidMap& h = e.map;
    if (!(image_lattice(h) == groupify(h.dst))) continue;  // surjective on groups
    ++used;
    Monoid Mp = exactify(h);
    auto hp = make_map(Mp, h.dst, h.map);
    o.require(oracle_exact(hp, 8), "exactified " + e.name + " not exact");
    Box img = reach(Mp, 8, false);
    for (auto& g : h.dst.gens) {
      bool hit = false;
      for (auto& m : img.elems) hit = hit || image_of(hp, m) == g;
      o.require(hit, "exactified " + e.name + " misses a generator");
    }
    if (!h.src.units.empty() || h.src.rank == 0) continue;
    for (int p : {2, 3}) {
      DeltaRing D = base_delta_ring(p, 3, {}, {{"x", {}, 3 * p}, {"y", {}, 2 * p}}, 2);
      std::vector<OneGeneratorNames> names;
      for (int i = 0; i < h.src.rank; ++i) names.push_back({"x" + std::to_string(i + 1), std::string(1, char('a' + i))});
      auto L = adjoin_monoid_dlog(D, names, 1, {1, 0}, {0, 1});
      auto rep = validate_deltalog(extend_to_group(L, Mp), 30);
      o.require(rep.ok && !rep.truncated, "A' on " + e.name + ": " + rep.failure);
    }
  }
  o.require(used >= 3, "too few surjective catalog maps");
  return o;
}

// ---------------------------------------------------------------------------

int x_degree(const std::string& label) {
  if (label == "1") return 0;
  if (label == "x") return 1;
  return std::stoi(label.substr(2));
}

Outcome criterion6() {
  Outcome o;
  for (int p : {2, 3}) {
    const int cap = 10 * p;
    auto r = hodge_tate_ranks(q_chart("log-affine-line"), p, 3, cap);
    std::vector<std::vector<int>> seen(2, std::vector<int>(size_t(cap + 1), 0));
    for (auto& row : r.rows) {
      const int m = x_degree(row.monomial);
      // Z_p[q]/[p]_q is free of rank p - 1
      const int want = m % p == 0 ? p - 1 : 0;
      o.require(row.degree <= 1 && m <= cap, "row outside the window");
      o.require(row.computed == want && row.torsion == 0,
                "p=" + std::to_string(p) + " H^" + std::to_string(row.degree) + " at " + row.monomial);
      seen[size_t(row.degree)][size_t(m)]++;
    }
    for (int i = 0; i < 2; ++i)
      for (int m = 0; m <= cap; ++m) o.require(seen[size_t(i)][size_t(m)] == 1, "window incomplete");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (int p : {2, 3}) {
    for (auto& C : q_chart_catalog())
      for (int cap : {2 * p, 7}) {
        std::string why;
        bool same = same_complex(reduce_q_to_1(build_log_qdr(C, p, cap), p, 3), classical_log_dr(C, p, 3, cap), &why);
        o.require(same, C.name + " p=" + std::to_string(p) + ": " + why);
      }
    auto E = qpd_envelope_unit_point(p, 3, p * p, 2);
    std::string why;
    o.require(same_complex(reduce_q_to_1(build_log_qdr_envelope(E), p, 3), classical_pd_dr(p, 3, p * p), &why),
              "q-PD envelope: " + why);
  }
  return o;
}

Mat dense(const SparseMat& S, int p, int n) {
  std::vector<int> rr(size_t(S.rows)), cc(size_t(S.cols));
  std::iota(rr.begin(), rr.end(), 0);
  std::iota(cc.begin(), cc.end(), 0);
  return to_dense(S, rr, cc, p, n);
}

Outcome criterion8() {
  Outcome o;
  for (const char* name : {"log-affine-line", "semistable-node"})
    for (int p : {2, 3}) {
      const int n = 3, tcap = 2 * p;
      auto F = frobenius_chain_map(q_chart(name), p, n, 4 * p, tcap);
      std::string at = std::string(" on ") + name + " p=" + std::to_string(p);
      o.require(F.labels_scaled, "labels not scaled by [p]_q" + at);
      o.require(F.factors && F.factorization.size() == F.map.size(), "no factorization" + at);
      if (!o.ok) break;
      auto pq = multiplication_by(F.tgt, lambda_trunc(p, n, tcap), q_int(p));
      for (size_t i = 0; i < F.map.size(); ++i) {
        Mat Phi = dense(F.map[i], p, n);
        if (i + 1 < F.map.size()) {
          Mat lhs = dense(F.tgt.diff(int(i)), p, n) * Phi, rhs = dense(F.map[i + 1], p, n) * dense(F.src.diff(int(i)), p, n);
          o.require(lhs == rhs, "d Phi != Phi d in degree " + std::to_string(i) + at);
        }
        Mat scale = Mat::identity(pq[i].rows, p, n);
        for (size_t e = 0; e < i; ++e) scale = pq[i] * scale;
        o.require(scale * F.factorization[i] == Phi, "Phi != [p]_q^i Y in degree " + std::to_string(i) + at);
      }
    }
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (int p : {2, 3}) {
    const int cap = 6 * p;
    auto r = cartier_check_charp(catalog_map("semistable"), p, cap);
    // x^a y^b survives in both degrees iff a = b mod p
    int expect = 0;
    for (int a = 0; a <= cap; ++a)
      for (int b = 0; a + b <= cap; ++b) expect += (a - b) % p == 0;
    o.require(r.ok(), "unmatched at " + r.witness);
    o.require(r.computed_totals == std::vector<int>{expect, expect}, "totals at p=" + std::to_string(p));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  struct Case {
    const char* chart;
    int p, n, qdeg, box, nmax;
  };
  for (auto c : {Case{"trivial-to-N", 2, 1, 4, 2, 3}, Case{"trivial-to-N", 3, 1, 4, 2, 3}, Case{"trivial-to-N", 2, 2, 4, 2, 3},
                 Case{"identity-N", 2, 1, 4, 1, 3}, Case{"semistable", 2, 1, 4, 2, 2}, Case{"semistable", 3, 1, 4, 1, 3},
                 Case{"factor-inclusion", 3, 1, 3, 1, 2}}) {
    auto rep = verify_homotopy(build_appxb(c.p, c.n, catalog_map(c.chart), c.qdeg, c.box, c.nmax));
    o.require(rep.ok && rep.checked > 0, std::string(c.chart) + " p=" + std::to_string(c.p) + ": " + rep.failure);
  }
  for (int p : {2, 3}) {
    auto q = relfrob_qis(p, 1, 3, 1, 2);
    o.require(q.ok(), "relative Frobenius not a quasi-isomorphism at p=" + std::to_string(p));
    // Q = N over the trivial monoid: cohomology of k in degree 0 only
    o.require(q.source.free_rank == std::vector<int>{1, 0, 0}, "unexpected H table at p=" + std::to_string(p));
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  CechConfig c;
  c.mode = CechMode::Prismatic;
  c.p = 2;
  c.n = 2;
  c.depth = 2;
  c.deg_cap = 8;
  c.nmax = 1;
  auto I = build_cech(c);
  o.require(I.identities.ok && I.maps_ok, "identities: " + I.identities.failure + I.failure);
  std::vector<int> window;
  for (int a = 0; a <= 8; ++a) window.push_back(a);
  auto h0 = cech_h0_vs_window(I, window);
  o.require(h0.ok && h0.rank == 9, "H^0 mod p is not {x^a : a <= 8}");
  return o;
}

// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::pair<int, std::string> run(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

Outcome criterion12(const std::string& cli, const std::string& golden) {
  Outcome o;
  std::ifstream manifest(golden + "/commands.tsv");
  o.require(bool(manifest), "no manifest in " + golden);
  std::string line;
  int count = 0;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string file, code, args;
    std::getline(ls, file, '\t');
    std::getline(ls, code, '\t');
    std::getline(ls, args);
    auto a = run(cli + " " + args), b = run(cli + " " + args);
    o.require(a.first == std::stoi(code), file + ": exit " + std::to_string(a.first));
    o.require(a.second == b.second, file + ": output differs between runs");
    o.require(a.second == slurp(golden + "/" + file), file + ": differs from golden");
    ++count;
  }
  o.require(count > 0, "empty manifest");
  if (o.ok) o.detail = std::to_string(count) + " commands";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <logprism-cli> <golden-dir>\n";
    return 2;
  }
  const std::string cli = argv[1], golden = argv[2];
  struct Criterion {
    int id;
    std::string name;
    double budget;  // seconds, 0 = none
    std::function<Outcome()> body;
  };
  std::vector<Criterion> all = {
      {1, "delta and delta_log axioms, p in {2,3,5}, n in {2,4}", 30, criterion1},
      {2, "free delta_log ring on one generator, depth 4", 0, criterion2},
      {3, "W2 section: ring map on valid structures, 5 faults caught", 0, criterion3},
      {4, "monoid predicates vs exhaustive oracle at bound 12", 0, criterion4},
      {5, "exactification and delta_log on A'", 0, criterion5},
      {6, "q-de Rham mod [p]_q on the log line, x-degree <= 10p", 60, criterion6},
      {7, "q = 1 reduction equals classical log de Rham", 0, criterion7},
      {8, "Frobenius chain map and [p]_q factorization", 0, criterion8},
      {9, "Cartier isomorphism on the semistable node, degree <= 6p", 0, criterion9},
      {10, "cosimplicial homotopy and relative Frobenius", 0, criterion10},
      {11, "Cech nerve of the affine line, H^0 mod p", 120, criterion11},
      {12, "CLI golden outputs", 0, [&] { return criterion12(cli, golden); }},
  };
  int failed = 0;
  for (auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs > c.budget && o.ok) {
      o.ok = false;
      o.detail = "over the time budget";
    }
    failed += !o.ok;
    std::printf("criterion %2d %s  %s (%.2fs)%s%s\n", c.id, o.ok ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
