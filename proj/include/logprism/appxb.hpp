#pragma once

// The cosimplicial algebras A^n = k (x)_{Z[M]} Z[Q + G^n], the projection to
// the Q^(1) part, the homotopy to the identity, and the relative Frobenius
// comparison on windows.  k = Z/p^n with M^+ acting by zero.

#include <random>

#include "homalg.hpp"
#include "monoids.hpp"

namespace logprism {

// Linear combination of basis tuples (q, g_1, ..., g_n); G coordinates come
// from the cokernel functionals.
using BElem = std::map<IVec, int64_t>;

struct HomotopyFault {
  int level = 1;
  int j = 1;  // flipped decision in h^level(alpha_j)
};

struct AppxBData {
  int p = 2, n = 1;
  std::string chart;
  MonoidMap h;
  CokernelGrading G;
  int r = 0;         // rank of G
  int kq = 0;        // rank of the ambient lattice of Q
  Monoid image;      // Im(Q^(1) -> Q) = p Q + h(M)
  std::vector<IVec> qwin;
  int gbox = 1;
  int nmax = 3;
  std::optional<HomotopyFault> fault;

  int64_t mod() const { return ipow(p, n); }
};

inline void belem_add(BElem& a, const IVec& k, int64_t c, int64_t m) {
  c = mod_norm(c, m);
  if (!c) return;
  auto it = a.find(k);
  if (it == a.end()) {
    a.emplace(k, c);
  } else {
    it->second = (it->second + c) % m;
    if (!it->second) a.erase(it);
  }
}

inline IVec key_q(const AppxBData& D, const IVec& k) { return IVec(k.begin(), k.begin() + D.kq); }
inline IVec key_g(const AppxBData& D, const IVec& k, int i) {  // i = 1..n
  auto b = k.begin() + D.kq + (i - 1) * D.r;
  return IVec(b, b + D.r);
}
inline int key_level(const AppxBData& D, const IVec& k) { return D.r ? int(k.size() - size_t(D.kq)) / D.r : 0; }

inline IVec make_key(const IVec& q, const std::vector<IVec>& gs) {
  IVec k = q;
  for (auto& g : gs) k.insert(k.end(), g.begin(), g.end());
  return k;
}

// Is q zero in k (x)_{Z[M]} Z[Q], i.e. q in h(M^+) + Q?
inline bool killed_by_M(const AppxBData& D, const IVec& q) {
  for (auto& m : D.h.src.gens)
    if (member(D.h.dst, vsub(q, D.h(m)), 64).verdict == Verdict::True) return true;
  return false;
}

inline AppxBData build_appxb(int p, int n, const NamedMap& chart, int qdeg, int gbox, int nmax) {
  AppxBData D;
  D.p = p;
  D.n = n;
  D.chart = chart.name;
  D.h = chart.map;
  if (!injective_on_groups(D.h)) throw Error("NotInjective", chart.name + " is not injective on groups");
  D.G = cokernel_grading(D.h);
  D.r = D.G.rank();
  D.kq = D.h.dst.rank;
  D.gbox = gbox;
  D.nmax = nmax;
  std::vector<IVec> ig, iu;
  for (auto& g : D.h.dst.gens) ig.push_back(vscale(p, g));
  for (auto& u : D.h.dst.units) iu.push_back(vscale(p, u));
  for (auto& g : D.h.src.gens) ig.push_back(D.h(g));
  for (auto& u : D.h.src.units) iu.push_back(D.h(u));
  D.image = make_monoid(D.kq, ig, iu);
  // window of Q modulo units of k[Q]'s M-action: graded part or a box for groups
  std::vector<IVec> cand;
  if (auto phi = positive_grading(D.h.dst); phi && D.h.dst.units.empty()) {
    cand = elements_up_to(D.h.dst, *phi, qdeg);
  } else {
    for (auto& v : lattice_box(Lattice(D.kq, [&] {
                                 std::vector<IVec> all = D.h.dst.gens;
                                 all.insert(all.end(), D.h.dst.units.begin(), D.h.dst.units.end());
                                 return all;
                               }()),
                               qdeg))
      if (member(D.h.dst, v, 64).verdict == Verdict::True) cand.push_back(v);
  }
  for (auto& q : cand)
    if (!killed_by_M(D, q)) D.qwin.push_back(q);
  return D;
}

inline std::vector<IVec> g_box(int r, int B) {
  std::vector<IVec> out;
  IVec g(size_t(r), -B);
  while (true) {
    out.push_back(g);
    int i = 0;
    while (i < r && ++g[size_t(i)] > B) g[size_t(i++)] = -B;
    if (i == r) break;
  }
  return out;
}

// Window basis of A^n: q in the window, each g_i in the box.
inline std::vector<IVec> appxb_basis(const AppxBData& D, int lvl) {
  std::vector<IVec> out;
  auto box = g_box(D.r, D.gbox);
  std::vector<IVec> gs(static_cast<size_t>(lvl));
  std::function<void(const IVec&, int)> rec = [&](const IVec& q, int i) {
    if (i == lvl) {
      out.push_back(make_key(q, gs));
      return;
    }
    for (auto& g : box) {
      gs[size_t(i)] = g;
      rec(q, i + 1);
    }
  };
  for (auto& q : D.qwin) rec(q, 0);
  return out;
}

inline BElem appxb_face(const AppxBData& D, int lvl, int j, const BElem& a) {
  BElem out;
  for (auto& [k, c] : a) {
    IVec q = key_q(D, k);
    std::vector<IVec> gs;
    for (int i = 1; i <= lvl; ++i) gs.push_back(key_g(D, k, i));
    if (j == 0) {
      IVec g0 = D.G(q);
      for (auto& g : gs) g0 = vsub(g0, g);
      gs.insert(gs.begin(), g0);
    } else {
      gs.insert(gs.begin() + (j - 1), IVec(size_t(D.r), 0));
    }
    belem_add(out, make_key(q, gs), c, D.mod());
  }
  return out;
}

inline BElem appxb_degeneracy(const AppxBData& D, int lvl, int j, const BElem& a) {
  BElem out;
  for (auto& [k, c] : a) {
    IVec q = key_q(D, k);
    std::vector<IVec> gs;
    for (int i = 1; i <= lvl; ++i) gs.push_back(key_g(D, k, i));
    if (j == 0) {
      gs.erase(gs.begin());
    } else {
      gs[size_t(j - 1)] = vadd(gs[size_t(j - 1)], gs[size_t(j)]);
      gs.erase(gs.begin() + j);
    }
    belem_add(out, make_key(q, gs), c, D.mod());
  }
  return out;
}

inline Cosimplicial<BElem> appxb_cosimplicial(const AppxBData& D) {
  Cosimplicial<BElem> C;
  C.nmax = D.nmax;
  C.generators = [&D](int lvl) {
    std::vector<BElem> out;
    for (auto& k : appxb_basis(D, lvl)) out.push_back(BElem{{k, 1 % D.mod()}});
    return out;
  };
  C.face = [&D](int lvl, int j, const BElem& a) { return appxb_face(D, lvl, j, a); };
  C.degeneracy = [&D](int lvl, int j, const BElem& a) { return appxb_degeneracy(D, lvl, j, a); };
  C.equal = [](const BElem& a, const BElem& b) { return a == b; };
  return C;
}

inline bool in_q1(const AppxBData& D, const IVec& q) {
  auto v = member(D.image, q, 64).verdict;
  if (v == Verdict::Unknown) throw Error("WindowNotStable", "Q^(1) membership undecided at " + vec_string(q));
  return v == Verdict::True;
}

inline BElem projection_pr(const AppxBData& D, const BElem& a) {
  BElem out;
  for (auto& [k, c] : a)
    if (in_q1(D, key_q(D, k))) out.emplace(k, c);
  return out;
}

// Im(G^(1) -> G) is p G in the functional coordinates.
inline bool in_pG(const AppxBData& D, const IVec& g) {
  for (auto v : g)
    if (v % D.p) return false;
  return true;
}

inline BElem homotopy_h(const AppxBData& D, int lvl, int j, const BElem& a) {
  if (j == 0) return projection_pr(D, a);
  if (j == lvl + 1) return a;
  BElem out;
  for (auto& [k, c] : a) {
    IVec s(size_t(D.r), 0);
    for (int i = j; i <= lvl; ++i) s = vadd(s, key_g(D, k, i));
    bool keep = in_pG(D, s);
    if (D.fault && D.fault->level == lvl && D.fault->j == j) keep = !keep;
    if (keep) out.emplace(k, c);
  }
  return out;
}

// Product in A^n (zero when q lands in h(M^+) + Q).
inline BElem appxb_mul(const AppxBData& D, const BElem& a, const BElem& b) {
  BElem out;
  for (auto& [ka, ca] : a)
    for (auto& [kb, cb] : b) {
      IVec k = vadd(ka, kb);
      if (killed_by_M(D, key_q(D, k))) continue;
      belem_add(out, k, mul_mod(ca, cb, D.mod()), D.mod());
    }
  return out;
}

struct HomotopyReport {
  bool ok = true;
  std::string failure;
  int checked = 0;
  IdentityReport cosimplicial;
  bool pr_linear = true, pr_section = true, h_linear = true;
};

// Simplicial homotopy identities for h, plus the endpoint components and the
// linearity of pr (over B^n) and of h (over A^{n(1)}) on window products.
inline HomotopyReport verify_homotopy(const AppxBData& D, uint64_t seed = 7) {
  HomotopyReport rep;
  auto fail = [&](const std::string& s) {
    if (rep.ok) rep.failure = s;
    rep.ok = false;
  };
  rep.cosimplicial = check_cosimplicial_identities(appxb_cosimplicial(D));
  if (!rep.cosimplicial.ok) fail("cosimplicial " + rep.cosimplicial.failure);
  auto tag = [](const char* what, int lvl, int i, int j, const IVec& k) {
    return std::string(what) + " n=" + std::to_string(lvl) + " i=" + std::to_string(i) + " j=" + std::to_string(j) + " at " +
           vec_string(k);
  };
  for (int lvl = 0; lvl <= D.nmax && rep.ok; ++lvl)
    for (auto& k : appxb_basis(D, lvl)) {
      BElem a{{k, 1 % D.mod()}};
      ++rep.checked;
      if (!(homotopy_h(D, lvl, 0, a) == projection_pr(D, a)) || !(homotopy_h(D, lvl, lvl + 1, a) == a))
        fail(tag("endpoint", lvl, 0, 0, k));
      if (lvl + 1 <= D.nmax)
        for (int i = 0; i <= lvl + 1; ++i)
          for (int j = 0; j <= lvl + 2; ++j) {
            ++rep.checked;
            BElem lhs = homotopy_h(D, lvl + 1, j, appxb_face(D, lvl, i, a));
            BElem rhs = appxb_face(D, lvl, i, homotopy_h(D, lvl, i < j ? j - 1 : j, a));
            if (!(lhs == rhs)) fail(tag("h-face", lvl, i, j, k));
          }
      if (lvl >= 1)
        for (int i = 0; i < lvl; ++i)
          for (int j = 0; j <= lvl; ++j) {
            ++rep.checked;
            BElem lhs = homotopy_h(D, lvl - 1, j, appxb_degeneracy(D, lvl, i, a));
            BElem rhs = appxb_degeneracy(D, lvl, i, homotopy_h(D, lvl, i < j ? j + 1 : j, a));
            if (!(lhs == rhs)) fail(tag("h-degeneracy", lvl, i, j, k));
          }
      if (!rep.ok) break;
    }
  // linearity on random products
  std::mt19937_64 rng(seed);
  auto box = g_box(D.r, D.gbox);
  for (int lvl = 0; lvl <= std::min(D.nmax, 2); ++lvl) {
    auto basis = appxb_basis(D, lvl);
    if (basis.empty()) continue;
    std::vector<IVec> q1;
    for (auto& q : D.qwin)
      if (in_q1(D, q)) q1.push_back(q);
    for (int t = 0; t < 40; ++t) {
      BElem a;
      for (int s = 0; s < 3; ++s) belem_add(a, basis[rng() % basis.size()], int64_t(rng() % 7) + 1, D.mod());
      // b in B^n: q in Q^(1), arbitrary g; b1 in A^{n(1)}: q in Q^(1), g in pG
      std::vector<IVec> gs, gp;
      for (int i = 0; i < lvl; ++i) {
        gs.push_back(box[rng() % box.size()]);
        gp.push_back(vscale(D.p, box[rng() % box.size()]));
      }
      IVec qb = q1[rng() % q1.size()];
      BElem b{{make_key(qb, gs), 1 % D.mod()}}, b1{{make_key(qb, gp), 1 % D.mod()}};
      ++rep.checked;
      if (!(projection_pr(D, appxb_mul(D, b, a)) == appxb_mul(D, b, projection_pr(D, a)))) {
        rep.pr_linear = false;
        fail("pr not B-linear at n=" + std::to_string(lvl));
      }
      for (int j = 0; j <= lvl + 1; ++j)
        if (!(homotopy_h(D, lvl, j, appxb_mul(D, b1, a)) == appxb_mul(D, b1, homotopy_h(D, lvl, j, a)))) {
          rep.h_linear = false;
          fail("h not A^(1)-linear at n=" + std::to_string(lvl) + " j=" + std::to_string(j));
        }
    }
    for (auto& k : basis)
      if (in_q1(D, key_q(D, k))) {
        BElem e{{k, 1 % D.mod()}};
        if (!(projection_pr(D, e) == e)) {
          rep.pr_section = false;
          fail("pr is not a section at " + vec_string(k));
        }
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Relative Frobenius for Q = N over trivial M: in the coordinates
// (g_0, ..., g_n) with g_0 + ... + g_n = q every face inserts a zero and the
// box |g_i| <= B is a subobject.  The module is A^{(1)} itself, and
// A (x)_{A^(1)} A^(1) = A, the comparison map multiplying all coordinates by p.

struct QisTable {
  std::vector<int> free_rank;
  std::vector<std::vector<int>> torsion;
  friend bool operator==(const QisTable& a, const QisTable& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
  }
};

struct QisReport {
  int p = 2, n = 1, qmax = 0, box = 0, degree_max = 0;
  QisTable source, target;
  std::vector<Mat> induced;  // H^i(M) -> H^i(A (x) M) in representative bases
  bool tables_equal = false;
  bool induced_iso = false;
  bool ok() const { return tables_equal && induced_iso; }
};

struct SymLevels {
  std::vector<std::vector<IVec>> basis;  // per level: (q, g_0, ..., g_n)
  std::vector<std::map<IVec, int>> index;
};

inline SymLevels symmetric_levels(int qmax, int B, int levels, bool zero_module) {
  SymLevels L;
  for (int lvl = 0; lvl < levels; ++lvl) {
    std::vector<IVec> out;
    if (!zero_module)
      for (int q = 0; q <= qmax; ++q) {
        IVec g(size_t(lvl + 1), -B);
        while (true) {
          int64_t s = 0;
          for (auto v : g) s += v;
          if (s == q) {
            IVec k{q};
            k.insert(k.end(), g.begin(), g.end());
            out.push_back(k);
          }
          int i = 0;
          while (i <= lvl && ++g[size_t(i)] > B) g[size_t(i++)] = -B;
          if (i > lvl) break;
        }
      }
    std::map<IVec, int> idx;
    for (size_t i = 0; i < out.size(); ++i) idx[out[i]] = int(i);
    L.basis.push_back(out);
    L.index.push_back(idx);
  }
  return L;
}

inline CochainComplex symmetric_complex(const SymLevels& L, int p, int n) {
  std::vector<std::vector<std::string>> bases;
  std::vector<std::vector<SparseMat>> faces;
  for (size_t lvl = 0; lvl < L.basis.size(); ++lvl) {
    std::vector<std::string> lab;
    for (auto& k : L.basis[lvl]) lab.push_back(vec_string(k));
    bases.push_back(lab);
  }
  for (size_t lvl = 0; lvl + 1 < L.basis.size(); ++lvl) {
    std::vector<SparseMat> fs;
    for (size_t j = 0; j <= lvl + 1; ++j) {
      SparseMat F(int(L.basis[lvl + 1].size()), int(L.basis[lvl].size()), ipow(p, n));
      for (size_t c = 0; c < L.basis[lvl].size(); ++c) {
        IVec k = L.basis[lvl][c];
        k.insert(k.begin() + 1 + long(j), 0);
        F.add(L.index[lvl + 1].at(k), int(c), 1);
      }
      fs.push_back(F);
    }
    faces.push_back(fs);
  }
  return associated_complex(p, n, bases, faces);
}

inline QisTable qis_table(const std::vector<Cohomology>& H) {
  QisTable t;
  for (auto& h : H) {
    t.free_rank.push_back(h.free_rank);
    t.torsion.push_back(h.torsion);
  }
  return t;
}

inline QisReport relfrob_qis(int p, int n, int qmax1, int box1, int degree_max, bool zero_module = false) {
  QisReport rep;
  rep.p = p;
  rep.n = n;
  rep.qmax = qmax1;
  rep.box = box1;
  rep.degree_max = degree_max;
  const int levels = degree_max + 2;
  SymLevels S = symmetric_levels(qmax1, box1, levels, zero_module);
  SymLevels T = symmetric_levels(p * qmax1, p * box1, levels, zero_module);
  CochainComplex XS = symmetric_complex(S, p, n), XT = symmetric_complex(T, p, n);
  std::vector<Cohomology> HS, HT;
  for (int i = 0; i <= degree_max; ++i) {
    HS.push_back(cohomology(XS, i));
    HT.push_back(cohomology(XT, i));
  }
  rep.source = qis_table(HS);
  rep.target = qis_table(HT);
  rep.tables_equal = rep.source == rep.target;
  rep.induced_iso = rep.tables_equal;
  for (int i = 0; i <= degree_max; ++i) {
    SparseMat f(int(T.basis[size_t(i)].size()), int(S.basis[size_t(i)].size()), ipow(p, n));
    for (size_t c = 0; c < S.basis[size_t(i)].size(); ++c)
      f.add(T.index[size_t(i)].at(vscale(p, S.basis[size_t(i)][c])), int(c), 1);
    auto M = induced_map(XS, HS[size_t(i)], XT, HT[size_t(i)], f);
    if (!M) {
      rep.induced_iso = false;
      continue;
    }
    rep.induced.push_back(*M);
    if (M->rows != M->cols) {
      rep.induced_iso = false;
      continue;
    }
    auto ed = elementary_divisors(*M);
    if (int(ed.size()) != M->rows) rep.induced_iso = false;
    for (int v : ed)
      if (v != 0) rep.induced_iso = false;
  }
  return rep;
}

}  // namespace logprism
