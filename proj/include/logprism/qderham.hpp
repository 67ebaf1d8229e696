#pragma once

// Log q-de Rham complexes on monomial charts and on the unit-point q-PD
// envelope, their specializations, Frobenius, and char p / Hodge-Tate checks.

#include "homalg.hpp"
#include "monoids.hpp"
#include "prisms.hpp"
#include "qpoly.hpp"

namespace logprism {

// A log chart over the q-base: the ring is spanned by monomials in `gens`
// (minus those divisible by a killed pattern), and X_s acts through the
// integer coordinates <s, gen>.
struct QChart {
  std::string name;
  std::string monoid_map;  // catalog chart, when there is one
  std::vector<std::string> gens;
  std::vector<IVec> coords;  // per generator, one entry per s
  std::vector<std::string> s_names;
  std::vector<int> weights;
  std::vector<IVec> killed;
  std::string description;

  int rank_s() const { return int(s_names.size()); }
};

inline std::vector<QChart> q_chart_catalog() {
  return {
      {"log-affine-line", "trivial-to-N", {"x"}, {{1}}, {"x"}, {1}, {}, "Z_p[[q-1]][x], log structure N -> x"},
      {"semistable-node", "semistable", {"x", "y"}, {{1}, {-1}}, {"x"}, {1, 1}, {{1, 1}},
       "Z_p[[q-1]][x,y]/(xy) relative to N -> 0, chart N -> N^2 diagonal"},
      {"log-plane", "identity-N2", {"x", "y"}, {{1, 0}, {0, 1}}, {"x", "y"}, {1, 1}, {}, "Z_p[[q-1]][x,y] with log N^2"},
      {"empty-S", "", {"x"}, {{}}, {}, {1}, {}, "no log coordinates: complex in degree 0"},
  };
}

inline const QChart& q_chart(const std::string& name) {
  static const auto cat = q_chart_catalog();
  for (auto& c : cat)
    if (c.name == name) return c;
  throw Error("UnknownInstance", name);
}

inline Ring chart_ring(const QChart& C, int p, int n, int cap) {
  std::vector<Var> vars;
  for (auto& g : C.gens) vars.push_back({g, VarKind::Poly});
  return make_ring(p, n, vars, {{"deg", C.weights, cap}});
}

inline std::string mono_label(const Ring& R, const Mono& m) {
  std::string s = RingElem::zero(R).mono_string(m);
  return s.empty() ? "1" : s;
}

inline std::vector<Mono> chart_basis(const QChart& C, const Ring& R) {
  std::vector<int> vars(C.gens.size());
  std::iota(vars.begin(), vars.end(), 0);
  std::vector<Mono> out;
  for (auto& m : window_monomials(R, vars, {R->trunc.gradings[0].cap})) {
    bool dead = false;
    for (auto& k : C.killed) {
      bool div = true;
      for (size_t i = 0; i < k.size(); ++i) div = div && m[i] >= k[i];
      dead = dead || div;
    }
    if (!dead) out.push_back(m);
  }
  return out;
}

inline int64_t s_coord(const QChart& C, const Mono& m, int s) {
  int64_t v = 0;
  for (size_t i = 0; i < C.gens.size(); ++i) v += int64_t(m[i]) * C.coords[i][size_t(s)];
  return v;
}

// Complex over Z[q^{+-1}] with a fixed degree-0 basis and Koszul layout.
struct QComplex {
  std::string name;
  std::vector<std::string> basis;
  std::vector<std::string> op_labels;
  std::vector<QMat> ops;     // nabla_s on the degree-0 basis
  std::vector<QMat> gammas;  // gamma_s on the degree-0 basis
  std::vector<std::vector<std::string>> labels;
  std::vector<QMat> d;
  std::vector<std::vector<unsigned>> subsets;  // exterior basis per degree

  int length() const { return int(labels.size()); }
};

inline QComplex q_koszul(const std::string& name, const std::vector<std::string>& basis, const std::vector<QMat>& ops,
                         const std::vector<std::string>& op_labels) {
  const int r = int(ops.size()), N = int(basis.size());
  for (int s = 0; s < r; ++s)
    for (int t = s + 1; t < r; ++t)
      if (!(ops[size_t(s)] * ops[size_t(t)] == ops[size_t(t)] * ops[size_t(s)]))
        throw Error("NotCommuting", op_labels[size_t(s)] + " and " + op_labels[size_t(t)]);
  QComplex X;
  X.name = name;
  X.basis = basis;
  X.op_labels = op_labels;
  X.ops = ops;
  X.subsets.resize(size_t(r + 1));
  for (unsigned S = 0; S < (1u << r); ++S) X.subsets[size_t(__builtin_popcount(S))].push_back(S);
  for (int i = 0; i <= r; ++i) {
    std::vector<std::string> lab;
    for (unsigned S : X.subsets[size_t(i)]) {
      std::string w;
      for (int s = 0; s < r; ++s)
        if (S >> s & 1) w += (w.empty() ? "" : "^") + op_labels[size_t(s)];
      for (auto& b : basis) lab.push_back(i == 0 ? b : b + " " + w);
    }
    X.labels.push_back(lab);
  }
  for (int i = 0; i < r; ++i) {
    std::map<unsigned, int> pos;
    for (size_t k = 0; k < X.subsets[size_t(i + 1)].size(); ++k) pos[X.subsets[size_t(i + 1)][k]] = int(k);
    QMat D(int(X.subsets[size_t(i + 1)].size()) * N, int(X.subsets[size_t(i)].size()) * N);
    for (size_t k = 0; k < X.subsets[size_t(i)].size(); ++k) {
      unsigned S = X.subsets[size_t(i)][k];
      for (int s = 0; s < r; ++s) {
        if (S >> s & 1) continue;
        const int64_t sign = (__builtin_popcount(S & ((1u << s) - 1)) % 2) ? -1 : 1;
        const int row0 = pos.at(S | (1u << s)) * N;
        for (int b = 0; b < N; ++b)
          for (auto& [i2, v] : ops[size_t(s)].col[size_t(b)]) D.add(row0 + i2, int(k) * N + b, combine({}, v, sign));
      }
    }
    X.d.push_back(D);
  }
  return X;
}

inline bool q_d_squared_zero(const QComplex& X) {
  for (size_t i = 0; i + 1 < X.d.size(); ++i)
    if (!(X.d[i + 1] * X.d[i]).is_zero()) return false;
  return true;
}

// nabla_s = diag [<s,n>]_q, gamma_s = diag q^{<s,n>}; (q-1) nabla_s = gamma_s - 1
// is checked entrywise.
inline QComplex build_log_qdr(const QChart& C, int p, int cap) {
  Ring R = chart_ring(C, p, 1, cap);
  auto B = chart_basis(C, R);
  std::vector<std::string> basis;
  for (auto& m : B) basis.push_back(mono_label(R, m));
  std::vector<QMat> ops, gammas;
  std::vector<std::string> labels;
  const QPoly qm1 = QPoly::monomial(1) - QPoly::constant(1);
  for (int s = 0; s < C.rank_s(); ++s) {
    QMat nab(int(B.size()), int(B.size())), gam(int(B.size()), int(B.size()));
    for (size_t k = 0; k < B.size(); ++k) {
      const int64_t a = s_coord(C, B[k], s);
      nab.add(int(k), int(k), q_int(a));
      gam.add(int(k), int(k), QPoly::monomial(int(a)));
      if (!(qm1 * q_int(a) == QPoly::monomial(int(a)) - QPoly::constant(1)))
        throw Error("ExtensionFailure", "gamma_s - 1 is not (q-1) nabla_s at " + basis[k]);
    }
    ops.push_back(nab);
    gammas.push_back(gam);
    labels.push_back("dlog " + C.s_names[size_t(s)]);
  }
  for (size_t s = 0; s < gammas.size(); ++s)
    for (size_t t = s + 1; t < gammas.size(); ++t)
      if (!(gammas[s] * gammas[t] == gammas[t] * gammas[s])) throw Error("NotCommuting", "gamma operators");
  QComplex X = q_koszul(C.name, basis, ops, labels);
  X.gammas = gammas;
  return X;
}

// gamma_s on the q-divided powers: u -> q u, i.e. P_k(u) -> P_k(q u).
inline FElem qpd_gamma_s(const QPDSpace& S, const FElem& a) {
  UPoly U = S.to_upoly(a);
  for (size_t j = 0; j < U.size(); ++j) U[j] = U[j] * QRat::from(QPoly::monomial(int(j)));
  return S.from_upoly(U);
}

// The envelope complex F -> F dlog u on g_0..g_K.  nabla is derived from
// gamma_s through the rewrite u = 1 + z and must reproduce
// nabla g_k = [k]_q g_k + q^{k-1} g_{k-1}; gamma_s must preserve F on the
// adjoined generators.
inline QComplex build_log_qdr_envelope(const QPDEnvelope& E) {
  const QPDSpace& S = E.space;
  const int K = E.K;
  QMat nab(K + 1, K + 1), gam(K + 1, K + 1);
  for (int k = 0; k <= K; ++k) {
    FElem g = qpd_gamma_s(S, S.basis(k));
    FElem diff = S.add(g, S.basis(k), -1);
    for (int j = 0; j <= K; ++j) {
      if (!g[size_t(j)].is_zero()) {
        auto gp = g[size_t(j)].as_poly();
        if (!gp) throw Error("ExtensionFailure", "gamma_s(" + qpd_label(k) + ") leaves Z[q]-span");
        gam.add(j, k, *gp);
      }
      if (diff[size_t(j)].is_zero()) continue;
      auto c = divide_by_cyc(diff[size_t(j)], {{1, 1}}).as_poly();
      if (!c) throw Error("ExtensionFailure", "gamma_s - 1 not divisible by q - 1 on " + qpd_label(k));
      nab.add(j, k, *c);
    }
    QMat expect(K + 1, 1);
    expect.add(k, 0, q_int(k));
    if (k) expect.add(k - 1, 0, QPoly::monomial(k - 1));
    for (int j = 0; j <= K; ++j)
      if (!(nab.at(j, k) == expect.at(j, 0)))
        throw Error("ExtensionFailure", "nabla(" + qpd_label(k) + ") at " + qpd_label(j) + ": " + nab.at(j, k).to_string());
  }
  for (size_t i = 0; i < E.gammas.size(); ++i)
    if (!S.in_F(qpd_gamma_s(S, E.gammas[i])))
      throw Error("ExtensionFailure", "gamma_s does not preserve F on " + E.adjoined[i].name);
  QComplex X = q_koszul("unit-point-envelope", E.basis, {nab}, {"dlog u"});
  X.gammas = {gam};
  return X;
}

// Base change of a q-complex to Lambda: each basis element b gives b (x) t^j.
inline CochainComplex specialize(const QComplex& X, const Lambda& L) {
  CochainComplex Y;
  Y.p = L.p;
  Y.n = L.n;
  for (auto& lab : X.labels) {
    std::vector<std::string> out;
    for (auto& b : lab)
      for (int j = 0; j < L.dim; ++j) out.push_back(L.dim == 1 ? b : b + " [" + L.basis_label(j) + "]");
    Y.labels.push_back(out);
  }
  for (auto& D : X.d) {
    SparseMat S(D.rows * L.dim, D.cols * L.dim, L.mod());
    for (int k = 0; k < D.cols; ++k)
      for (auto& [i, a] : D.col[size_t(k)]) {
        Mat M = L.mult_matrix(a);
        for (int r = 0; r < L.dim; ++r)
          for (int c = 0; c < L.dim; ++c) S.add(i * L.dim + r, k * L.dim + c, M.at(r, c));
      }
    Y.d.push_back(S);
  }
  return Y;
}

inline CochainComplex reduce_q_to_1(const QComplex& X, int p, int n) { return specialize(X, lambda_point(p, n)); }

// Classical log de Rham complex of a chart, from d(x_i) = x_i sum_s c_is dlog s
// and the Leibniz rule in the ring.
inline CochainComplex classical_log_dr(const QChart& C, int p, int n, int cap) {
  Ring R = chart_ring(C, p, n, cap);
  auto B = chart_basis(C, R);
  std::map<Mono, int> idx;
  std::vector<std::string> basis;
  for (size_t k = 0; k < B.size(); ++k) {
    idx[B[k]] = int(k);
    basis.push_back(mono_label(R, B[k]));
  }
  const int r = C.rank_s();
  std::vector<SparseMat> ops(size_t(r), SparseMat(int(B.size()), int(B.size()), ipow(p, n)));
  for (size_t k = 0; k < B.size(); ++k) {
    RingElem f = RingElem::constant(R, 1);
    std::vector<RingElem> df(size_t(r), RingElem::zero(R));
    for (size_t i = 0; i < C.gens.size(); ++i)
      for (int e = 0; e < B[k][i]; ++e) {
        RingElem x = RingElem::var(R, int(i));
        for (int s = 0; s < r; ++s) df[size_t(s)] = df[size_t(s)] * x + (f * x).scale(C.coords[i][size_t(s)]);
        f = f * x;
      }
    for (int s = 0; s < r; ++s)
      for (auto& [m, c] : df[size_t(s)].terms()) ops[size_t(s)].add(idx.at(m), int(k), c);
  }
  std::vector<std::string> labels;
  for (auto& s : C.s_names) labels.push_back("dlog " + s);
  return koszul_complex(p, n, basis, ops, labels);
}

// Classical de Rham complex of the PD envelope Z/p^n<z>, z = u - 1:
// d g_k(z) = g_{k-1}(z) dz = g_{k-1}(z) (1 + z) dlog u.
inline CochainComplex classical_pd_dr(int p, int n, int K) {
  Ring R = pd_line(p, n, K);
  std::vector<std::string> basis;
  std::map<Mono, int> idx;
  for (int k = 0; k <= K; ++k) {
    Mono m = mono_zero();
    m[0] = int16_t(k);
    idx[m] = k;
    basis.push_back(mono_label(R, m));
  }
  SparseMat op(K + 1, K + 1, ipow(p, n));
  RingElem onez = RingElem::constant(R, 1) + RingElem::var(R, "z");
  for (int k = 1; k <= K; ++k) {
    RingElem dk = RingElem::var(R, "z", k - 1) * onez;
    for (auto& [m, c] : dk.terms()) op.add(idx.at(m), k, c);
  }
  return koszul_complex(p, n, basis, {op}, {"dlog u"});
}

inline bool same_complex(const CochainComplex& a, const CochainComplex& b, std::string* why = nullptr) {
  auto say = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (a.p != b.p || a.n != b.n || a.lo != b.lo) return say("coefficients");
  if (a.labels != b.labels) return say("labels");
  if (a.d.size() != b.d.size()) return say("length");
  for (size_t i = 0; i < a.d.size(); ++i)
    if (!(a.d[i] == b.d[i])) return say("differential " + std::to_string(i));
  return true;
}

// ---------------------------------------------------------------------------
// Frobenius on charts with phi(x_i) = x_i^p and phi(q) = q^p, over
// Lambda = Z/p^n[t]/t^{tcap+1}: degree i multiplies the dlog labels by [p]_q^i.

struct FrobeniusCheck {
  CochainComplex src, tgt;
  std::vector<SparseMat> map;
  bool labels_scaled = true;  // Phi(b dlog S) = [p]_q^{|S|} phi(b) dlog S
  bool chain_map = false;
  bool factors = false;
  std::vector<Mat> factorization;  // Phi^i = [p]_q^i Y^i
};

inline std::vector<Mat> multiplication_by(const CochainComplex& X, const Lambda& L, const QPoly& f) {
  Mat B = L.mult_matrix(f);
  std::vector<Mat> out;
  for (int i = 0; i < X.length(); ++i) {
    const int N = X.dim(X.lo + i);
    Mat M(N, N, L.p, L.n);
    for (int blk = 0; blk < N / L.dim; ++blk)
      for (int r = 0; r < L.dim; ++r)
        for (int c = 0; c < L.dim; ++c) M.at(blk * L.dim + r, blk * L.dim + c) = B.at(r, c);
    out.push_back(M);
  }
  return out;
}

inline Mat sparse_to_dense(const SparseMat& S, int p, int n) {
  std::vector<int> rr(size_t(S.rows)), cc(size_t(S.cols));
  std::iota(rr.begin(), rr.end(), 0);
  std::iota(cc.begin(), cc.end(), 0);
  return to_dense(S, rr, cc, p, n);
}

inline FrobeniusCheck frobenius_chain_map(const QChart& C, int p, int n, int cap, int tcap) {
  FrobeniusCheck F;
  Lambda L = lambda_trunc(p, n, tcap);
  QComplex Xs = build_log_qdr(C, p, cap / p), Xt = build_log_qdr(C, p, cap);
  F.src = specialize(Xs, L);
  F.tgt = specialize(Xt, L);
  Ring Rs = chart_ring(C, p, 1, cap / p), Rt = chart_ring(C, p, 1, cap);
  auto Bs = chart_basis(C, Rs), Bt = chart_basis(C, Rt);
  std::map<Mono, int> ti;
  for (size_t k = 0; k < Bt.size(); ++k) ti[Bt[k]] = int(k);
  const int Ns = int(Bs.size()), Nt = int(Bt.size());
  const QPoly phit = QPoly::monomial(p) - QPoly::constant(1);  // phi(t) = q^p - 1
  const QPoly pq = q_int(p);
  for (int i = 0; i < Xs.length(); ++i) {
    const int nsub = int(Xs.subsets[size_t(i)].size());
    SparseMat M(nsub * Nt * L.dim, nsub * Ns * L.dim, L.mod());
    const QPoly scale = qpow(pq, i);
    for (int sub = 0; sub < nsub; ++sub)
      for (int b = 0; b < Ns; ++b) {
        Mono pm = Bs[size_t(b)];
        for (auto& e : pm) e = int16_t(e * p);
        auto it = ti.find(pm);
        if (it == ti.end()) throw Error("WindowOverflow", "phi leaves the target window");
        const int row0 = (sub * Nt + it->second) * L.dim, col0 = (sub * Ns + b) * L.dim;
        for (int j = 0; j < L.dim; ++j) {
          auto v = L.from_q(qpow(phit, j) * scale);
          for (int r = 0; r < L.dim; ++r) M.add(row0 + r, col0 + j, v[size_t(r)]);
        }
      }
    F.map.push_back(M);
  }
  // labels: the image of b dlog S in the label of phi(b) dlog S, scaled by [p]_q^i
  for (int i = 0; i < Xs.length() && F.labels_scaled; ++i) {
    auto want = L.from_q(qpow(pq, i));
    for (int b = 0; b < Ns; ++b) {
      Mono pm = Bs[size_t(b)];
      for (auto& e : pm) e = int16_t(e * p);
      const int row0 = ti.at(pm) * L.dim;
      for (int r = 0; r < L.dim; ++r)
        if (F.map[size_t(i)].at(row0 + r, b * L.dim) != want[size_t(r)]) F.labels_scaled = false;
    }
  }
  F.chain_map = is_chain_map(F.src, F.tgt, F.map);
  std::vector<Mat> Phi;
  for (auto& M : F.map) Phi.push_back(sparse_to_dense(M, p, n));
  auto Y = factor_through_eta(F.tgt, multiplication_by(F.tgt, L, pq), Phi);
  F.factors = Y.has_value();
  if (Y) F.factorization = *Y;
  return F;
}

// ---------------------------------------------------------------------------
// Cohomology per monomial: ranks of the complex mod [p]_q against the
// Frobenius-twisted differential forms.

struct RankRow {
  std::string monomial;
  int degree = 0;
  int computed = 0;  // pieces of full order p^n
  int torsion = 0;   // pieces of smaller order
  int expected = 0;
  bool match() const { return computed == expected && torsion == 0; }
};

struct HodgeTateReport {
  std::string instance;
  int p = 2, n = 1, cap = 0;
  std::string lambda;
  std::vector<RankRow> rows;
  bool ranks_ok = true;
  // Bockstein vs de Rham: on H^0 at a monomial n with all <s,n> = p b_s the
  // Bockstein is multiplication by b (one log coordinate); elementary divisors
  // must be v_p(b) repeated dim Lambda times
  bool bockstein_checked = false;
  bool bockstein_ok = true;
  std::string failure;
};

inline int64_t binom_small(int r, int i) { return int64_t(binom_exact(r, i)); }

inline std::vector<int> rep_monomial(const SparseVec& v, int N, int dim) {
  std::set<int> ms;
  for (auto& [j, c] : v) ms.insert((j / dim) % N);
  return {ms.begin(), ms.end()};
}

inline HodgeTateReport hodge_tate_ranks(const QChart& C, int p, int n, int cap, bool with_bockstein = true) {
  HodgeTateReport rep;
  rep.instance = C.name;
  rep.p = p;
  rep.n = n;
  rep.cap = cap;
  auto fail = [&](const std::string& s) {
    if (rep.failure.empty()) rep.failure = s;
  };
  Lambda L1 = lambda_mod_pq(p, n, 1);
  rep.lambda = L1.name;
  QComplex Xq = build_log_qdr(C, p, cap);
  CochainComplex X1 = specialize(Xq, L1);
  Ring R = chart_ring(C, p, 1, cap);
  auto B = chart_basis(C, R);
  const int N = int(B.size()), r = C.rank_s();
  std::vector<Cohomology> H;
  for (int i = 0; i <= r; ++i) H.push_back(cohomology(X1, i));
  for (int i = 0; i <= r; ++i) {
    std::vector<int> full(size_t(N), 0), tors(size_t(N), 0);
    for (int a = 0; a < H[size_t(i)].total(); ++a) {
      auto ms = rep_monomial(H[size_t(i)].reps[size_t(a)], N, L1.dim);
      if (ms.size() != 1) throw Error("WindowNotStable", "class supported on several monomials");
      (H[size_t(i)].orders[size_t(a)] == n ? full : tors)[size_t(ms[0])]++;
    }
    for (int k = 0; k < N; ++k) {
      bool all = true;
      for (int s = 0; s < r; ++s) all = all && s_coord(C, B[size_t(k)], s) % p == 0;
      RankRow row{mono_label(R, B[size_t(k)]), i, full[size_t(k)], tors[size_t(k)],
                  all ? int(binom_small(r, i)) * L1.dim : 0};
      if (!row.match()) {
        rep.ranks_ok = false;
        fail("rank mismatch at " + row.monomial + " degree " + std::to_string(i));
      }
      rep.rows.push_back(row);
    }
  }
  if (with_bockstein && r == 1) {
    Lambda L2 = lambda_mod_pq(p, n, 2);
    CochainComplex X2 = specialize(Xq, L2);
    const QPoly pq = q_int(p);
    std::vector<SparseMat> up, down;
    for (int i = 0; i <= r; ++i) {
      const int nb = X1.dim(i) / L1.dim;
      SparseMat U(nb * L2.dim, nb * L1.dim, L2.mod()), Dn(nb * L1.dim, nb * L2.dim, L1.mod());
      for (int b = 0; b < nb; ++b) {
        for (int j = 0; j < L1.dim; ++j) {
          Lambda::Elem tj(size_t(L2.dim), 0);
          tj[size_t(j)] = 1;
          auto v = L2.mul(tj, L2.from_q(pq));
          for (int a = 0; a < L2.dim; ++a) U.add(b * L2.dim + a, b * L1.dim + j, v[size_t(a)]);
        }
        for (int j = 0; j < L2.dim; ++j) {
          Lambda::Elem tj(size_t(j + 1), 0);
          tj[size_t(j)] = 1;
          auto v = L1.reduce(tj);
          for (int a = 0; a < L1.dim; ++a) Dn.add(b * L1.dim + a, b * L2.dim + j, v[size_t(a)]);
        }
      }
      up.push_back(U);
      down.push_back(Dn);
    }
    Bockstein Bk = bockstein(X1, X2, up, down);
    rep.bockstein_checked = true;
    const Mat& beta = Bk.beta[0];
    for (int k = 0; k < N; ++k) {
      std::vector<int> cols, rows;
      for (int a = 0; a < Bk.H[0].total(); ++a)
        if (rep_monomial(Bk.H[0].reps[size_t(a)], N, L1.dim)[0] == k) cols.push_back(a);
      for (int a = 0; a < Bk.H[1].total(); ++a)
        if (rep_monomial(Bk.H[1].reps[size_t(a)], N, L1.dim)[0] == k) rows.push_back(a);
      if (cols.empty()) continue;
      // no leakage to other monomials
      for (int a : cols)
        for (int b = 0; b < beta.rows; ++b)
          if (beta.at(b, a) && std::find(rows.begin(), rows.end(), b) == rows.end()) {
            rep.bockstein_ok = false;
            fail("Bockstein leaves monomial " + mono_label(R, B[size_t(k)]));
          }
      Mat sub(int(rows.size()), int(cols.size()), p, n);
      for (size_t a = 0; a < rows.size(); ++a)
        for (size_t b = 0; b < cols.size(); ++b) sub.at(int(a), int(b)) = beta.at(rows[a], cols[b]);
      const int64_t bval = s_coord(C, B[size_t(k)], 0) / p;
      std::vector<int> want;
      const int v = bval == 0 ? n : valuation(bval, p, n);
      if (v < n) want.assign(size_t(L1.dim), v);
      auto got = elementary_divisors(sub);
      if (got != want) {
        rep.bockstein_ok = false;
        fail("Bockstein divisors at " + mono_label(R, B[size_t(k)]));
      }
    }
    if (!Bk.squares_to_zero) {
      rep.bockstein_ok = false;
      fail("Bockstein does not square to zero");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cartier isomorphism in characteristic p on a monoid chart M -> Q.

struct CartierRow {
  std::string q;
  int degree = 0;
  int computed = 0;
  int expected = 0;
};

struct CartierReport {
  std::string chart;
  int p = 2, degree_cap = 0;
  Verdict cartier_type = Verdict::Unknown;
  bool precondition_ok = false;
  int matched = 0, unmatched = 0;
  std::vector<CartierRow> rows;  // unmatched entries and, when requested, all
  std::string witness;           // first unmatched element of Q
  std::vector<int> computed_totals, expected_totals;
  bool ok() const { return unmatched == 0; }
};

inline CartierReport cartier_check_charp(const NamedMap& chart, int p, int deg_cap, bool enforce_precondition = true,
                                         bool keep_rows = false, int pre_bound = 4) {
  const int bound = 64;
  const MonoidMap& h = chart.map;
  CartierReport rep;
  rep.chart = chart.name;
  rep.p = p;
  rep.degree_cap = deg_cap;
  rep.cartier_type = is_cartier_type(h, p, pre_bound);
  rep.precondition_ok = rep.cartier_type == Verdict::True;
  if (enforce_precondition && !rep.precondition_ok)
    throw Error("PreconditionFailure", chart.name + " is not of Cartier type at p = " + std::to_string(p));
  const Monoid& Q = h.dst;
  if (!Q.units.empty()) throw Error("UnsupportedWindow", "Q with units has no finite degree window");
  auto grading = positive_grading(Q);
  if (!grading) throw Error("UnsupportedWindow", "no positive grading on Q");
  auto elems = elements_up_to(Q, *grading, deg_cap);
  CokernelGrading G = cokernel_grading(h);
  const int r = G.rank();
  // Im(Q^(1) -> Q): generated by p Q and h(M)
  std::vector<IVec> ig;
  for (auto& g : Q.gens) ig.push_back(vscale(p, g));
  for (auto& g : h.src.gens) ig.push_back(h(g));
  std::vector<IVec> iu;
  for (auto& u : h.src.units) iu.push_back(h(u));
  Monoid Im = make_monoid(Q.rank, ig, iu);
  std::vector<std::string> basis;
  std::vector<SparseMat> ops(size_t(r), SparseMat(int(elems.size()), int(elems.size()), p));
  for (size_t k = 0; k < elems.size(); ++k) {
    basis.push_back(vec_string(elems[k]));
    IVec f = G(elems[k]);
    for (int s = 0; s < r; ++s) ops[size_t(s)].add(int(k), int(k), f[size_t(s)]);
  }
  std::vector<std::string> labels;
  for (int s = 0; s < r; ++s) labels.push_back("dlog" + std::to_string(s));
  CochainComplex X = koszul_complex(p, 1, basis, ops, labels);
  const int N = int(elems.size());
  for (int i = 0; i <= r; ++i) {
    Cohomology H = cohomology(X, i);
    std::vector<int> cnt(size_t(N), 0);
    for (auto& rp : H.reps) cnt[size_t(rep_monomial(rp, N, 1)[0])]++;
    int ct = 0, et = 0;
    for (int k = 0; k < N; ++k) {
      Verdict inIm = member(Im, elems[size_t(k)], bound).verdict;
      if (inIm == Verdict::Unknown) throw Error("WindowNotStable", "membership undecided at " + basis[size_t(k)]);
      const int e = inIm == Verdict::True ? int(binom_small(r, i)) : 0;
      ct += cnt[size_t(k)];
      et += e;
      if (cnt[size_t(k)] == e) {
        ++rep.matched;
        if (keep_rows) rep.rows.push_back({basis[size_t(k)], i, cnt[size_t(k)], e});
      } else {
        ++rep.unmatched;
        if (rep.witness.empty()) rep.witness = basis[size_t(k)];
        rep.rows.push_back({basis[size_t(k)], i, cnt[size_t(k)], e});
      }
    }
    rep.computed_totals.push_back(ct);
    rep.expected_totals.push_back(et);
  }
  return rep;
}

}  // namespace logprism
