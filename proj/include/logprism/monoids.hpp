#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "logprism/zlattice.hpp"

namespace logprism {

enum class Verdict { False, True, Unknown };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "unknown";
  }
}

inline Verdict verdict_and(Verdict a, Verdict b) {
  if (a == Verdict::False || b == Verdict::False) return Verdict::False;
  if (a == Verdict::True && b == Verdict::True) return Verdict::True;
  return Verdict::Unknown;
}

// Finitely generated submonoid of Z^rank: nonnegative combinations of `gens`
// plus an arbitrary element of the unit lattice.
struct Monoid {
  int rank = 0;
  std::vector<IVec> gens;   // sorted, none inside the unit lattice
  std::vector<IVec> units;  // HNF basis of the unit lattice
  bool valuative = false;   // declared, not checked
};

inline Monoid make_monoid(int rank, std::vector<IVec> gens, std::vector<IVec> units = {}, bool valuative = false) {
  for (auto& g : gens)
    if (int(g.size()) != rank) throw Error("DimensionMismatch", "generator " + vec_string(g));
  Lattice U(rank, units);
  Monoid M;
  M.rank = rank;
  M.units = U.basis;
  M.valuative = valuative;
  std::set<IVec> seen;
  for (auto& g : gens)
    if (!U.contains(g)) seen.insert(g);
  M.gens.assign(seen.begin(), seen.end());
  return M;
}

inline Monoid free_monoid(int k) {
  std::vector<IVec> g;
  for (int i = 0; i < k; ++i) {
    IVec e(k, 0);
    e[i] = 1;
    g.push_back(e);
  }
  return make_monoid(k, g);
}

inline Lattice unit_lattice(const Monoid& M) { return Lattice(M.rank, M.units); }

inline Lattice groupify(const Monoid& M) {
  std::vector<IVec> all = M.gens;
  all.insert(all.end(), M.units.begin(), M.units.end());
  return Lattice(M.rank, all);
}

// A functional vanishing on units and positive on every generator; its
// existence makes membership decidable by a finite search.
inline std::optional<IVec> positive_grading(const Monoid& M) {
  std::vector<IVec> basis;
  if (M.units.empty()) {
    for (int i = 0; i < M.rank; ++i) {
      IVec e(M.rank, 0);
      e[i] = 1;
      basis.push_back(e);
    }
  } else {
    basis = kernel_z(ZMat::from_rows(M.units, M.rank));
  }
  const int d = int(basis.size());
  if (M.gens.empty()) return IVec(M.rank, 0);
  if (d == 0) return std::nullopt;
  const int B = d <= 4 ? 3 : (d <= 6 ? 2 : 1);
  auto ok = [&](const IVec& phi) {
    return std::all_of(M.gens.begin(), M.gens.end(), [&](const IVec& g) { return dot(phi, g) > 0; });
  };
  // all-ones in the chosen coordinates first, then the box
  IVec ones(M.rank, 0);
  for (auto& b : basis) ones = vadd(ones, b);
  if (ok(ones)) return ones;
  IVec c(d, -B);
  while (true) {
    IVec phi(M.rank, 0);
    for (int i = 0; i < d; ++i) phi = vadd(phi, vscale(c[i], basis[i]));
    if (ok(phi)) return phi;
    int i = 0;
    while (i < d && ++c[i] > B) c[i++] = -B;
    if (i == d) break;
  }
  return std::nullopt;
}

struct Membership {
  Verdict verdict = Verdict::Unknown;
  IVec gen_coeffs;   // nonnegative, one per generator
  IVec unit_coeffs;  // on the unit basis
};

inline IVec evaluate(const Monoid& M, const Membership& w) {
  IVec v(M.rank, 0);
  for (size_t i = 0; i < M.gens.size(); ++i) v = vadd(v, vscale(w.gen_coeffs[i], M.gens[i]));
  for (size_t i = 0; i < M.units.size(); ++i) v = vadd(v, vscale(w.unit_coeffs[i], M.units[i]));
  return v;
}

// Dynamic programming over generators on classes modulo the unit lattice.
// With a positive grading the search is complete; otherwise each generator
// is used at most `bound` times and a miss is reported as Unknown.
inline Membership member(const Monoid& M, const IVec& v, int bound) {
  if (int(v.size()) != M.rank) throw Error("DimensionMismatch", "member: " + vec_string(v));
  Lattice U = unit_lattice(M);
  auto phi = positive_grading(M);
  Membership res;
  if (phi && dot(*phi, v) < 0) {
    res.verdict = Verdict::False;
    return res;
  }
  const int64_t budget = phi ? dot(*phi, v) : 0;
  const size_t ng = M.gens.size();
  std::map<IVec, IVec> states;  // class rep -> coefficients
  states[U.reduce(IVec(M.rank, 0))] = IVec(ng, 0);
  bool capped = false;
  const size_t max_states = 2000000;
  for (size_t i = 0; i < ng; ++i) {
    std::map<IVec, IVec> next;
    for (auto& [w, c] : states) {
      IVec cur(M.rank, 0);
      for (size_t j = 0; j < i; ++j) cur = vadd(cur, vscale(c[j], M.gens[j]));
      for (int64_t t = 0;; ++t) {
        if (phi && dot(*phi, cur) > budget) break;
        if (t > bound) {
          capped = true;
          break;
        }
        IVec ct = c;
        ct[i] = t;
        next.emplace(U.reduce(cur), ct);
        cur = vadd(cur, M.gens[i]);
      }
      if (next.size() > max_states) {
        capped = true;
        break;
      }
    }
    states = std::move(next);
  }
  auto it = states.find(U.reduce(v));
  if (it != states.end()) {
    res.verdict = Verdict::True;
    res.gen_coeffs = it->second;
    IVec rest = v;
    for (size_t j = 0; j < ng; ++j) rest = vsub(rest, vscale(res.gen_coeffs[j], M.gens[j]));
    res.unit_coeffs = *U.coords(rest);
    return res;
  }
  res.verdict = (phi && !capped) ? Verdict::False : Verdict::Unknown;
  return res;
}

// Elements of the monoid modulo units whose grading is at most `deg`.
inline std::vector<IVec> elements_up_to(const Monoid& M, const IVec& phi, int64_t deg) {
  std::set<IVec> out{IVec(M.rank, 0)};
  std::vector<IVec> frontier{IVec(M.rank, 0)};
  while (!frontier.empty()) {
    std::vector<IVec> nf;
    for (auto& w : frontier)
      for (auto& g : M.gens) {
        IVec x = vadd(w, g);
        if (dot(phi, x) <= deg && out.insert(x).second) nf.push_back(x);
      }
    frontier = std::move(nf);
  }
  return {out.begin(), out.end()};
}

// Lattice points sum a_i b_i with |a_i| <= bound.
inline std::vector<IVec> lattice_box(const Lattice& L, int bound) {
  std::vector<IVec> out;
  const int r = L.rank();
  IVec a(r, -bound);
  while (true) {
    out.push_back(L.combine(a));
    int i = 0;
    while (i < r && ++a[i] > bound) a[i++] = -bound;
    if (i == r) break;
  }
  return out;
}

struct MonoidMap {
  Monoid src, dst;
  ZMat map;  // dst.rank x src.rank

  IVec operator()(const IVec& x) const { return map(x); }
};

inline MonoidMap make_map(const Monoid& src, const Monoid& dst, const ZMat& map, int bound = 64) {
  if (map.rows != dst.rank || map.cols != src.rank) throw Error("DimensionMismatch", "monoid map shape");
  MonoidMap h{src, dst, map};
  std::vector<IVec> must = src.gens;
  for (auto& u : src.units) {
    must.push_back(u);
    must.push_back(vscale(-1, u));
  }
  for (auto& g : must)
    if (member(dst, h(g), bound).verdict != Verdict::True)
      throw Error("NotAMonoidMap", "image of " + vec_string(g) + " not certified in target");
  return h;
}

// Image of M^gp inside Z^{dst.rank}.
inline Lattice image_lattice(const MonoidMap& h) {
  std::vector<IVec> im;
  for (auto& b : groupify(h.src).basis) im.push_back(h(b));
  return Lattice(h.dst.rank, im);
}

inline bool injective_on_groups(const MonoidMap& h) {
  return image_lattice(h).rank() == groupify(h.src).rank();
}

// Tests (h^gp)^{-1}(N) = M on the box of radius `bound` in M^gp.
inline Verdict is_exact(const MonoidMap& h, int bound) {
  const int mb = 8 * bound + 8;
  bool unknown = false;
  for (auto& x : lattice_box(groupify(h.src), bound)) {
    Verdict inN = member(h.dst, h(x), mb).verdict;
    if (inN == Verdict::False) continue;
    Verdict inM = member(h.src, x, mb).verdict;
    if (inN == Verdict::True && inM == Verdict::False) return Verdict::False;
    if (inN == Verdict::Unknown || inM == Verdict::Unknown) unknown = true;
  }
  return unknown ? Verdict::Unknown : Verdict::True;
}

struct FrobeniusPushout {
  Monoid Q1;           // in Z^{kQ + kM}, gluing lattice folded into the units
  MonoidMap relfrob;   // Q1 -> Q, (q, m) -> p q + h(m)
};

inline FrobeniusPushout frobenius_pushout(const MonoidMap& h, int p) {
  if (!injective_on_groups(h)) throw Error("UnsupportedPushout", "h^gp is not injective");
  const int kQ = h.dst.rank, kM = h.src.rank;
  auto embed = [&](const IVec& q, const IVec& m) {
    IVec v(q);
    v.insert(v.end(), m.begin(), m.end());
    return v;
  };
  const IVec zq(kQ, 0), zm(kM, 0);
  std::vector<IVec> gens, units;
  for (auto& q : h.dst.gens) gens.push_back(embed(q, zm));
  for (auto& m : h.src.gens) gens.push_back(embed(zq, m));
  for (auto& u : h.dst.units) units.push_back(embed(u, zm));
  for (auto& u : h.src.units) units.push_back(embed(zq, u));
  for (auto& b : groupify(h.src).basis) units.push_back(embed(h(b), vscale(-p, b)));
  Monoid Q1 = make_monoid(kQ + kM, gens, units);
  ZMat F(kQ, kQ + kM);
  for (int i = 0; i < kQ; ++i) F.at(i, i) = p;
  for (int i = 0; i < kQ; ++i)
    for (int j = 0; j < kM; ++j) F.at(i, kQ + j) = h.map.at(i, j);
  return {Q1, make_map(Q1, h.dst, F)};
}

// Equational criterion: whenever h(m1) + n1 = h(m2) + n2 there are m3, m4, n
// with n1 = h(m3) + n, n2 = h(m4) + n, m1 + m3 = m2 + m4. A counterexample is
// final; an empty search only certifies injective graded maps.
inline Verdict is_integral(const MonoidMap& h, int bound) {
  if (h.src.valuative) return Verdict::True;
  if (h.src.gens.empty()) return Verdict::True;  // source is a group: m3 = 0, m4 = m1 - m2
  auto phiN = positive_grading(h.dst);
  if (!phiN) return Verdict::Unknown;
  bool complete = h.src.units.empty() && injective_on_groups(h);
  for (auto& g : h.src.gens)
    if (dot(*phiN, h(g)) <= 0) return Verdict::Unknown;
  IVec phiM(h.src.rank, 0);  // pullback grading
  for (int j = 0; j < h.src.rank; ++j)
    for (int i = 0; i < h.dst.rank; ++i) phiM[j] = checked_add(phiM[j], checked_mul((*phiN)[i], h.map.at(i, j)));
  auto EM = elements_up_to(h.src, phiM, bound);
  auto EN = elements_up_to(h.dst, *phiN, bound);
  const int mb = 8 * bound + 8;
  for (auto& m1 : EM)
    for (auto& m2 : EM) {
      if (m1 == m2) continue;
      IVec shift = vsub(h(m1), h(m2));
      for (auto& n1 : EN) {
        IVec n2 = vadd(shift, n1);
        if (member(h.dst, n2, mb).verdict != Verdict::True) continue;
        bool found = false;
        for (auto& m3 : EM) {
          if (dot(phiM, m3) > dot(*phiN, n1)) continue;
          if (member(h.dst, vsub(n1, h(m3)), mb).verdict != Verdict::True) continue;
          if (member(h.src, vsub(vadd(m1, m3), m2), mb).verdict != Verdict::True) continue;
          found = true;
          break;
        }
        if (!found) return Verdict::False;
      }
    }
  return complete ? Verdict::True : Verdict::Unknown;
}

inline Verdict is_cartier_type(const MonoidMap& h, int p, int bound) {
  Verdict integral = is_integral(h, bound);
  if (integral == Verdict::False) return Verdict::False;
  if (!injective_on_groups(h)) return Verdict::Unknown;
  auto fp = frobenius_pushout(h, p);
  return verdict_and(integral, is_exact(fp.relfrob, bound));
}

// Drops generators expressible through the others.
inline Monoid minimize(const Monoid& M) {
  std::vector<IVec> keep = M.gens;
  for (size_t i = 0; i < keep.size();) {
    std::vector<IVec> others;
    for (size_t j = 0; j < keep.size(); ++j)
      if (j != i) others.push_back(keep[j]);
    Monoid R = make_monoid(M.rank, others, M.units);
    if (member(R, keep[i], 32).verdict == Verdict::True)
      keep.erase(keep.begin() + long(i));
    else
      ++i;
  }
  return make_monoid(M.rank, keep, M.units, M.valuative);
}

// M' = (h^gp)^{-1}(N), generated by lifts of generators of N and the kernel.
inline Monoid exactify(const MonoidMap& h) {
  Lattice Mgp = groupify(h.src);
  if (!(image_lattice(h) == groupify(h.dst))) throw Error("ExactifyRequiresSurjection", "h^gp is not onto N^gp");
  std::vector<IVec> cols;
  for (auto& b : Mgp.basis) cols.push_back(h(b));
  ZMat A = ZMat::from_columns(cols, h.dst.rank);
  auto lift = [&](const IVec& n) { return Mgp.combine(*solve_z(A, n)); };
  std::vector<IVec> gens = h.src.gens, units = h.src.units;
  for (auto& n : h.dst.gens) gens.push_back(lift(n));
  for (auto& u : h.dst.units) units.push_back(lift(u));
  for (auto& kv : kernel_z(A)) units.push_back(Mgp.combine(kv));
  return minimize(make_monoid(h.src.rank, gens, units));
}

// Functionals on Q^gp vanishing on h(M^gp): coordinates on the free part of
// the cokernel.
struct CokernelGrading {
  Lattice qgp;
  std::vector<IVec> functionals;  // on HNF coordinates of qgp

  IVec operator()(const IVec& v) const {
    auto c = qgp.coords(v);
    if (!c) throw Error("DimensionMismatch", vec_string(v) + " not in the group");
    IVec out;
    for (auto& f : functionals) out.push_back(dot(f, *c));
    return out;
  }
  int rank() const { return int(functionals.size()); }
};

inline ZMat image_in_coords(const MonoidMap& h, const Lattice& qgp) {
  std::vector<IVec> cols;
  for (auto& b : groupify(h.src).basis) {
    auto c = qgp.coords(h(b));
    if (!c) throw Error("NotAMonoidMap", "image leaves the target group");
    cols.push_back(*c);
  }
  return ZMat::from_columns(cols, qgp.rank());
}

inline CokernelGrading cokernel_grading(const MonoidMap& h) {
  CokernelGrading g{groupify(h.dst), {}};
  ZMat C = image_in_coords(h, g.qgp);
  g.functionals = kernel_z(C.transpose());
  return g;
}

struct ChartReport {
  Verdict integral = Verdict::Unknown;
  bool injective = false;
  int64_t torsion = 1;
  bool torsion_coprime_to_p = true;
  bool finitely_generated = true;
  Verdict exact_at_origin = Verdict::Unknown;
  bool smooth_chart = false;
  std::string etale = "not checked";
};

inline ChartReport chart_report(const MonoidMap& h, int p, int bound) {
  ChartReport r;
  r.integral = is_integral(h, bound);
  r.injective = injective_on_groups(h);
  Lattice qgp = groupify(h.dst);
  for (int64_t d : invariant_factors(image_in_coords(h, qgp))) r.torsion = checked_mul(r.torsion, d);
  r.torsion_coprime_to_p = r.torsion % p != 0;
  r.exact_at_origin = is_exact(h, bound);
  r.smooth_chart = r.integral == Verdict::True && r.injective && r.torsion_coprime_to_p;
  return r;
}

// Named fixtures used by tests and the command line.
struct NamedMap {
  std::string name;
  std::string description;
  MonoidMap map;
};

inline MonoidMap scalar_map(int k, int64_t c) {
  return make_map(free_monoid(k), free_monoid(k), ZMat::scalar(k, c));
}

inline std::vector<NamedMap> monoid_catalog() {
  std::vector<NamedMap> out;
  Monoid triv = make_monoid(0, {});
  Monoid N = free_monoid(1), N2 = free_monoid(2), N3 = free_monoid(3);
  auto cols = [](std::vector<IVec> c, int r) { return ZMat::from_columns(c, r); };
  out.push_back({"trivial-to-N", "trivial monoid into N", make_map(triv, N, ZMat(1, 0))});
  out.push_back({"identity-N", "identity on N", make_map(N, N, ZMat::identity(1))});
  out.push_back({"semistable", "N -> N^2 diagonal, 1 -> (1,1)", make_map(N, N2, cols({{1, 1}}, 2))});
  out.push_back({"semistable-3", "N -> N^3 diagonal", make_map(N, N3, cols({{1, 1, 1}}, 3))});
  out.push_back({"factor-inclusion", "N -> N^2 onto the first factor", make_map(N, N2, cols({{1, 0}}, 2))});
  out.push_back({"times-2", "N -> N multiplication by 2", scalar_map(1, 2)});
  out.push_back({"times-3", "N -> N multiplication by 3", scalar_map(1, 3)});
  out.push_back({"weighted-node", "N -> N^2, 1 -> (1,2)", make_map(N, N2, cols({{1, 2}}, 2))});
  out.push_back({"sum", "N^2 -> N, (a,b) -> a+b", make_map(N2, N, cols({{1}, {1}}, 1))});
  out.push_back({"identity-N2", "identity on N^2", make_map(N2, N2, ZMat::identity(2))});
  Monoid Z = make_monoid(1, {}, {{1}});
  out.push_back({"units-into-log-line", "Z -> Z x N, first factor", make_map(Z, make_monoid(2, {{0, 1}}, {{1, 0}}), cols({{1, 0}}, 2))});
  return out;
}

inline const NamedMap& catalog_map(const std::string& name) {
  static const auto cat = monoid_catalog();
  for (auto& e : cat)
    if (e.name == name) return e;
  throw Error("UnknownInstance", name);
}

}  // namespace logprism
