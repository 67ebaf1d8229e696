#pragma once

// Cech-Alexander cosimplicial rings for the line and the log line, at bounded
// cosimplicial degree.  Three flavours:
//   prismatic  crystalline base (d = p), level n = envelope of x_i - x_0,
//              i.e. free delta-ring on x0, y1..yn with x_i = x0 + p y_i;
//   delta-crys same nerve, x_i = x0 + z_i with divided powers on z_i;
//   log        q-base (d = [p]_q), log line: x_i = x0 u_i with units
//              u_i = 1 + d w_i after exactifying N^{n+1} -> N.
// A point chart (R = A/I) gives the constant object.

#include <numeric>

#include "prisms.hpp"

namespace logprism {

enum class CechMode { Prismatic, DeltaCrys, Log };

inline std::string to_string(CechMode m) {
  switch (m) {
    case CechMode::Prismatic: return "prismatic";
    case CechMode::DeltaCrys: return "delta-crys";
    case CechMode::Log: return "log";
  }
  return "?";
}

struct CechConfig {
  CechMode mode = CechMode::Prismatic;
  int p = 2, n = 2;
  int depth = 2;    // delta (and dlog) tower depth
  int deg_cap = 8;  // x-degree window
  int pd_cap = 8;   // divided-power window (delta-crys)
  int t_cap = 4;    // (q-1)-adic window (log)
  int aux_cap = 4;  // window for the dlog and unit towers (log)
  int nmax = 1;
  bool point = false;  // R = A/I, no coordinate
};

struct CechLevel {
  DeltaLogRing ring;
  DeltaRing pre;        // before divided powers; equal to ring.base otherwise
  std::vector<int> dp;  // divided-power variables of ring
  // nerve[i][k]: image of delta^k(x_i); log mode: nerve[i][0] = x_i and
  // nerve[i][1 + k] = delta^k(dlog e_i)
  std::vector<std::vector<RingElem>> nerve;
  std::vector<AdjoinedGen> adjoined;
  bool exactified = true;  // log mode: monoid is the exactification of the sum map
};

// Map of levels given by images of the source variables (and, in log mode,
// of the monoid generators followed by the units).
struct CechMap {
  std::vector<int> theta;
  std::vector<RingElem> images;
  std::vector<IVec> monoid_images;
};

struct CechInstance {
  std::string name;
  CechConfig cfg;
  std::string base_kind;
  std::vector<CechLevel> levels;
  std::vector<std::vector<CechMap>> faces;   // faces[n][j]: level n -> n+1
  std::vector<std::vector<CechMap>> degens;  // degens[n][j]: level n+1 -> n
  IdentityReport identities;
  bool maps_ok = true;  // delta, log and nerve compatibility of every face and degeneracy
  std::string failure;
  int checked = 0;

  RingElem d(int lvl) const {
    const Ring& R = levels[size_t(lvl)].ring.base.ring;
    return cfg.mode == CechMode::Log ? q_analogue_p(R, "t") : RingElem::constant(R, cfg.p);
  }
};

inline RingElem bring_back(const RingElem& x, const Ring& R) {
  return RingElem::from_terms(R, x.terms(), std::min(R->n(), x.precision())).with_window(x.window());
}

// gamma_e of a signed sum of divided-power variables.
inline RingElem dp_gamma_linear(const RingElem& lin, int e, const Ring& R) {
  std::vector<std::pair<int, int64_t>> parts;
  for (auto& [m, c] : lin.terms()) {
    int v = -1;
    for (int i = 0; i < R->nvars(); ++i)
      if (m[size_t(i)]) {
        if (v >= 0 || m[size_t(i)] != 1 || R->vars[size_t(i)].kind != VarKind::DividedPower)
          throw Error("UnsupportedMap", "divided power of " + lin.to_string());
        v = i;
      }
    if (v < 0) throw Error("UnsupportedMap", "divided power of " + lin.to_string());
    parts.push_back({v, c});
  }
  RingElem out = RingElem::zero(R).with_prec(lin.precision());
  std::function<void(size_t, int, RingElem)> rec = [&](size_t j, int left, RingElem acc) {
    if (j + 1 == parts.size() || parts.empty()) {
      if (parts.empty()) {
        if (!left) out = out + acc;
        return;
      }
      RingElem t = RingElem::var(R, parts[j].first, left).scale(ipow(parts[j].second, left) % lin.modulus());
      out = out + acc * t;
      return;
    }
    for (int k = 0; k <= left; ++k)
      rec(j + 1, left - k, acc * RingElem::var(R, parts[j].first, k).scale(ipow(parts[j].second, k) % lin.modulus()));
  };
  rec(0, e, RingElem::constant(R, 1).with_prec(lin.precision()));
  return out;
}

inline RingElem apply_cech_map(const CechMap& f, const RingElem& x, const Ring& target) {
  RingElem out = RingElem::zero(target).with_prec(x.precision());
  const Ring& S = x.ring();
  for (auto& [m, c] : x.terms()) {
    RingElem t = RingElem::constant(target, c).with_prec(x.precision());
    for (int i = 0; i < S->nvars() && !t.is_zero(); ++i) {
      if (!m[size_t(i)]) continue;
      if (S->vars[size_t(i)].kind == VarKind::DividedPower)
        t = t * dp_gamma_linear(f.images[size_t(i)], m[size_t(i)], target);
      else
        t = t * f.images[size_t(i)].pow(m[size_t(i)]);
    }
    out = out + t;
  }
  return out;
}

namespace detail {

inline std::string tower_name(const std::string& v, int k) { return k ? v + "_" + std::to_string(k) : v; }

// delta^k(e), k = 0..depth, in a copy of D at precision n + extra.
inline std::vector<RingElem> lifted_tower(const DeltaRing& H, RingElem e, int depth, const Ring& back) {
  std::vector<RingElem> out;
  for (int k = 0; k <= depth; ++k) {
    out.push_back(bring_back(e, back));
    if (k < depth) e = delta_eval(H, e);
  }
  return out;
}

inline DeltaRing nerve_ring(const CechConfig& c, int lvl) {
  DeltaRing B = base_delta_ring(c.p, c.n, {}, {{"deg", {}, c.deg_cap}}, c.depth);
  if (!c.point)
    for (int i = 0; i <= lvl; ++i) B = free_delta_adjoin(B, "x" + std::to_string(i), c.depth, {1});
  return B;
}

// prismatic and delta-crys levels: eliminate x_i = x0 + d y_i (d = p) or
// x_i = x0 + z_i followed by divided powers on the z_i.
inline CechLevel envelope_level(const CechConfig& c, int lvl) {
  CechLevel L;
  DeltaRing B = nerve_ring(c, lvl);
  const bool crys = c.mode == CechMode::DeltaCrys;
  const std::string y = crys ? "z" : "y";
  std::vector<EliminationGen> gens;
  if (!c.point)
    for (int i = 1; i <= lvl; ++i)
      gens.push_back({"x" + std::to_string(i), RingElem::var(B.ring, "x0"), y + std::to_string(i)});
  RingElem d = RingElem::constant(B.ring, crys ? 1 : c.p);
  EnvelopeResult env = prismatic_envelope_regular(B, d, gens, c.depth);
  L.pre = env.ring.base;
  for (int i = 1; i <= int(gens.size()); ++i) {
    std::string yi = y + std::to_string(i), xi = "x" + std::to_string(i);
    L.adjoined.push_back({yi, crys ? xi + " = x0 + " + yi : std::to_string(c.p) + "*" + yi + " = " + xi + " - x0"});
  }
  if (crys && !gens.empty()) {
    std::vector<std::string> zs;
    for (int i = 1; i <= lvl; ++i) zs.push_back("z" + std::to_string(i));
    EnvelopeResult pd = pd_envelope(env.ring, zs, c.pd_cap);
    L.ring = pd.ring;
    for (auto& z : zs) L.dp.push_back(L.ring.base.ring->var_index(z));
    for (auto& a : pd.adjoined) L.adjoined.push_back(a);
  } else {
    L.ring = env.ring;
  }
  const Ring& R = L.ring.base.ring;
  if (!c.point)
    for (int i = 0; i <= lvl; ++i) {
      std::vector<RingElem> tw;
      for (int k = 0; k <= c.depth; ++k) {
        const RingElem& img = env.images[size_t(B.ring->var_index(tower_name("x" + std::to_string(i), k)))];
        tw.push_back(to_divided_powers(img, R, L.dp));
      }
      L.nerve.push_back(tw);
    }
  return L;
}

// The q-base with gradings t, deg (x), aux (dlog and unit towers).
inline DeltaRing log_base(const CechConfig& c) {
  Ring R0 = make_ring(c.p, c.n, {{"t"}}, {{"t", {1}, c.t_cap}, {"deg", {0}, c.deg_cap}, {"aux", {0}, c.aux_cap}}, c.depth + 1);
  Ring R = with_nonzerodivisor(R0, q_analogue_p(R0, "t"));
  RingElem dt = RingElem::zero(R);
  for (int i = 1; i < c.p; ++i) dt = dt + RingElem::var(R, "t", i).scale(int64_t(binom_exact(c.p, i) / uint64_t(c.p)));
  return make_delta_ring(R, {{"t", dt}});
}

inline CechLevel log_level(const CechConfig& c, int lvl) {
  CechLevel L;
  DeltaRing D = log_base(c);
  if (c.point) {
    L.ring = trivial_log_dlog(D, {});
    L.pre = L.ring.base;
    return L;
  }
  DeltaLogRing X = adjoin_monoid_dlog(D, {{"x0", "v"}}, c.depth, {0, 1, 0}, {0, 0, 1});
  DeltaRing E = X.base;
  // dlog u = delta(u)/u^p reaches one step further up the unit tower
  for (int i = 1; i <= lvl; ++i) E = free_delta_adjoin(E, "w" + std::to_string(i), c.depth + 1, {0, 0, 1});
  const Ring& R = E.ring;
  const int extra = c.depth + 3;
  DeltaRing H = with_delta_precision(E, c.n + extra);
  RingElem dH = q_analogue_p(H.ring, "t");
  RingElem x0 = RingElem::var(R, "x0"), v0 = RingElem::var(R, "v0");
  std::vector<IVec> units;
  std::vector<RingElem> au, du;
  L.nerve.push_back({});
  L.nerve[0].push_back(x0);
  for (int k = 0; k <= c.depth; ++k) L.nerve[0].push_back(RingElem::var(R, "v" + std::to_string(k)));
  for (int i = 1; i <= lvl; ++i) {
    std::string w = "w" + std::to_string(i);
    RingElem uH = RingElem::constant(H.ring, 1) + dH * RingElem::var(H.ring, w);
    RingElem dlH = delta_eval(H, uH) * uH.pow(c.p).inverse();
    IVec e(size_t(lvl + 1), 0);
    e[size_t(i)] = 1;
    units.push_back(e);
    au.push_back(bring_back(uH, R));
    du.push_back(bring_back(dlH, R));
    // x_i = x0 u_i, dlog e_i = v0 + dlog u_i + p v0 dlog u_i
    RingElem v0H = RingElem::var(H.ring, "v0");
    RingElem dli = v0H + dlH + (v0H * dlH).times_p();
    std::vector<RingElem> nv{x0 * au.back()};
    for (auto& t : lifted_tower(H, dli, c.depth, R)) nv.push_back(t);
    L.nerve.push_back(nv);
    L.adjoined.push_back({w, "u" + std::to_string(i) + " = x" + std::to_string(i) + "/x0 = 1 + [p]_q*" + w});
  }
  IVec e0(size_t(lvl + 1), 0);
  e0[0] = 1;
  L.ring = DeltaLogRing{E, make_monoid(lvl + 1, {e0}, units), {x0}, {v0}, au, du};
  L.pre = E;
  // compare with the exactification of N^{lvl+1} -> N in the coordinates e_0 + eps_i
  ZMat sum(1, lvl + 1);
  for (int i = 0; i <= lvl; ++i) sum.at(0, i) = 1;
  Monoid Ex = exactify(make_map(free_monoid(lvl + 1), free_monoid(1), sum));
  auto to_ours = [&](const IVec& v) {  // e-coordinates -> (e0, eps)
    IVec r(size_t(lvl + 1), 0);
    for (int i = 0; i <= lvl; ++i) r[0] += v[size_t(i)];
    for (int i = 1; i <= lvl; ++i) r[size_t(i)] = v[size_t(i)];
    return r;
  };
  auto to_e = [&](const IVec& r) {
    IVec v(size_t(lvl + 1), 0);
    v[0] = r[0];
    for (int i = 1; i <= lvl; ++i) {
      v[size_t(i)] = r[size_t(i)];
      v[0] -= r[size_t(i)];
    }
    return v;
  };
  for (auto* gs : {&Ex.gens, &Ex.units})
    for (auto& g : *gs) L.exactified = L.exactified && member(L.ring.monoid, to_ours(g), 64).verdict == Verdict::True;
  for (auto* gs : {&L.ring.monoid.gens, &L.ring.monoid.units})
    for (auto& g : *gs) L.exactified = L.exactified && member(Ex, to_e(g), 64).verdict == Verdict::True;
  return L;
}

}  // namespace detail

// Map from level s to level t along theta: [s] -> [t].
inline CechMap cech_map(const CechInstance& I, int s, int t, const std::vector<int>& theta) {
  const CechConfig& c = I.cfg;
  const CechLevel& S = I.levels[size_t(s)];
  const CechLevel& T = I.levels[size_t(t)];
  const Ring& RS = S.ring.base.ring;
  const Ring& RT = T.ring.base.ring;
  CechMap f;
  f.theta = theta;
  f.images.resize(size_t(RS->nvars()));
  if (c.mode != CechMode::Log) {
    const std::string y = c.mode == CechMode::DeltaCrys ? "z" : "y";
    for (int v = 0; v < RS->nvars(); ++v) f.images[size_t(v)] = RingElem::var(RT, v);  // base variables, if any
    if (c.point) return f;
    for (int k = 0; k <= c.depth; ++k)
      f.images[size_t(RS->var_index(detail::tower_name("x0", k)))] = T.nerve[size_t(theta[0])][size_t(k)];
    auto Y = [&](int j) {
      return j ? RingElem::var(T.pre.ring, y + std::to_string(j)) : RingElem::zero(T.pre.ring);
    };
    for (int i = 1; i <= s; ++i) {
      RingElem e = Y(theta[size_t(i)]) - Y(theta[0]);
      auto tw = delta_tower_images(T.pre, e, c.depth);
      for (int k = 0; k <= c.depth; ++k)
        f.images[size_t(RS->var_index(detail::tower_name(y + std::to_string(i), k)))] = to_divided_powers(tw[size_t(k)], RT, T.dp);
    }
    return f;
  }
  f.images[size_t(RS->var_index("t"))] = RingElem::var(RT, "t");
  if (c.point) return f;
  f.images[size_t(RS->var_index("x0"))] = T.nerve[size_t(theta[0])][0];
  for (int k = 0; k <= c.depth; ++k)
    f.images[size_t(RS->var_index("v" + std::to_string(k)))] = T.nerve[size_t(theta[0])][size_t(1 + k)];
  DeltaRing H = with_delta_precision(T.pre, c.n + c.depth + 3);
  RingElem dH = q_analogue_p(H.ring, "t");
  auto W = [&](int j) { return j ? RingElem::var(H.ring, "w" + std::to_string(j)) : RingElem::zero(H.ring); };
  RingElem ub = RingElem::constant(H.ring, 1) + dH * W(theta[0]);
  RingElem ubinv = ub.inverse();
  for (int i = 1; i <= s; ++i) {
    RingElem e = (W(theta[size_t(i)]) - W(theta[0])) * ubinv;
    auto tw = detail::lifted_tower(H, e, c.depth + 1, RT);
    for (int k = 0; k <= c.depth + 1; ++k)
      f.images[size_t(RS->var_index(detail::tower_name("w" + std::to_string(i), k)))] = tw[size_t(k)];
  }
  auto eps = [&](int j) {
    IVec v(size_t(t + 1), 0);
    if (j) v[size_t(j)] = 1;
    return v;
  };
  IVec e0(size_t(t + 1), 0);
  e0[0] = 1;
  f.monoid_images.push_back(vadd(e0, eps(theta[0])));
  for (int i = 1; i <= s; ++i) f.monoid_images.push_back(vsub(eps(theta[size_t(i)]), eps(theta[0])));
  return f;
}

inline std::vector<int> coface_theta(int n, int j) {  // [n] -> [n+1] skipping j
  std::vector<int> th;
  for (int i = 0; i <= n; ++i) th.push_back(i < j ? i : i + 1);
  return th;
}

inline std::vector<int> codegeneracy_theta(int n, int j) {  // [n+1] -> [n] hitting j twice
  std::vector<int> th;
  for (int i = 0; i <= n + 1; ++i) th.push_back(i <= j ? i : i - 1);
  return th;
}

namespace detail {

// f is a delta-map on generators, respects alpha and dlog, and carries the
// nerve of the source to the nerve of the target along theta.
inline std::string check_cech_map(const CechInstance& I, int s, int t, const CechMap& f, int& checked) {
  const CechLevel& S = I.levels[size_t(s)];
  const CechLevel& T = I.levels[size_t(t)];
  const Ring& RS = S.ring.base.ring;
  const Ring& RT = T.ring.base.ring;
  std::string where = "map " + std::to_string(s) + "->" + std::to_string(t);
  for (int v = 0; v < RS->nvars(); ++v) {
    const auto& dv = S.ring.base.delta_on_gens[size_t(v)];
    if (!dv) continue;
    ++checked;
    RingElem lhs = apply_cech_map(f, *dv, RT);
    // images are known mod p^n, so delta of them only mod p^(n-1)
    RingElem rhs = delta_eval(T.ring.base, f.images[size_t(v)]);
    if (!(lhs == rhs)) return where + ": delta fails on " + RS->vars[size_t(v)].name;
  }
  if (I.cfg.mode == CechMode::Log && !I.cfg.point) {
    std::vector<RingElem> a = S.ring.alpha_gens, dl = S.ring.dlog_gens;
    a.insert(a.end(), S.ring.alpha_units.begin(), S.ring.alpha_units.end());
    dl.insert(dl.end(), S.ring.dlog_units.begin(), S.ring.dlog_units.end());
    for (size_t g = 0; g < a.size(); ++g) {
      ++checked;
      LogValue lv = log_value(T.ring, f.monoid_images[g]);
      if (!(apply_cech_map(f, a[g], RT) == lv.alpha)) return where + ": alpha fails on generator " + std::to_string(g);
      if (!(apply_cech_map(f, dl[g], RT) == lv.dlog)) return where + ": dlog fails on generator " + std::to_string(g);
    }
  }
  for (size_t i = 0; i < S.nerve.size(); ++i)
    for (size_t k = 0; k < S.nerve[i].size(); ++k) {
      ++checked;
      if (!(apply_cech_map(f, S.nerve[i][k], RT) == T.nerve[size_t(f.theta[i])][k]))
        return where + ": nerve relation fails at factor " + std::to_string(i) + " tower " + std::to_string(k);
    }
  return "";
}

}  // namespace detail

inline void verify_cech(CechInstance& I);

inline CechInstance build_cech(const CechConfig& cfg, const std::string& name = "") {
  if (cfg.nmax < 0 || cfg.nmax > 2) throw Error("ConfigError", "n_max must be 0, 1 or 2");
  if (cfg.mode == CechMode::DeltaCrys && cfg.pd_cap < 1) throw Error("ConfigError", "pd cap must be positive");
  CechInstance I;
  I.cfg = cfg;
  I.name = name;
  I.base_kind = cfg.mode == CechMode::Log ? "qdr" : "crystalline";
  for (int lvl = 0; lvl <= cfg.nmax; ++lvl)
    I.levels.push_back(cfg.mode == CechMode::Log ? detail::log_level(cfg, lvl) : detail::envelope_level(cfg, lvl));
  for (int lvl = 0; lvl < cfg.nmax; ++lvl) {
    std::vector<CechMap> fs, ss;
    for (int j = 0; j <= lvl + 1; ++j) fs.push_back(cech_map(I, lvl, lvl + 1, coface_theta(lvl, j)));
    for (int j = 0; j <= lvl; ++j) ss.push_back(cech_map(I, lvl + 1, lvl, codegeneracy_theta(lvl, j)));
    I.faces.push_back(fs);
    I.degens.push_back(ss);
  }
  verify_cech(I);
  return I;
}

// Structure checks on every face and degeneracy plus the cosimplicial
// identities on generators; fills maps_ok, identities and failure.
inline void verify_cech(CechInstance& I) {
  const CechConfig& cfg = I.cfg;
  I.maps_ok = true;
  I.failure.clear();
  I.checked = 0;
  for (int lvl = 0; lvl < cfg.nmax && I.maps_ok; ++lvl) {
    for (auto& f : I.faces[size_t(lvl)]) {
      std::string why = detail::check_cech_map(I, lvl, lvl + 1, f, I.checked);
      if (!why.empty() && I.maps_ok) {
        I.maps_ok = false;
        I.failure = why;
      }
    }
    for (auto& s : I.degens[size_t(lvl)]) {
      std::string why = detail::check_cech_map(I, lvl + 1, lvl, s, I.checked);
      if (!why.empty() && I.maps_ok) {
        I.maps_ok = false;
        I.failure = why;
      }
    }
  }
  for (auto& L : I.levels)
    if (!L.exactified && I.maps_ok) {
      I.maps_ok = false;
      I.failure = "level monoid is not the exactification";
    }
  Cosimplicial<RingElem> C;
  C.nmax = cfg.nmax;
  C.generators = [&I](int lvl) {
    std::vector<RingElem> g;
    const Ring& R = I.levels[size_t(lvl)].ring.base.ring;
    for (int v = 0; v < R->nvars(); ++v) g.push_back(RingElem::var(R, v));
    return g;
  };
  C.face = [&I](int lvl, int j, const RingElem& a) {
    return apply_cech_map(I.faces[size_t(lvl)][size_t(j)], a, I.levels[size_t(lvl + 1)].ring.base.ring);
  };
  C.degeneracy = [&I](int lvl, int j, const RingElem& a) {
    return apply_cech_map(I.degens[size_t(lvl - 1)][size_t(j)], a, I.levels[size_t(lvl - 1)].ring.base.ring);
  };
  C.equal = [](const RingElem& a, const RingElem& b) { return a == b; };
  I.identities = check_cosimplicial_identities(C);
  if (!I.identities.ok && I.failure.empty()) I.failure = "cosimplicial " + I.identities.failure;
}

// ---------------------------------------------------------------------------
// Associated complex on the windows, coefficients reduced mod p^k.

inline std::vector<Mono> cech_window(const CechInstance& I, int lvl) {
  const Ring& R = I.levels[size_t(lvl)].ring.base.ring;
  std::vector<int> vars(size_t(R->nvars()));
  std::iota(vars.begin(), vars.end(), 0);
  std::vector<int> bound;
  for (auto& g : R->trunc.gradings) bound.push_back(g.cap);
  return window_monomials(R, vars, bound);
}

struct CechComplex {
  CochainComplex X;
  std::vector<std::vector<Mono>> bases;
};

inline CechComplex cech_complex(const CechInstance& I, int k = 1) {
  CechComplex out;
  const int p = I.cfg.p;
  const int64_t m = ipow(p, k);
  std::vector<std::vector<std::string>> labels;
  std::vector<std::map<Mono, int>> index;
  for (int lvl = 0; lvl <= I.cfg.nmax; ++lvl) {
    out.bases.push_back(cech_window(I, lvl));
    const Ring& R = I.levels[size_t(lvl)].ring.base.ring;
    std::vector<std::string> lab;
    std::map<Mono, int> idx;
    for (size_t i = 0; i < out.bases.back().size(); ++i) {
      lab.push_back(RingElem::monomial(R, out.bases.back()[i]).to_string());
      idx[out.bases.back()[i]] = int(i);
    }
    labels.push_back(lab);
    index.push_back(idx);
  }
  std::vector<std::vector<SparseMat>> faces;
  for (int lvl = 0; lvl < I.cfg.nmax; ++lvl) {
    const Ring& RS = I.levels[size_t(lvl)].ring.base.ring;
    const Ring& RT = I.levels[size_t(lvl + 1)].ring.base.ring;
    std::vector<SparseMat> fs;
    for (auto& f : I.faces[size_t(lvl)]) {
      SparseMat F(int(out.bases[size_t(lvl + 1)].size()), int(out.bases[size_t(lvl)].size()), m);
      for (size_t c = 0; c < out.bases[size_t(lvl)].size(); ++c) {
        RingElem img = apply_cech_map(f, RingElem::monomial(RS, out.bases[size_t(lvl)][c]), RT);
        if (img.precision() < k) throw Error("TruncationLoss", "face image known only mod p^" + std::to_string(img.precision()));
        for (auto& [mono, cf] : img.terms()) {
          int64_t v = mod_norm(cf, m);
          if (!v) continue;
          auto it = index[size_t(lvl + 1)].find(mono);
          if (it == index[size_t(lvl + 1)].end()) throw Error("WindowNotStable", "face leaves the window");
          F.add(it->second, int(c), v);
        }
      }
      fs.push_back(F);
    }
    faces.push_back(fs);
  }
  out.X = associated_complex(p, k, labels, faces);
  return out;
}

// Coordinate window of R (basis x^a, a <= cap, or the constant for a point)
// against the degree-0 cohomology mod p: every expected monomial is a
// cocycle and the ranks agree.
struct CechH0Report {
  int rank = 0;
  std::vector<std::string> expected;
  std::vector<std::string> missing;  // expected vectors that are not cocycles
  bool ok = false;
};

inline CechH0Report cech_h0_vs_window(const CechInstance& I, const std::vector<int>& exponents) {
  CechH0Report rep;
  CechComplex C = cech_complex(I, 1);
  Cohomology H = cohomology(C.X, 0);
  rep.rank = H.total();
  const Ring& R = I.levels[0].ring.base.ring;
  std::map<Mono, int> idx;
  for (size_t i = 0; i < C.bases[0].size(); ++i) idx[C.bases[0][i]] = int(i);
  for (int a : exponents) {
    Mono m = mono_zero();
    if (!I.cfg.point) m[size_t(R->var_index("x0"))] = int16_t(a);
    std::string lab = RingElem::monomial(R, m).to_string();
    rep.expected.push_back(lab);
    auto it = idx.find(m);
    if (it == idx.end()) {
      rep.missing.push_back(lab);
      continue;
    }
    SparseVec v{{it->second, 1}};
    if (I.cfg.nmax >= 1 && !sp_apply(C.X.diff(0), v).empty()) rep.missing.push_back(lab);
  }
  rep.ok = rep.missing.empty() && rep.rank == int(exponents.size());
  return rep;
}

// ---------------------------------------------------------------------------
// Power map x -> x^e of the line, on every level of a prismatic instance:
// y_i -> ((x0 + p y_i)^e - x0^e)/p with the forced towers.

inline CechMap cech_power_map(const CechInstance& I, int lvl, int e) {
  if (I.cfg.mode != CechMode::Prismatic || I.cfg.point) throw Error("ConfigError", "power map needs a prismatic line");
  const CechLevel& L = I.levels[size_t(lvl)];
  const Ring& R = L.ring.base.ring;
  const int p = I.cfg.p;
  CechMap f;
  for (int i = 0; i <= lvl; ++i) f.theta.push_back(i);
  f.images.resize(size_t(R->nvars()));
  RingElem x0 = RingElem::var(R, "x0");
  auto tw = delta_tower_images(L.ring.base, x0.pow(e), I.cfg.depth);
  for (int k = 0; k <= I.cfg.depth; ++k) f.images[size_t(R->var_index(detail::tower_name("x0", k)))] = tw[size_t(k)];
  // built at raised precision: p^(j-1) may vanish mod p^n but not its delta
  DeltaRing H = with_delta_precision(L.ring.base, I.cfg.n + I.cfg.depth + e);
  RingElem xH = RingElem::var(H.ring, "x0");
  for (int i = 1; i <= lvl; ++i) {
    std::string y = "y" + std::to_string(i);
    RingElem yi = RingElem::var(H.ring, y), img = RingElem::zero(H.ring);
    for (int j = 1; j <= e; ++j)
      img = img + (xH.pow(e - j) * yi.pow(j)).scale(int64_t(binom_exact(e, j)) * ipow(p, j - 1));
    auto ty = detail::lifted_tower(H, img, I.cfg.depth, R);
    for (int k = 0; k <= I.cfg.depth; ++k) f.images[size_t(R->var_index(detail::tower_name(y, k)))] = ty[size_t(k)];
  }
  return f;
}

// F^{n+1} d_j = d_j F^n on generators of every level.
inline IdentityReport cech_functoriality(const CechInstance& I, int e) {
  IdentityReport rep;
  std::vector<CechMap> F;
  for (int lvl = 0; lvl <= I.cfg.nmax; ++lvl) F.push_back(cech_power_map(I, lvl, e));
  for (int lvl = 0; lvl < I.cfg.nmax; ++lvl) {
    const Ring& RS = I.levels[size_t(lvl)].ring.base.ring;
    const Ring& RT = I.levels[size_t(lvl + 1)].ring.base.ring;
    for (size_t j = 0; j < I.faces[size_t(lvl)].size(); ++j)
      for (int v = 0; v < RS->nvars(); ++v) {
        ++rep.checked;
        RingElem g = RingElem::var(RS, v);
        RingElem a = apply_cech_map(F[size_t(lvl + 1)], apply_cech_map(I.faces[size_t(lvl)][j], g, RT), RT);
        RingElem b = apply_cech_map(I.faces[size_t(lvl)][j], apply_cech_map(F[size_t(lvl)], g, RS), RT);
        if (!(a == b)) {
          rep.ok = false;
          rep.failure = "power map vs face n=" + std::to_string(lvl) + " j=" + std::to_string(j) + " at " + RS->vars[size_t(v)].name;
          return rep;
        }
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Weak finality: a map from level 0 to a probe, chosen on the monoid
// generator, then the ring generator, then the forced towers.

struct Probe {
  DeltaLogRing target;
  RingElem d;                              // the probe's ideal generator
  std::map<std::string, RingElem> images;  // chart generator -> image ("x0")
  std::optional<IVec> monoid_image;        // log mode: image of e_0 in the probe monoid
};

struct ProbeCertificate {
  bool ok = false;
  std::vector<RingElem> images;  // of the level-0 variables
  std::vector<std::string> steps;
  std::string failure;
};

inline ProbeCertificate weakly_final_probe(const CechInstance& I, const Probe& P) {
  ProbeCertificate cert;
  const CechLevel& L0 = I.levels[0];
  const Ring& RS = L0.ring.base.ring;
  const Ring& RT = P.target.base.ring;
  const int depth = I.cfg.depth;
  cert.images.assign(size_t(RS->nvars()), RingElem::zero(RT));
  std::vector<bool> set(size_t(RS->nvars()), false);
  auto blocked = [](const std::string& g, const std::string& why) { throw Error("ProbeFailure", g + ": " + why); };
  auto put = [&](const std::string& v, const RingElem& x) {
    cert.images[size_t(RS->var_index(v))] = x;
    set[size_t(RS->var_index(v))] = true;
  };
  auto tower = [&](const std::string& v, const RingElem& x) {
    std::vector<RingElem> tw;
    try {
      tw = delta_tower_images(P.target.base, x, depth);
    } catch (const Error& e) {
      blocked(v, std::string("tower not determined in the probe window (") + e.what() + ")");
    }
    for (int k = 0; k <= depth; ++k) put(detail::tower_name(v, k), tw[size_t(k)]);
  };
  // base variables go to the variables of the same name
  for (int v = 0; v < RS->nvars(); ++v) {
    const std::string& nm = RS->vars[size_t(v)].name;
    if (nm != "t") continue;
    if (!RT->has_var(nm)) blocked(nm, "probe has no base variable " + nm);
    put(nm, RingElem::var(RT, nm));
    cert.steps.push_back("base " + nm);
  }
  if (!I.cfg.point) {
    if (I.cfg.mode == CechMode::Log) {
      if (!P.monoid_image) blocked("e0", "no monoid image");
      LogValue lv;
      try {
        lv = log_value(P.target, *P.monoid_image);
      } catch (const Error&) {
        blocked("e0", "image not in the probe monoid");
      }
      put("x0", lv.alpha);
      cert.steps.push_back("monoid e0 -> " + vec_string(*P.monoid_image));
      auto it = P.images.find("x0");
      if (it != P.images.end() && !(it->second == lv.alpha)) blocked("x0", "ring image disagrees with alpha");
      cert.steps.push_back("ring x0 forced by alpha");
      // the probe's dlog is known mod p^n only, so its tower loses precision
      std::vector<RingElem> tw{lv.dlog};
      try {
        for (int k = 0; k < depth; ++k) tw.push_back(delta_eval(P.target.base, tw.back()));
      } catch (const Error& e) {
        blocked("v0", e.what());
      }
      for (int k = 0; k <= depth; ++k) put("v" + std::to_string(k), tw[size_t(k)]);
      cert.steps.push_back("dlog tower forced");
    } else {
      auto it = P.images.find("x0");
      if (it == P.images.end()) blocked("x0", "no image given");
      tower("x0", it->second);
      cert.steps.push_back("ring x0 -> " + it->second.to_string());
      cert.steps.push_back("delta tower forced");
    }
  }
  for (int v = 0; v < RS->nvars(); ++v)
    if (!set[size_t(v)]) blocked(RS->vars[size_t(v)].name, "no admissible image");
  // certificate: delta-map on generators, log compatibility, d -> (d_probe)
  CechMap f;
  f.theta = {0};
  f.images = cert.images;
  for (int v = 0; v < RS->nvars(); ++v) {
    const auto& dv = L0.ring.base.delta_on_gens[size_t(v)];
    if (!dv) continue;
    RingElem lhs = apply_cech_map(f, *dv, RT);
    RingElem rhs = delta_eval(P.target.base, f.images[size_t(v)]);
    if (!(lhs == rhs)) blocked(RS->vars[size_t(v)].name, "not a delta-map");
  }
  RingElem fd = apply_cech_map(f, I.d(0), RT);
  if (!(fd == P.d)) try {
      divide_exact(fd, P.d);
    } catch (const Error&) {
      blocked("d", "d does not map into the probe ideal");
    }
  cert.steps.push_back("triangle verified");
  cert.ok = true;
  return cert;
}

}  // namespace logprism
