#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logprism/coeffring.hpp"

namespace logprism {

// Coefficient of the monomial g, as a constant: an additive functional used to
// inject a deliberately broken delta for validation runs.
struct DeltaFault {
  Mono g;
};

// A delta-structure on a truncated ring, given by delta on each variable.
// A missing entry marks the top of a free tower (window edge).
struct DeltaRing {
  Ring ring;
  std::vector<std::optional<RingElem>> delta_on_gens;
  std::optional<DeltaFault> fault;

  // phi(var)^e memo; shared so copies of the structure reuse it
  std::shared_ptr<std::map<std::pair<int, int>, RingElem>> cache =
      std::make_shared<std::map<std::pair<int, int>, RingElem>>();
};

inline DeltaRing make_delta_ring(const Ring& R, const std::map<std::string, RingElem>& deltas) {
  DeltaRing D{R, std::vector<std::optional<RingElem>>(R->nvars()), std::nullopt};
  for (auto& [name, d] : deltas) {
    int i = R->var_index(name);
    RingElem::check_same(RingElem::zero(R), d);
    // phi must not lower degrees, otherwise the truncation is not phi-stable
    for (size_t g = 0; g < R->trunc.gradings.size(); ++g) {
      int w = R->trunc.gradings[g].weights[i];
      if (!d.is_zero() && d.min_degree(int(g)) < w)
        throw Error("ConfigError", "delta(" + name + ") has degree below " + name);
    }
    D.delta_on_gens[i] = d;
  }
  return D;
}

// Integer lift with centred representatives, into a ring of the same layout
// and a possibly different precision.
inline RingElem lift_to(const RingElem& x, const Ring& target) {
  const int64_t m = x.modulus();
  Terms t;
  for (auto& [mono, c] : x.terms()) t.emplace_back(mono, c > m / 2 ? c - m : c);
  int prec = x.precision() == x.ring()->n() ? target->n() : x.precision();
  return RingElem::from_terms(target, t, prec).with_window(x.window());
}

inline RingElem phi_var_power(const DeltaRing& D, int i, int e);

inline RingElem phi_var(const DeltaRing& D, int i) {
  const auto& v = D.ring->vars[i];
  if (!D.delta_on_gens[i]) throw Error("DepthExhausted", "delta(" + v.name + ") is beyond the tower");
  const int p = D.ring->p();
  RingElem x = RingElem::var(D.ring, i);
  return x.pow(p) + D.delta_on_gens[i]->times_p();
}

// phi(gamma_e(z)) = sum_j [(pj)!/j!] gamma_{pj}(z) [p^{e-j}/(e-j)!] delta(z)^{e-j}
inline RingElem phi_divided_power(const DeltaRing& D, int i, int e) {
  if (!D.delta_on_gens[i]) throw Error("DepthExhausted", "delta(" + D.ring->vars[i].name + ") is beyond the tower");
  const Ring& R = D.ring;
  const int p = R->p(), n = R->n();
  const int64_t m = R->coeff.modulus();
  const RingElem& dz = *D.delta_on_gens[i];
  RingElem out = RingElem::zero(R);
  for (int j = 0; j <= e; ++j) {
    int64_t c1 = fact_ratio_mod(p * j, j, m);
    int64_t c2 = p_pow_over_fact(p, e - j, n);
    int64_t c = mul_mod(c1, c2, m);
    if (!c) continue;
    RingElem g = RingElem::var(R, i, p * j);
    out = out + (g * dz.pow(e - j)).scale(c);
  }
  return out;
}

inline RingElem phi_var_power(const DeltaRing& D, int i, int e) {
  auto key = std::make_pair(i, e);
  auto it = D.cache->find(key);
  if (it != D.cache->end()) return it->second;
  RingElem r;
  if (D.ring->vars[i].kind == VarKind::DividedPower)
    r = phi_divided_power(D, i, e);
  else if (e < 0)
    r = phi_var_power(D, i, -e).inverse();
  else if (e == 0)
    r = RingElem::constant(D.ring, 1);
  else if (e == 1)
    r = phi_var(D, i);
  else
    r = phi_var_power(D, i, e - 1) * phi_var_power(D, i, 1);
  D.cache->emplace(key, r);
  return r;
}

inline RingElem phi_mono(const DeltaRing& D, const Mono& m) {
  RingElem r = RingElem::constant(D.ring, 1);
  for (int i = 0; i < D.ring->nvars(); ++i)
    if (m[i]) r = r * phi_var_power(D, i, m[i]);
  return r;
}

// Frobenius lift; the identity on Z/p^n coefficients.
inline RingElem phi(const DeltaRing& D, const RingElem& x) {
  RingElem::check_same(RingElem::zero(D.ring), x);
  RingElem out = RingElem::zero(D.ring).with_prec(x.precision());
  for (auto& [m, c] : x.terms()) out = out + phi_mono(D, m).with_prec(x.precision()).scale(c);
  return out.with_window(x.window());
}

// delta(x) = (phi(x) - x^p)/p, one exponent of precision lost.
inline RingElem delta_eval(const DeltaRing& D, const RingElem& x) {
  if (x.precision() <= 1) throw Error("TruncationLoss", "delta needs precision at least 2");
  const int p = D.ring->p();
  RingElem diff = phi(D, x) - x.pow(p);
  RingElem d = divide_exact(diff, RingElem::constant(D.ring, p));
  if (D.fault) d = d + RingElem::constant(D.ring, x.coeff(D.fault->g));
  return d;
}

enum class ElementClass { Distinguished, Rank1, Neither, Unknown };

inline std::string to_string(ElementClass c) {
  switch (c) {
    case ElementClass::Distinguished: return "distinguished";
    case ElementClass::Rank1: return "rank1";
    case ElementClass::Neither: return "neither";
    default: return "unknown";
  }
}

inline ElementClass element_class(const DeltaRing& D, const RingElem& a) {
  if (a.precision() <= 1) return ElementClass::Unknown;
  RingElem d = delta_eval(D, a);
  for (int w : d.window())
    if (w < 0) return ElementClass::Unknown;
  if (d.is_zero()) return ElementClass::Rank1;
  if (d.is_unit()) return ElementClass::Distinguished;
  return ElementClass::Neither;
}

// roots[0] = a, roots[i]^p = roots[i-1]. Checks delta(a) in p^{len} A where
// len = roots.size() - 1.
inline bool rank1_by_roots(const DeltaRing& D, const RingElem& a, const std::vector<RingElem>& roots) {
  if (roots.size() < 2) throw Error("ContractViolation", "rank1_by_roots needs at least one p-th root");
  const int p = D.ring->p();
  if (!(roots[0] == a)) throw Error("NotARootTower", "roots[0] differs from a");
  for (size_t i = 1; i < roots.size(); ++i)
    if (!(roots[i].pow(p) == roots[i - 1])) throw Error("NotARootTower", "level " + std::to_string(i));
  RingElem d = delta_eval(D, a);
  int len = int(roots.size()) - 1;
  int64_t pl = ipow(p, std::min(len, d.precision()));
  for (auto& [m, c] : d.terms())
    if (c % pl) return false;
  return true;
}

// Length-2 Witt vectors.
struct W2Elem {
  RingElem w0, w1;
};

inline RingElem witt_sum_carry(const RingElem& a, const RingElem& b, int p) {
  const Ring& R = a.ring();
  RingElem s = RingElem::zero(R);
  for (int i = 1; i < p; ++i)
    s = s + (a.pow(i) * b.pow(p - i)).scale(int64_t(binom_exact(p, i) / p));
  return s;
}

inline W2Elem operator+(const W2Elem& a, const W2Elem& b) {
  const int p = a.w0.ring()->p();
  return {a.w0 + b.w0, a.w1 + b.w1 - witt_sum_carry(a.w0, b.w0, p)};
}

inline W2Elem operator*(const W2Elem& a, const W2Elem& b) {
  const int p = a.w0.ring()->p();
  return {a.w0 * b.w0, a.w0.pow(p) * b.w1 + b.w0.pow(p) * a.w1 + (a.w1 * b.w1).times_p()};
}

inline bool operator==(const W2Elem& a, const W2Elem& b) { return a.w0 == b.w0 && a.w1 == b.w1; }

inline W2Elem w2_section(const DeltaRing& D, const RingElem& x) { return {x, delta_eval(D, x)}; }

// Ring with extra variables appended; existing gradings get the given weights.
inline Ring extend_ring(const Ring& R, const std::vector<Var>& vars, const std::vector<std::vector<int>>& weights) {
  std::vector<Var> all = R->vars;
  all.insert(all.end(), vars.begin(), vars.end());
  std::vector<Grading> gs = R->trunc.gradings;
  for (size_t g = 0; g < gs.size(); ++g)
    for (size_t j = 0; j < vars.size(); ++j) gs[g].weights.push_back(weights[j][g]);
  return make_ring(R->p(), R->n(), all, gs, R->trunc.delta_depth);
}

// Same terms in a ring whose variable list extends ours.
inline RingElem embed(const RingElem& x, const Ring& bigger) {
  RingElem r = RingElem::from_terms(bigger, x.terms(), x.precision());
  return r.with_window(x.window());
}

// Adjoins var, var_1, ..., var_depth with delta(var_i) = var_{i+1}; the top
// variable has no delta. Tower weights are base weight times p^i.
inline DeltaRing free_delta_adjoin(const DeltaRing& D, const std::string& name, int depth, const std::vector<int>& weight) {
  if (depth > D.ring->trunc.delta_depth)
    throw Error("DepthExhausted", "adjoining depth " + std::to_string(depth) + " beyond the window");
  const int p = D.ring->p();
  std::vector<Var> vars;
  std::vector<std::vector<int>> ws;
  for (int i = 0; i <= depth; ++i) {
    vars.push_back({i ? name + "_" + std::to_string(i) : name, VarKind::Poly});
    std::vector<int> w = weight;
    for (auto& x : w) x *= int(ipow(p, i));
    ws.push_back(w);
  }
  Ring R2 = extend_ring(D.ring, vars, ws);
  DeltaRing E{R2, {}, D.fault};
  for (auto& d : D.delta_on_gens) E.delta_on_gens.push_back(d ? std::optional<RingElem>(embed(*d, R2)) : std::nullopt);
  const int base = D.ring->nvars();
  for (int i = 0; i <= depth; ++i)
    E.delta_on_gens.push_back(i < depth ? std::optional<RingElem>(RingElem::var(R2, base + i + 1)) : std::nullopt);
  return E;
}

inline DeltaRing base_delta_ring(int p, int n, std::vector<Var> vars, std::vector<Grading> gradings, int delta_depth) {
  Ring R = make_ring(p, n, std::move(vars), std::move(gradings), delta_depth);
  return DeltaRing{R, std::vector<std::optional<RingElem>>(R->nvars()), std::nullopt};
}

// Free delta-ring on one variable: Z/p^n{x} truncated at tower depth and a
// single weighted grading.
inline DeltaRing free_delta_ring(int p, int n, int depth, int cap, const std::string& name = "x") {
  DeltaRing D = base_delta_ring(p, n, {}, {{"deg", {}, cap}}, depth);
  return free_delta_adjoin(D, name, depth, {1});
}

// Same structure at a different p-adic precision (centred lifts of the deltas).
inline DeltaRing with_delta_precision(const DeltaRing& D, int n) {
  Ring R = with_precision(D.ring, n);
  DeltaRing E{R, {}, D.fault};
  for (auto& d : D.delta_on_gens) E.delta_on_gens.push_back(d ? std::optional<RingElem>(lift_to(*d, R)) : std::nullopt);
  return E;
}

// Validation of the structure on supplied samples: phi additive and
// multiplicative, phi = Frobenius mod p, and the W2 section a homomorphism.
struct DeltaCheck {
  bool phi_additive = true, phi_multiplicative = true, frobenius_mod_p = true, w2_additive = true, w2_multiplicative = true;
  bool ok() const { return phi_additive && phi_multiplicative && frobenius_mod_p && w2_additive && w2_multiplicative; }
};

inline DeltaCheck check_pair(const DeltaRing& D, const RingElem& x, const RingElem& y) {
  DeltaCheck c;
  const int p = D.ring->p();
  c.phi_additive = phi(D, x + y) == phi(D, x) + phi(D, y);
  c.phi_multiplicative = phi(D, x * y) == phi(D, x) * phi(D, y);
  c.frobenius_mod_p = (phi(D, x) - x.pow(p)).with_prec(1).is_zero();
  auto wx = w2_section(D, x), wy = w2_section(D, y);
  c.w2_additive = w2_section(D, x + y) == wx + wy;
  c.w2_multiplicative = w2_section(D, x * y) == wx * wy;
  return c;
}

}  // namespace logprism
