#pragma once

// Named instances for the command line, and the invariant suites it runs.

#include <random>

#include "appxb.hpp"
#include "cechalex.hpp"
#include "qderham.hpp"

namespace logprism {

struct CatalogEntry {
  std::string name;
  std::string kind;  // base, chart, cech, monoid-map
  std::string description;
  std::string anchor;
  std::vector<std::pair<std::string, std::string>> fields;
};

inline std::vector<CatalogEntry> instance_catalog() {
  std::vector<CatalogEntry> out = {
      {"crystalline", "base", "Z/p^n with d = p", "A = Z_p, I = (p), φ the identity", {{"d", "p"}}},
      {"breuil-kisin", "base", "Z/p^n[u]/u^(cap+1) with d = E(u), default E = u - p",
       "A = Z_p[[u]], φ sending u to u^p, I = (E(u)) with E Eisenstein", {{"d", "E(u)"}}},
      {"qdr", "base", "Z/p^n[t]/t^(cap+1), t = q - 1, d = [p]_q",
       "A = Z_p[[q-1]], φ sending q to q^p, I = ([p]_q)", {{"d", "[p]_q"}}},
      {"universal-oriented", "base", "free delta-ring on d with delta(d) a unit, log generator x",
       "δ-ring Z_p{d, δ(d)^-1} with I = (d)", {{"d", "d"}}},
      {"affine-line", "cech", "Cech nerve of the line over the crystalline base: x_i = x0 + p y_i",
       "R = (A/I)[x] with trivial log structure, cover by the free δ-ring on x", {{"chart", "trivial"}}},
      {"affine-line-crys", "cech", "delta-PD nerve of the line: x_i = x0 + z_i, divided powers on z_i",
       "δ-PD envelopes of the diagonal of F_p[x]", {{"chart", "trivial"}}},
      {"point-crys", "cech", "constant nerve of R = A/I", "R = A/I, every level equal to A", {{"chart", "none"}}},
      {"log-affine-line", "chart", "q-de Rham chart Z_p[[q-1]][x] with N -> x; also the log Cech nerve",
       "log structure N → R sending 1 to x", {{"chart", "N → N"}, {"monoid-map", "trivial-to-N"}}},
      {"semistable-node", "chart", "Z_p[[q-1]][x,y]/(xy) over N -> 0",
       "R = (A/I)[x,y]/(xy) relative to the log point", {{"chart", "N →diag N²"}, {"monoid-map", "semistable"}}},
      {"log-plane", "chart", "Z_p[[q-1]][x,y] with log N^2", "log structure N² → R on both coordinates",
       {{"chart", "N² → N²"}, {"monoid-map", "identity-N2"}}},
      {"empty-S", "chart", "no log coordinates", "complex concentrated in degree 0", {{"chart", "none"}}},
  };
  for (auto& m : monoid_catalog()) {
    std::string rows;
    for (int j = 0; j < m.map.map.cols; ++j) {
      IVec c;
      for (int i = 0; i < m.map.map.rows; ++i) c.push_back(m.map.map.at(i, j));
      rows += (j ? " " : "") + vec_string(c);
    }
    out.push_back({m.name, "monoid-map", m.description, "monoid chart " + m.description,
                   {{"source-rank", std::to_string(m.map.src.rank)}, {"target-rank", std::to_string(m.map.dst.rank)},
                    {"columns", rows.empty() ? "()" : rows}}});
  }
  return out;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  static const auto cat = instance_catalog();
  for (auto& e : cat)
    if (e.name == name) return e;
  throw Error("UnknownInstance", name.empty() ? "empty instance name" : name);
}

// ---------------------------------------------------------------------------
// Suites

// Random element in the variables carrying a delta.
inline RingElem random_delta_elem(const DeltaRing& D, std::mt19937_64& rng, int nterms, int maxexp) {
  const Ring& R = D.ring;
  std::vector<int> vs;
  for (int i = 0; i < R->nvars(); ++i)
    if (D.delta_on_gens[size_t(i)]) vs.push_back(i);
  RingElem e = RingElem::zero(R);
  const int64_t mod = R->coeff.modulus();
  if (vs.empty()) return RingElem::constant(R, int64_t(rng() % uint64_t(mod)));
  for (int t = 0; t < nterms; ++t) {
    Mono m = mono_zero();
    m[size_t(vs[rng() % vs.size()])] = int16_t(rng() % uint64_t(maxexp + 1));
    if (rng() % 2) m[size_t(vs[rng() % vs.size()])] += 1;
    e = e + RingElem::monomial(R, m, int64_t(rng() % uint64_t(mod)));
  }
  return e;
}

inline DeltaRing two_generator_delta_ring(int p, int n, int depth, int cap) {
  DeltaRing D = base_delta_ring(p, n, {}, {{"deg", {}, cap}}, depth);
  D = free_delta_adjoin(D, "x", depth, {1});
  return free_delta_adjoin(D, "y", depth, {1});
}

struct DeltaSuiteReport {
  int p = 2, n = 2, depth = 1, cap = 0, trials = 0;
  int phi_additive = 0, phi_multiplicative = 0, frobenius_mod_p = 0, w2_additive = 0, w2_multiplicative = 0;  // failures
  bool ok() const { return !(phi_additive || phi_multiplicative || frobenius_mod_p || w2_additive || w2_multiplicative); }
};

inline DeltaSuiteReport delta_suite(const DeltaRing& D, int trials, uint64_t seed = 1) {
  DeltaSuiteReport r;
  r.p = D.ring->p();
  r.n = D.ring->n();
  r.depth = D.ring->trunc.delta_depth;
  r.cap = D.ring->trunc.gradings.empty() ? 0 : D.ring->trunc.gradings[0].cap;
  r.trials = trials;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    auto x = random_delta_elem(D, rng, 3, 2), y = random_delta_elem(D, rng, 3, 2);
    auto c = check_pair(D, x, y);
    r.phi_additive += !c.phi_additive;
    r.phi_multiplicative += !c.phi_multiplicative;
    r.frobenius_mod_p += !c.frobenius_mod_p;
    r.w2_additive += !c.w2_additive;
    r.w2_multiplicative += !c.w2_multiplicative;
  }
  return r;
}

struct MonoidSuiteReport {
  std::string instance;
  int p = 2, bound = 4;
  Verdict integral = Verdict::Unknown, exact = Verdict::Unknown, cartier = Verdict::Unknown;
  ChartReport chart;
  std::string inconsistency;
  bool ok() const {
    return inconsistency.empty() && integral != Verdict::Unknown && exact != Verdict::Unknown && cartier != Verdict::Unknown;
  }
};

inline MonoidSuiteReport monoid_suite(const NamedMap& m, int p, int bound) {
  MonoidSuiteReport r;
  r.instance = m.name;
  r.p = p;
  r.bound = bound;
  r.integral = is_integral(m.map, bound);
  r.exact = is_exact(m.map, bound);
  r.cartier = is_cartier_type(m.map, p, bound);
  r.chart = chart_report(m.map, p, bound);
  if (r.cartier == Verdict::True && r.integral != Verdict::True) r.inconsistency = "Cartier type without integrality";
  if (r.chart.integral != r.integral || r.chart.exact_at_origin != r.exact) r.inconsistency = "chart report disagrees";
  return r;
}

inline PrismKind prism_kind(const std::string& name) {
  if (name == "crystalline") return PrismKind::Crystalline;
  if (name == "breuil-kisin") return PrismKind::BreuilKisin;
  if (name == "qdr") return PrismKind::QdR;
  if (name == "universal-oriented") return PrismKind::UniversalOriented;
  throw Error("UnknownInstance", name.empty() ? "empty instance name" : name + " is not a base prism");
}

// Cech instances by catalog name.
inline CechConfig cech_config(const std::string& name, CechConfig c) {
  if (name == "affine-line") {
    c.mode = CechMode::Prismatic;
  } else if (name == "affine-line-crys") {
    c.mode = CechMode::DeltaCrys;
  } else if (name == "point-crys") {
    c.mode = CechMode::DeltaCrys;
    c.point = true;
  } else if (name == "log-affine-line") {
    c.mode = CechMode::Log;
  } else {
    throw Error("UnknownInstance", name.empty() ? "empty instance name" : name + " has no Cech nerve");
  }
  return c;
}

}  // namespace logprism
