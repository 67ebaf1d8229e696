#include <gtest/gtest.h>

#include <random>

#include "logprism/monoids.hpp"

using namespace logprism;

namespace {

// Exhaustive oracle: all combinations with coefficients <= B (no units).
bool oracle_member(const Monoid& M, const IVec& v, int B) {
  const size_t g = M.gens.size();
  IVec c(g, 0);
  while (true) {
    IVec s(M.rank, 0);
    for (size_t i = 0; i < g; ++i) s = vadd(s, vscale(c[i], M.gens[i]));
    if (s == v) return true;
    size_t i = 0;
    while (i < g && ++c[i] > B) c[i++] = 0;
    if (i == g) return false;
  }
}

ZMat cols(std::vector<IVec> c, int r) { return ZMat::from_columns(c, r); }

// Equational integrality criterion specialised to maps between free monoids,
// written directly on coordinates.
bool oracle_integral_free(const MonoidMap& h, int B) {
  const int kM = h.src.rank, kN = h.dst.rank;
  auto box = [](int k, int B) {
    std::vector<IVec> out;
    IVec a(k, 0);
    while (true) {
      out.push_back(a);
      int i = 0;
      while (i < k && ++a[i] > B) a[i++] = 0;
      if (i == k) break;
    }
    return out;
  };
  auto nonneg = [](const IVec& v) { return std::all_of(v.begin(), v.end(), [](int64_t x) { return x >= 0; }); };
  auto Ms = box(kM, B), Ns = box(kN, B);
  for (auto& m1 : Ms)
    for (auto& m2 : Ms)
      for (auto& n1 : Ns) {
        IVec n2 = vsub(vadd(h(m1), n1), h(m2));
        if (!nonneg(n2)) continue;
        bool ok = false;
        for (auto& m3 : Ms) {
          IVec m4 = vsub(vadd(m1, m3), m2);
          if (nonneg(m4) && nonneg(vsub(n1, h(m3)))) {
            ok = true;
            break;
          }
        }
        if (!ok) return false;
      }
  return true;
}

}  // namespace

TEST(Member, SpecExamples) {
  Monoid M = make_monoid(2, {{1, 1}, {1, 0}});
  auto r = member(M, {2, 1}, 10);
  ASSERT_EQ(r.verdict, Verdict::True);
  EXPECT_EQ(evaluate(M, r), (IVec{2, 1}));
  EXPECT_EQ(member(make_monoid(1, {{2}, {3}}), {1}, 10).verdict, Verdict::False);
  EXPECT_EQ(member(free_monoid(2), {-1, 0}, 1).verdict, Verdict::False);
}

TEST(Member, WithUnits) {
  // Z x N
  Monoid M = make_monoid(2, {{0, 1}}, {{1, 0}});
  auto r = member(M, {-5, 2}, 4);
  ASSERT_EQ(r.verdict, Verdict::True);
  EXPECT_EQ(evaluate(M, r), (IVec{-5, 2}));
  EXPECT_EQ(member(M, {3, -1}, 4).verdict, Verdict::False);
}

TEST(Member, AgreesWithExhaustiveOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int k = 1 + int(rng() % 3), g = 1 + int(rng() % 3);
    std::vector<IVec> gens;
    for (int i = 0; i < g; ++i) {
      IVec v(k);
      for (auto& e : v) e = int64_t(rng() % 4);
      if (is_zero_vec(v)) v[0] = 1;
      gens.push_back(v);
    }
    Monoid M = make_monoid(k, gens);
    for (int t = 0; t < 30; ++t) {
      IVec v(k);
      for (auto& e : v) e = int64_t(rng() % 8) - 1;
      auto r = member(M, v, 12);
      ASSERT_NE(r.verdict, Verdict::Unknown);
      EXPECT_EQ(r.verdict == Verdict::True, oracle_member(M, v, 12)) << vec_string(v);
      if (r.verdict == Verdict::True) EXPECT_EQ(evaluate(M, r), v);
    }
  }
}

TEST(Member, DimensionMismatchThrows) { EXPECT_THROW(member(free_monoid(2), {1}, 3), Error); }

TEST(Groupify, Examples) {
  EXPECT_EQ(groupify(free_monoid(2)).basis, (std::vector<IVec>{{1, 0}, {0, 1}}));
  EXPECT_EQ(groupify(make_monoid(2, {{1, 1}})).basis, (std::vector<IVec>{{1, 1}}));
  EXPECT_EQ(groupify(make_monoid(1, {{2}, {3}})).basis, (std::vector<IVec>{{1}}));
}

TEST(Exact, Examples) {
  EXPECT_EQ(is_exact(catalog_map("identity-N").map, 4), Verdict::True);
  EXPECT_EQ(is_exact(catalog_map("semistable").map, 4), Verdict::True);
  EXPECT_EQ(is_exact(catalog_map("sum").map, 4), Verdict::False);
}

TEST(FrobeniusPushout, TrivialSourceGivesMultiplicationByP) {
  for (int p : {2, 3, 5}) {
    auto fp = frobenius_pushout(catalog_map("trivial-to-N").map, p);
    EXPECT_EQ(fp.Q1.rank, 1);
    EXPECT_EQ(fp.relfrob.map, ZMat::scalar(1, p));
  }
}

TEST(FrobeniusPushout, DiagonalImageIsCongruenceClass) {
  for (int p : {2, 3}) {
    auto fp = frobenius_pushout(catalog_map("semistable").map, p);
    // image of relfrob within the box [0, 3p]^2, enumerated from Q1 elements
    std::set<IVec> image;
    auto phi = positive_grading(fp.Q1);
    ASSERT_TRUE(phi.has_value());
    for (auto& x : elements_up_to(fp.Q1, *phi, 6 * p)) {
      IVec y = fp.relfrob(x);
      if (y[0] <= 3 * p && y[1] <= 3 * p) image.insert(y);
    }
    std::set<IVec> expect;
    for (int a = 0; a <= 3 * p; ++a)
      for (int b = 0; b <= 3 * p; ++b)
        if ((a - b) % p == 0) expect.insert({a, b});
    EXPECT_EQ(image, expect) << "p=" << p;
  }
}

TEST(FrobeniusPushout, RejectsNonInjective) {
  EXPECT_THROW(frobenius_pushout(catalog_map("sum").map, 2), Error);
}

TEST(CartierType, Examples) {
  for (int p : {2, 3}) {
    EXPECT_EQ(is_cartier_type(catalog_map("semistable").map, p, 3), Verdict::True);
    EXPECT_EQ(is_cartier_type(catalog_map("trivial-to-N").map, p, 3), Verdict::True);
    EXPECT_EQ(is_cartier_type(catalog_map("identity-N").map, p, 3), Verdict::True);
  }
  // multiplication by 2: the pushout <p, 2> is not saturated
  EXPECT_EQ(is_cartier_type(catalog_map("times-2").map, 2, 3), Verdict::False);
  EXPECT_EQ(is_cartier_type(catalog_map("times-2").map, 3, 3), Verdict::False);
}

TEST(CartierType, InvariantUnderRepresentation) {
  // N^2 presented with a redundant generator and with swapped coordinates
  Monoid N = free_monoid(1);
  Monoid Q2 = make_monoid(2, {{1, 0}, {0, 1}, {1, 1}});
  auto h1 = make_map(N, Q2, cols({{1, 1}}, 2));
  auto h2 = catalog_map("semistable").map;
  Monoid Q3 = make_monoid(2, {{0, 1}, {1, 0}});
  auto h3 = make_map(N, Q3, cols({{1, 1}}, 2));
  for (int p : {2, 3}) {
    Verdict v = is_cartier_type(h2, p, 3);
    EXPECT_EQ(is_cartier_type(h1, p, 3), v);
    EXPECT_EQ(is_cartier_type(h3, p, 3), v);
  }
}

TEST(Integral, Examples) {
  EXPECT_EQ(is_integral(catalog_map("semistable").map, 5), Verdict::True);
  EXPECT_EQ(is_integral(catalog_map("identity-N").map, 5), Verdict::True);
  Monoid V = make_monoid(1, {{1}}, {}, true);
  EXPECT_EQ(is_integral(make_map(V, free_monoid(2), cols({{1, 2}}, 2)), 1), Verdict::True);
}

TEST(Integral, AgreesWithCoordinateOracle) {
  Monoid N = free_monoid(1), N2 = free_monoid(2);
  std::vector<MonoidMap> maps = {
      catalog_map("semistable").map,     catalog_map("identity-N").map,  catalog_map("factor-inclusion").map,
      catalog_map("times-2").map,        catalog_map("weighted-node").map, catalog_map("identity-N2").map,
      make_map(N2, N2, cols({{1, 0}, {1, 1}}, 2)),  // not integral
      make_map(N2, N2, cols({{2, 0}, {0, 1}}, 2)),
  };
  for (auto& h : maps) {
    bool o = oracle_integral_free(h, 4);
    EXPECT_EQ(is_integral(h, 4), o ? Verdict::True : Verdict::False);
  }
  EXPECT_EQ(is_integral(maps[6], 4), Verdict::False);
}

TEST(Exactify, SumMap) {
  auto h = catalog_map("sum").map;
  Monoid Mp = exactify(h);
  EXPECT_EQ(Mp.units, (std::vector<IVec>{{1, -1}}));
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      EXPECT_EQ(member(Mp, {a, b}, 16).verdict == Verdict::True, a + b >= 0);
  auto hp = make_map(Mp, h.dst, h.map);
  EXPECT_EQ(is_exact(hp, 3), Verdict::True);
}

TEST(Exactify, AlreadyExactIsUnchanged) {
  auto h = catalog_map("identity-N").map;
  Monoid Mp = exactify(h);
  EXPECT_EQ(Mp.gens, h.src.gens);
  EXPECT_TRUE(Mp.units.empty());
  Monoid Nred = make_monoid(1, {{1}, {2}, {3}});
  auto h2 = make_map(free_monoid(1), Nred, ZMat::identity(1));
  EXPECT_EQ(exactify(h2).gens, (std::vector<IVec>{{1}}));
}

TEST(Exactify, RequiresSurjection) {
  EXPECT_THROW(exactify(catalog_map("times-2").map), Error);
  EXPECT_THROW(exactify(catalog_map("semistable").map), Error);
}

TEST(Exactify, ExactOnSurjectiveCatalogMaps) {
  for (auto& e : monoid_catalog()) {
    if (!(image_lattice(e.map) == groupify(e.map.dst))) continue;
    Monoid Mp = exactify(e.map);
    auto hp = make_map(Mp, e.map.dst, e.map.map);
    EXPECT_EQ(is_exact(hp, 3), Verdict::True) << e.name;
  }
}

TEST(ChartReport, Examples) {
  auto r1 = chart_report(catalog_map("factor-inclusion").map, 2, 4);
  EXPECT_EQ(r1.integral, Verdict::True);
  EXPECT_TRUE(r1.injective);
  EXPECT_EQ(r1.torsion, 1);

  auto r2 = chart_report(catalog_map("semistable").map, 3, 4);
  EXPECT_EQ(r2.integral, Verdict::True);
  EXPECT_EQ(r2.torsion, 1);
  EXPECT_EQ(cokernel_grading(catalog_map("semistable").map).rank(), 1);

  auto r3 = chart_report(catalog_map("times-2").map, 2, 4);
  EXPECT_TRUE(r3.injective);
  EXPECT_EQ(r3.torsion, 2);
  EXPECT_FALSE(r3.torsion_coprime_to_p);
  EXPECT_FALSE(r3.smooth_chart);
  EXPECT_EQ(r3.etale, "not checked");
}

TEST(Catalog, HasTenMaps) { EXPECT_GE(monoid_catalog().size(), 10u); }

TEST(Lattice, KernelAndSolve) {
  ZMat A(2, 3);
  A.at(0, 0) = 2, A.at(0, 1) = 4, A.at(0, 2) = 6;
  A.at(1, 0) = 1, A.at(1, 1) = 1, A.at(1, 2) = 1;
  auto K = kernel_z(A);
  ASSERT_EQ(K.size(), 1u);
  EXPECT_TRUE(is_zero_vec(A(K[0])));
  auto x = solve_z(A, {4, 2});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(A(*x), (IVec{4, 2}));
  EXPECT_FALSE(solve_z(A, {1, 0}).has_value());
  EXPECT_EQ(invariant_factors(A), (std::vector<int64_t>{1, 2}));
}
