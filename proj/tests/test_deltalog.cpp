#include <gtest/gtest.h>

#include "logprism/deltalog.hpp"

using namespace logprism;

namespace {

RingElem one(const Ring& R) { return RingElem::constant(R, 1); }

// ((1 + p y)^k - 1)/p = sum_{j>=1} C(k,j) p^{j-1} y^j
RingElem dlog_power_oracle(const RingElem& y, int k) {
  RingElem s = RingElem::zero(y.ring());
  for (int j = 1; j <= k; ++j) s = s + y.pow(j).times_p(j - 1).scale(int64_t(binom_exact(k, j)));
  return s;
}

// Free delta-ring on t (tower t, t_1) with the log generator x on top.
DeltaLogRing log_line_with_t(int p, int n) {
  DeltaRing D = base_delta_ring(p, n, {}, {{"x", {}, 3 * p}, {"y", {}, 2 * p}}, 2);
  D = free_delta_adjoin(D, "t", 1, {0, 1});
  return adjoin_monoid_dlog(D, {{"x", "y"}}, 2, {1, 0}, {0, 1});
}

}  // namespace

TEST(OneGenerator, Presentation) {
  for (int p : {2, 3, 5}) {
    const int depth = 4;
    auto L = one_generator_log(p, 3, depth, 4 * p, int(ipow(p, depth)));
    const Ring& R = L.base.ring;
    std::vector<std::string> names;
    for (auto& v : R->vars) names.push_back(v.name);
    EXPECT_EQ(names, (std::vector<std::string>{"x", "y0", "y1", "y2", "y3", "y4"}));
    auto x = RingElem::var(R, "x"), y0 = RingElem::var(R, "y0");
    EXPECT_TRUE(phi(L.base, x) == x.pow(p) * (one(R) + y0.times_p()));
    for (int i = 0; i < depth; ++i) {
      auto yi = RingElem::var(R, "y" + std::to_string(i)), yn = RingElem::var(R, "y" + std::to_string(i + 1));
      EXPECT_TRUE(phi(L.base, yi) == yi.pow(p) + yn.times_p());
    }
    EXPECT_THROW(delta_eval(L.base, RingElem::var(R, "y4")), Error);
  }
}

TEST(OneGenerator, PowersFollowProductRule) {
  for (int p : {2, 3}) {
    auto L = one_generator_log(p, 4, 2, 4 * p, 2 * p);
    auto y0 = RingElem::var(L.base.ring, "y0");
    for (int k = 1; k <= 3; ++k) {
      auto v = log_value(L, IVec{k});
      EXPECT_TRUE(v.alpha == RingElem::var(L.base.ring, "x", k));
      EXPECT_TRUE(v.dlog == dlog_power_oracle(y0, k)) << "k=" << k;
    }
  }
}

TEST(OneGenerator, ValidatesAndRankOneVariant) {
  for (int p : {2, 3, 5}) {
    auto L = one_generator_log(p, 3, 2, 3 * p, 2 * p);
    auto rep = validate_deltalog(L, 20);
    EXPECT_TRUE(rep.ok) << rep.failure;
    auto L1 = one_generator_log(p, 3, 2, 3 * p, 2 * p, true);
    EXPECT_TRUE(validate_deltalog(L1, 20).ok);
    auto x = RingElem::var(L1.base.ring, "x");
    EXPECT_TRUE(phi(L1.base, x) == x.pow(p));
  }
}

TEST(OneGenerator, EmptyMonoid) {
  DeltaRing D = base_delta_ring(3, 2, {}, {}, 0);
  auto L = adjoin_monoid_dlog(D, {}, 0, {}, {});
  EXPECT_EQ(L.monoid.rank, 0);
  EXPECT_EQ(L.base.ring->nvars(), 0);
  EXPECT_TRUE(validate_deltalog(L, 3).ok);
}

TEST(Validate, PerturbedDlogFails) {
  auto L = one_generator_log(3, 3, 2, 9, 6);
  L.dlog_gens[0] = L.dlog_gens[0] + one(L.base.ring);
  auto rep = validate_deltalog(L, 10);
  EXPECT_FALSE(rep.ok);
  EXPECT_NE(rep.failure.find("generator"), std::string::npos);
}

TEST(TrivialLog, UnitOne) {
  auto D = free_delta_ring(2, 3, 1, 6, "t");
  auto L = trivial_log_dlog(D, {one(D.ring)});
  EXPECT_TRUE(L.dlog_units[0].is_zero());
}

TEST(TrivialLog, OnePlusTwoT) {
  auto D = free_delta_ring(2, 3, 1, 6, "t");
  const Ring& R = D.ring;
  auto t = RingElem::var(R, "t"), t1 = RingElem::var(R, "t_1");
  auto u = one(R) + t.times_p();
  auto L = trivial_log_dlog(D, {u});
  // delta(1 + 2t) expanded by hand: 2 t_1 - t^2 - 2t
  auto du = t1.scale(2) - t.pow(2) - t.scale(2);
  EXPECT_TRUE(L.dlog_units[0] == du * u.pow(2).inverse());
  EXPECT_TRUE(validate_deltalog(L, 10).ok);
}

TEST(TrivialLog, UnitAndInverse) {
  auto D = free_delta_ring(3, 3, 1, 6, "t");
  auto t = RingElem::var(D.ring, "t");
  auto u = one(D.ring) + t;
  auto L = trivial_log_dlog(D, {u, u.inverse()});
  auto d = L.dlog_units[0], di = L.dlog_units[1];
  EXPECT_TRUE((d + di + (d * di).times_p()).is_zero());
  EXPECT_TRUE(validate_deltalog(L, 10).ok);
  EXPECT_THROW(trivial_log_dlog(D, {t}), Error);
}

TEST(ExtendToGroup, InverseOfX) {
  for (int p : {2, 3, 5}) {
    auto L = one_generator_log(p, 3, 2, 3 * p, 2 * p);
    Monoid Z = make_monoid(1, {}, {{1}});
    auto G = extend_to_group(L, Z);
    const Ring& R = G.base.ring;
    auto y0 = RingElem::var(R, "y0");
    auto v = log_value(G, IVec{-1});
    EXPECT_TRUE(v.alpha == RingElem::var(R, "x", -1));
    EXPECT_TRUE(v.dlog == -(y0 * (one(R) + y0.times_p()).inverse()));
    auto w = log_value(G, IVec{1});
    EXPECT_TRUE((v.dlog + w.dlog + (v.dlog * w.dlog).times_p()).is_zero());
    auto rep = validate_deltalog(G, 30);
    EXPECT_TRUE(rep.ok) << rep.failure;
    // idempotent
    auto G2 = extend_to_group(G, Z);
    ASSERT_EQ(G2.dlog_units.size(), G.dlog_units.size());
    for (size_t j = 0; j < G.dlog_units.size(); ++j) {
      EXPECT_TRUE(G2.dlog_units[j] == G.dlog_units[j]);
      EXPECT_TRUE(G2.alpha_units[j] == G.alpha_units[j]);
    }
  }
}

TEST(ExtendToGroup, RankOneStaysRankOne) {
  auto L = one_generator_log(3, 3, 1, 9, 3, true);
  auto G = extend_to_group(L, make_monoid(1, {}, {{1}}));
  for (auto& d : G.dlog_units) EXPECT_TRUE(d.is_zero());
}

TEST(PhiM, RankOneIsPthPower) {
  auto L = one_generator_log(3, 3, 1, 9, 3, true);
  auto f = induced_phi_M(L);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].pm, (IVec{3}));
  EXPECT_TRUE(f[0].twist == one(L.base.ring));
}

TEST(PhiM, TrivialLogTwistIsPhiOverPower) {
  auto D = free_delta_ring(2, 3, 1, 6, "t");
  auto u = one(D.ring) + RingElem::var(D.ring, "t");
  auto L = trivial_log_dlog(D, {u});
  auto f = induced_phi_M(L);
  EXPECT_TRUE(u.pow(2) * f[0].twist == phi(D, u));
}

TEST(PhiM, OneGeneratorWords) {
  auto L = one_generator_log(2, 3, 2, 8, 4);
  auto f = induced_phi_M(L);
  EXPECT_TRUE(f[0].twist == one(L.base.ring) + RingElem::var(L.base.ring, "y0").times_p());
  // alpha(phi_M(m)) = phi(alpha(m)) on words x^k
  for (int k = 0; k <= 3; ++k) {
    auto v = log_value(L, IVec{k});
    RingElem tw = one(L.base.ring) + v.dlog.times_p();
    EXPECT_TRUE(v.alpha.pow(2) * tw == phi(L.base, v.alpha));
  }
}

TEST(AddUnits, NoNewUnits) {
  auto L = log_line_with_t(2, 3);
  auto L2 = add_units_pushout(L, {});
  EXPECT_EQ(L2.monoid.rank, L.monoid.rank);
}

TEST(AddUnits, OnePlusPT) {
  for (int p : {2, 3}) {
    auto L = log_line_with_t(p, 3);
    auto u = one(L.base.ring) + RingElem::var(L.base.ring, "t").times_p();
    auto L2 = add_units_pushout(L, {u});
    EXPECT_EQ(L2.monoid.rank, 2);
    auto rep = validate_deltalog(L2, 20);
    EXPECT_TRUE(rep.ok) << rep.failure;
    auto L3 = add_units_pushout(L, {u, u.inverse()});
    EXPECT_EQ(L3.monoid.rank, 2);
    EXPECT_TRUE(validate_deltalog(L3, 20).ok);
  }
}

TEST(AddUnits, FiniteOrderRejected) {
  auto L = log_line_with_t(3, 3);
  EXPECT_THROW(add_units_pushout(L, {-one(L.base.ring)}), Error);
}

TEST(Exactification, DeltaLogOnExactifiedMonoid) {
  for (int p : {2, 3}) {
    DeltaRing D = base_delta_ring(p, 3, {}, {{"x", {}, 3 * p}, {"y", {}, 2 * p}}, 2);
    auto L = adjoin_monoid_dlog(D, {{"x1", "a"}, {"x2", "b"}}, 1, {1, 0}, {0, 1});
    auto h = make_map(L.monoid, free_monoid(1), ZMat::from_columns({{1}, {1}}, 1));
    Monoid Mp = exactify(h);
    auto Lp = extend_to_group(L, Mp);
    auto rep = validate_deltalog(Lp, 30);
    EXPECT_TRUE(rep.ok) << rep.failure;
    ASSERT_EQ(Lp.alpha_units.size(), 1u);
    // alpha(1,-1) = x1/x2
    EXPECT_TRUE(Lp.alpha_units[0] == RingElem::var(Lp.base.ring, "x1") * RingElem::var(Lp.base.ring, "x2", -1));
  }
}
