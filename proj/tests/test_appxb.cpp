#include <gtest/gtest.h>

#include "logprism/appxb.hpp"

using namespace logprism;

TEST(AppxB, FaceAndDegeneracyFormulas) {
  auto D = build_appxb(2, 1, catalog_map("trivial-to-N"), 6, 2, 3);
  ASSERT_EQ(D.r, 1);
  BElem q3{{IVec{3}, 1}};
  // delta_0(q) = (q, qbar), delta_1(q) = (q, e)
  EXPECT_EQ(appxb_face(D, 0, 0, q3), (BElem{{IVec{3, 3}, 1}}));
  EXPECT_EQ(appxb_face(D, 0, 1, q3), (BElem{{IVec{3, 0}, 1}}));
  // delta_0(q, g) = (q, q g^{-1}, g)
  EXPECT_EQ(appxb_face(D, 1, 0, BElem{{IVec{3, 1}, 1}}), (BElem{{IVec{3, 2, 1}, 1}}));
  // sigma_0(q, g) = q; sigma_1(q, g1, g2) = (q, g1 g2)
  EXPECT_EQ(appxb_degeneracy(D, 1, 0, BElem{{IVec{3, 1}, 1}}), q3);
  EXPECT_EQ(appxb_degeneracy(D, 2, 1, BElem{{IVec{3, 1, -2}, 1}}), (BElem{{IVec{3, -1}, 1}}));
}

TEST(AppxB, ProjectionRule) {
  auto D = build_appxb(3, 1, catalog_map("trivial-to-N"), 9, 1, 2);
  EXPECT_EQ(projection_pr(D, BElem{{IVec{6}, 1}}), (BElem{{IVec{6}, 1}}));
  EXPECT_TRUE(projection_pr(D, BElem{{IVec{4}, 1}}).empty());
  EXPECT_TRUE(projection_pr(D, BElem{{IVec{4, 1}, 2}}).empty());
}

TEST(AppxB, HomotopyCases) {
  auto D = build_appxb(2, 1, catalog_map("trivial-to-N"), 6, 3, 3);
  BElem q{{IVec{3}, 1}};
  EXPECT_TRUE(homotopy_h(D, 0, 0, q).empty());  // pr kills q = 3
  EXPECT_EQ(homotopy_h(D, 0, 1, q), q);
  BElem even{{IVec{3, 2}, 1}}, odd{{IVec{3, 1}, 1}};
  EXPECT_EQ(homotopy_h(D, 1, 1, even), even);
  EXPECT_TRUE(homotopy_h(D, 1, 1, odd).empty());
}

TEST(AppxB, IdentitiesOnCatalog) {
  struct Case {
    const char* chart;
    int p, n, qdeg, box, nmax;
  };
  for (auto c : {Case{"trivial-to-N", 2, 1, 4, 2, 3}, Case{"trivial-to-N", 3, 1, 4, 2, 3}, Case{"trivial-to-N", 2, 2, 4, 2, 3},
                 Case{"semistable", 2, 1, 4, 2, 2}, Case{"semistable", 3, 1, 4, 1, 3}}) {
    auto D = build_appxb(c.p, c.n, catalog_map(c.chart), c.qdeg, c.box, c.nmax);
    auto rep = verify_homotopy(D);
    EXPECT_TRUE(rep.ok) << c.chart << " p=" << c.p << ": " << rep.failure;
    EXPECT_TRUE(rep.pr_linear && rep.pr_section && rep.h_linear);
    EXPECT_GT(rep.checked, 100);
  }
}

TEST(AppxB, UnitsChart) {
  // Q = Z over trivial M: the window is a box in Z
  NamedMap z{"Z", "trivial -> Z", make_map(make_monoid(0, {}), make_monoid(1, {}, {{1}}), ZMat(1, 0))};
  auto D = build_appxb(2, 1, z, 3, 1, 3);
  EXPECT_EQ(D.qwin.size(), 7u);
  auto rep = verify_homotopy(D);
  EXPECT_TRUE(rep.ok) << rep.failure;
}

TEST(AppxB, InjectedFaultIsCaught) {
  auto D = build_appxb(2, 1, catalog_map("trivial-to-N"), 4, 2, 3);
  D.fault = HomotopyFault{2, 1};
  auto rep = verify_homotopy(D);
  EXPECT_FALSE(rep.ok);
  EXPECT_NE(rep.failure.find("h-"), std::string::npos) << rep.failure;
}

TEST(AppxB, RelativeFrobeniusQis) {
  for (int p : {2, 3}) {
    auto r = relfrob_qis(p, 1, 3, 1, 2);
    EXPECT_TRUE(r.tables_equal) << p;
    EXPECT_TRUE(r.induced_iso) << p;
    EXPECT_EQ(r.source.free_rank[0], 1);
    EXPECT_EQ(r.source.free_rank[1], 0);
    EXPECT_EQ(r.source.free_rank[2], 0);
  }
  auto z = relfrob_qis(2, 1, 3, 1, 2, true);
  EXPECT_TRUE(z.ok());
  EXPECT_EQ(z.source.free_rank, (std::vector<int>{0, 0, 0}));
  auto d0 = relfrob_qis(3, 1, 3, 1, 0);
  EXPECT_TRUE(d0.ok());
}
