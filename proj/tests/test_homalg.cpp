#include <gtest/gtest.h>

#include <random>
#include <set>

#include "logprism/homalg.hpp"

using namespace logprism;

namespace {

// Brute force over (Z/m)^r: |ker B| / |im A| and the exponent structure via
// the count of elements killed by p^j.
struct BruteGroup {
  std::vector<int64_t> killed;  // killed[j] = #{x in H : p^j x = 0}, j = 0..n
};

std::vector<std::vector<int64_t>> all_vectors(int r, int64_t m) {
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> v(r, 0);
  while (true) {
    out.push_back(v);
    int i = 0;
    while (i < r && ++v[i] == m) v[i++] = 0;
    if (i == r) break;
  }
  return out;
}

std::vector<int64_t> mat_apply(const SparseMat& A, const std::vector<int64_t>& x) {
  std::vector<int64_t> y(A.rows, 0);
  for (int j = 0; j < A.cols; ++j)
    for (auto& [i, a] : A.col[j]) y[i] = (y[i] + a * x[j]) % A.mod;
  return y;
}

BruteGroup brute(const CochainComplex& X, int deg) {
  const int64_t m = X.mod();
  const int r = X.dim(deg);
  auto A = X.diff(deg - 1), B = X.diff(deg);
  std::set<std::vector<int64_t>> im;
  for (auto& x : all_vectors(X.dim(deg - 1), m)) im.insert(mat_apply(A, x));
  std::vector<std::vector<int64_t>> ker;
  for (auto& x : all_vectors(r, m)) {
    auto y = mat_apply(B, x);
    if (std::all_of(y.begin(), y.end(), [](int64_t v) { return v == 0; })) ker.push_back(x);
  }
  BruteGroup g;
  for (int j = 0; j <= X.n; ++j) {
    // x in ker with p^j x in im, counted modulo im
    int64_t c = 0;
    const int64_t pj = ipow(X.p, j);
    for (auto& x : ker) {
      auto y = x;
      for (auto& v : y) v = v * pj % m;
      if (im.count(y)) ++c;
    }
    g.killed.push_back(c / int64_t(im.size()));
  }
  return g;
}

BruteGroup from_orders(const Cohomology& H, int p, int n) {
  BruteGroup g;
  for (int j = 0; j <= n; ++j) {
    int64_t c = 1;
    for (int o : H.orders) c *= ipow(p, std::min(o, j));
    g.killed.push_back(c);
  }
  return g;
}

CochainComplex random_complex(std::mt19937_64& rng, int p, int n, std::vector<int> dims) {
  CochainComplex X;
  X.p = p;
  X.n = n;
  const int64_t m = X.mod();
  for (size_t i = 0; i < dims.size(); ++i) {
    std::vector<std::string> lab;
    for (int j = 0; j < dims[i]; ++j) lab.push_back("e" + std::to_string(i) + "_" + std::to_string(j));
    X.labels.push_back(lab);
  }
  // d = P * Q with Q a random map to a small "middle" keeps d^2 = 0 by
  // choosing each differential inside the kernel of the next.
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    SparseMat D(dims[i + 1], dims[i], m);
    for (int a = 0; a < dims[i + 1]; ++a)
      for (int b = 0; b < dims[i]; ++b)
        if (rng() % 2) D.add(a, b, int64_t(rng() % m));
    X.d.push_back(D);
  }
  // enforce d^2 = 0: replace d_{i+1} by d_{i+1} (1 - projector) only when the
  // composite already vanishes; otherwise zero the later map.
  for (size_t i = 0; i + 1 < X.d.size(); ++i)
    if (!(X.d[i + 1] * X.d[i]).is_zero()) X.d[i + 1] = SparseMat(X.d[i + 1].rows, X.d[i + 1].cols, m);
  return X;
}

SparseMat dense_to_sparse(const std::vector<std::vector<int64_t>>& rows, int64_t m) {
  SparseMat A(int(rows.size()), int(rows[0].size()), m);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) A.add(int(i), int(j), rows[i][j]);
  return A;
}

}  // namespace

TEST(Cohomology, MultiplicationByP) {
  // 0 -> Z/p^2 --p--> Z/p^2 -> 0: H^0 = Z/p, H^1 = Z/p
  for (int p : {2, 3, 5}) {
    CochainComplex X;
    X.p = p;
    X.n = 2;
    X.labels = {{"a"}, {"b"}};
    X.d = {dense_to_sparse({{p}}, X.mod())};
    auto H0 = cohomology(X, 0), H1 = cohomology(X, 1);
    EXPECT_EQ(H0.free_rank, 0);
    EXPECT_EQ(H0.torsion, (std::vector<int>{1}));
    EXPECT_EQ(H1.torsion, (std::vector<int>{1}));
    EXPECT_EQ(cohomology_string(H1, 2), "H^1 = (Z/p^2)^0 + Z/p^1");
  }
}

TEST(Cohomology, RandomAgainstBruteForce) {
  std::mt19937_64 rng(7);
  int tested = 0;
  for (int p : {2, 3})
    for (int t = 0; t < 60; ++t) {
      std::vector<int> dims = {int(rng() % 3) + 1, int(rng() % 3) + 1, int(rng() % 3) + 1};
      auto X = random_complex(rng, p, 2, dims);
      ASSERT_TRUE(d_squared_zero(X));
      for (int deg = 0; deg < 3; ++deg) {
        auto H = cohomology(X, deg);
        EXPECT_EQ(from_orders(H, p, 2).killed, brute(X, deg).killed) << "p=" << p << " t=" << t << " deg=" << deg;
        for (auto& rep : H.reps) EXPECT_TRUE(sp_apply(X.diff(deg), rep).empty());
        ++tested;
      }
    }
  EXPECT_GT(tested, 300);
}

TEST(Cohomology, ExpressClassAndInducedMap) {
  // multiplication by a unit on 0 -> Z/p^2 -p-> Z/p^2 induces a unit on H^1
  const int p = 3;
  CochainComplex X;
  X.p = p;
  X.n = 2;
  X.labels = {{"a"}, {"b"}};
  X.d = {dense_to_sparse({{p}}, X.mod())};
  auto H1 = cohomology(X, 1);
  SparseMat f = dense_to_sparse({{2}}, X.mod());
  auto M = induced_map(X, H1, X, H1, f);
  ASSERT_TRUE(M.has_value());
  EXPECT_EQ(M->at(0, 0) % p, 2);
  // p * b is a coboundary
  auto c = express_class(X, 1, H1, SparseVec{{0, p}});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ((*c)[0], 0);
}

TEST(Koszul, ZeroAndUnitOperators) {
  const int p = 2, n = 3;
  const int64_t m = ipow(p, n);
  // zero operators: H^i = (Z/p^n)^{C(r,i)}
  std::vector<SparseMat> zero(2, SparseMat(1, 1, m));
  auto K0 = koszul_complex(p, n, {"1"}, zero, {"s", "t"});
  ASSERT_TRUE(d_squared_zero(K0));
  EXPECT_EQ(cohomology(K0, 0).free_rank, 1);
  EXPECT_EQ(cohomology(K0, 1).free_rank, 2);
  EXPECT_EQ(cohomology(K0, 2).free_rank, 1);
  // a unit operator makes it acyclic
  std::vector<SparseMat> unit = {SparseMat::identity(1, m), SparseMat(1, 1, m)};
  auto K1 = koszul_complex(p, n, {"1"}, unit, {"s", "t"});
  for (int i = 0; i < 3; ++i) EXPECT_EQ(cohomology(K1, i).total(), 0);
  // noncommuting operators are rejected
  SparseMat a = dense_to_sparse({{0, 1}, {0, 0}}, m), b = dense_to_sparse({{1, 0}, {0, 0}}, m);
  EXPECT_THROW(koszul_complex(p, n, {"e0", "e1"}, {a, b}, {"s", "t"}), Error);
}

TEST(Koszul, SignsGiveDSquaredZero) {
  const int p = 3, n = 2;
  const int64_t m = ipow(p, n);
  std::vector<SparseMat> ops;
  for (int s = 0; s < 3; ++s) ops.push_back(dense_to_sparse({{s + 1, 0}, {0, 2 * s}}, m));
  auto K = koszul_complex(p, n, {"e0", "e1"}, ops, {"a", "b", "c"});
  EXPECT_EQ(K.length(), 4);
  EXPECT_TRUE(d_squared_zero(K));
  EXPECT_EQ(K.labels[2][0], "e0 a^b");
}

TEST(Bockstein, PowerTower) {
  // X = Z/p^3 in degrees 0,1 with d = 0, mod p and mod p^2 along f = p:
  // the Bockstein of 0 -> Z/p -> Z/p^2 -> Z/p -> 0 applied to
  // 0 -> R -a-> R -> 0 with R = Z/p^2 and a = p is an isomorphism.
  const int p = 3;
  CochainComplex X1, X2;
  X1.p = X2.p = p;
  X1.n = 1;
  X2.n = 2;
  X1.labels = X2.labels = {{"a"}, {"b"}};
  X1.d = {SparseMat(1, 1, p)};
  X2.d = {dense_to_sparse({{p}}, ipow(p, 2))};
  std::vector<SparseMat> up = {dense_to_sparse({{p}}, 9), dense_to_sparse({{p}}, 9)};
  std::vector<SparseMat> down = {SparseMat::identity(1, 9), SparseMat::identity(1, 9)};
  auto B = bockstein(X1, X2, up, down);
  ASSERT_EQ(B.beta.size(), 1u);
  EXPECT_NE(B.beta[0].at(0, 0) % p, 0);
  EXPECT_TRUE(B.squares_to_zero);
}

TEST(Decalage, FactorsMultiplicationByF) {
  // X: Z/p^3 -0-> Z/p^3, F = p. Phi^i = p^i * identity factors with Y = 1.
  const int p = 2, n = 3;
  CochainComplex X;
  X.p = p;
  X.n = n;
  X.labels = {{"a"}, {"b"}};
  X.d = {SparseMat(1, 1, ipow(p, n))};
  Mat F(1, 1, p, n);
  F.at(0, 0) = p;
  std::vector<Mat> Phi = {Mat::identity(1, p, n), F};
  auto Y = factor_through_eta(X, {F, F}, Phi);
  ASSERT_TRUE(Y.has_value());
  EXPECT_EQ((*Y)[1].at(0, 0) % p, 1);
  // p^0 * 1 in degree 1 does not lie in p X^1
  std::vector<Mat> bad = {Mat::identity(1, p, n), Mat::identity(1, p, n)};
  EXPECT_FALSE(factor_through_eta(X, {F, F}, bad).has_value());
  auto eta = eta_decalage(X, {F, F});
  EXPECT_EQ(eta.size(), 2u);
}

TEST(Cosimplicial, ConstantObjectAndFault) {
  // The constant cosimplicial set on integers, faces and degeneracies identity.
  Cosimplicial<int> C;
  C.nmax = 3;
  C.generators = [](int) { return std::vector<int>{0, 1, 2}; };
  C.face = [](int, int, const int& x) { return x; };
  C.degeneracy = [](int, int, const int& x) { return x; };
  C.equal = [](const int& a, const int& b) { return a == b; };
  auto rep = check_cosimplicial_identities(C);
  EXPECT_TRUE(rep.ok);
  EXPECT_GT(rep.checked, 20);
  // standard cosimplicial simplex on vertex lists
  Cosimplicial<std::vector<int>> S;
  S.nmax = 3;
  S.generators = [](int n) {
    std::vector<std::vector<int>> g;
    for (int a = 0; a <= n; ++a) g.push_back({a, n - a});
    return g;
  };
  S.face = [](int, int j, const std::vector<int>& x) {
    auto y = x;
    for (auto& v : y)
      if (v >= j) ++v;
    return y;
  };
  S.degeneracy = [](int, int j, const std::vector<int>& x) {
    auto y = x;
    for (auto& v : y)
      if (v > j) --v;
    return y;
  };
  S.equal = [](const std::vector<int>& a, const std::vector<int>& b) { return a == b; };
  EXPECT_TRUE(check_cosimplicial_identities(S).ok);
  auto T = S;
  T.face = [](int n, int j, const std::vector<int>& x) {
    auto y = x;
    for (auto& v : y)
      if (v >= j) ++v;
    if (n == 1 && j == 2 && !y.empty()) y[0] = 0;
    return y;
  };
  auto bad = check_cosimplicial_identities(T);
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(bad.failure.empty());
}

TEST(AssociatedComplex, StandardSimplexIsAcyclic) {
  // Z-valued functions on vertices of the standard simplex; faces pull back.
  const int p = 2, n = 2;
  const int64_t m = ipow(p, n);
  std::vector<std::vector<std::string>> bases;
  std::vector<std::vector<SparseMat>> faces;
  // cosimplicial abelian group Z[Delta^0]^{n} = Z in every degree with faces
  // the identity: alternating sum is 1,0,1,0,...
  for (int l = 0; l < 4; ++l) bases.push_back({"c"});
  for (int l = 0; l < 3; ++l) faces.push_back(std::vector<SparseMat>(size_t(l + 2), SparseMat::identity(1, m)));
  auto X = associated_complex(p, n, bases, faces);
  EXPECT_TRUE(d_squared_zero(X));
  EXPECT_EQ(cohomology(X, 0).free_rank, 1);
  EXPECT_EQ(cohomology(X, 1).total(), 0);
  EXPECT_EQ(cohomology(X, 2).total(), 0);
}
