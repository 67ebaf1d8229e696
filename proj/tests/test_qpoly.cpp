#include <gtest/gtest.h>

#include "logprism/qpoly.hpp"

using namespace logprism;

TEST(QPoly, QIntegersAndDivision) {
  EXPECT_EQ(q_int(3).to_string(), "q^2 + q + 1");
  EXPECT_EQ(q_int(-2), -(QPoly::monomial(-1) + QPoly::monomial(-2)));
  // [6]_q / [3]_q = 1 + q^3
  EXPECT_EQ(divexact(q_int(6), q_int(3)), QPoly::constant(1) + QPoly::monomial(3));
  EXPECT_THROW(divexact(q_int(5), q_int(2)), Error);
  EXPECT_TRUE(divides(q_int(2), q_int(4)));
  EXPECT_FALSE(divides(q_int(3), q_int(4)));
  // q -> q^2 on [3]_q is [3]_{q^2}
  EXPECT_EQ(subst_power(q_int(3), 2), QPoly::constant(1) + QPoly::monomial(2) + QPoly::monomial(4));
}

TEST(QPoly, CyclotomicFactorizationOfQnMinusOne) {
  for (int n = 1; n <= 24; ++n) {
    QPoly prod = QPoly::constant(1);
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) prod = prod * cyclotomic(d);
    EXPECT_EQ(prod, QPoly::monomial(n) - QPoly::constant(1)) << n;
    EXPECT_EQ(cyc_product(q_int_factors(n)), q_int(n)) << n;
  }
  EXPECT_EQ(cyclotomic(9).eval1(), 3);
  EXPECT_EQ(cyclotomic(6).eval1(), 1);
}

TEST(QRat, NormalizationAndIntegrality) {
  // [4]_q / [2]_q reduces to 1 + q^2
  QRat a = divide_by_cyc(QRat::from(q_int(4)), q_int_factors(2));
  ASSERT_TRUE(a.as_poly().has_value());
  EXPECT_EQ(*a.as_poly(), QPoly::constant(1) + QPoly::monomial(2));
  // 1/[3]_q is a unit of Z_2[[q-1]] but not of Z_3[[q-1]]
  QRat b = divide_by_cyc(QRat::constant(1), q_int_factors(3));
  EXPECT_TRUE(b.in_D(2));
  EXPECT_FALSE(b.in_D(3));
  EXPECT_EQ(b.eval1_mod(2, 8), 3);  // 1/3 mod 8
  // sums bring fractions to a common denominator
  QRat c = b + b + b;
  EXPECT_EQ(c.eval1_mod(2, 8), 1);
  QRat z = b - b;
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(divide_by_int(QRat::constant(1), 2).in_D(2));
  // q -> q^p on 1/Phi_2 at p = 2: 1/Phi_4
  QRat d = subst_power(divide_by_cyc(QRat::constant(1), {{2, 1}}), 2);
  EXPECT_EQ(d.cyc, (CycFactors{{4, 1}}));
  // and on 1/Phi_3 at p = 2: 1/(Phi_6 Phi_3)
  QRat e = subst_power(divide_by_cyc(QRat::constant(1), {{3, 1}}), 2);
  EXPECT_EQ(e.cyc, (CycFactors{{3, 1}, {6, 1}}));
}

TEST(Lambda, InverseAndQuotients) {
  for (int p : {2, 3, 5}) {
    Lambda T = lambda_trunc(p, 3, 6);
    EXPECT_EQ(T.mul(T.q(), T.q_inverse()), T.one());
    Lambda M = lambda_mod_pq(p, 2);
    EXPECT_EQ(M.dim, p - 1);
    EXPECT_EQ(M.mul(M.q(), M.q_inverse()), M.one());
    // [p]_q vanishes, q^p = 1
    auto zero = Lambda::Elem(size_t(M.dim), 0);
    EXPECT_EQ(M.from_q(q_int(p)), zero);
    EXPECT_EQ(M.from_q(QPoly::monomial(p)), M.one());
    EXPECT_EQ(M.from_q(QPoly::monomial(-1)), M.q_inverse());
  }
  // [a]_q is a unit mod [p]_q exactly when p does not divide a
  Lambda M = lambda_mod_pq(3, 2);
  for (int a = 1; a <= 9; ++a) {
    auto ed = elementary_divisors(M.mult_matrix(q_int(a)));
    bool unit = int(ed.size()) == M.dim && std::all_of(ed.begin(), ed.end(), [](int v) { return v == 0; });
    EXPECT_EQ(unit, a % 3 != 0) << a;
  }
}
