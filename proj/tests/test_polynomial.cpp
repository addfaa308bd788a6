// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/polynomial.hpp"
#include "adspec/symbol.hpp"
#include "common.hpp"

using namespace adspec;
using testing_support::Gen;

namespace
{

Poly random_poly(Gen &g, int nvars, int max_deg, int terms)
{
  Poly p(nvars);
  for (int t = 0; t < terms; t++)
  {
    Poly::Exponent e(nvars);
    for (auto &x : e) x = g.integer(0, max_deg);
    p.add_term(e, g.uniform(-2.0, 2.0));
  }
  return p;
}

}  // namespace

TEST(Polynomial, DifferenceOfSquares)
{
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  Poly p = (x + y) * (x - y);
  EXPECT_EQ(p.terms().size(), 2u);
  EXPECT_DOUBLE_EQ(p.coeff({2, 0}), 1.0);
  EXPECT_DOUBLE_EQ(p.coeff({0, 2}), -1.0);
  EXPECT_DOUBLE_EQ(p.coeff({1, 1}), 0.0);
  EXPECT_EQ(p.total_degree(), 2);
}

TEST(Polynomial, PruneDropsDust)
{
  Poly p = Poly::constant(1, 1.0);
  p.add_term({3}, 1e-14);
  p.prune();
  EXPECT_EQ(p.terms().size(), 1u);
  EXPECT_TRUE((p - p).is_zero());
}

TEST(Polynomial, HomogeneousExponentCount)
{
  // C(n + d - 1, d)
  EXPECT_EQ(homogeneous_exponents(3, 4).size(), 15u);
  EXPECT_EQ(homogeneous_exponents(2, 3).size(), 4u);
  for (const auto &e : homogeneous_exponents(3, 4)) EXPECT_EQ(e[0] + e[1] + e[2], 4);
}

TEST(PolynomialProperty, ProductEvaluatesToProductOfValues)
{
  Gen g(11);
  for (int trial = 0; trial < 100; trial++)
  {
    const int n = g.integer(1, 3);
    Poly a = random_poly(g, n, 3, 4), b = random_poly(g, n, 3, 4);
    Vec x(n);
    for (int i = 0; i < n; i++) x[i] = g.uniform(-1.5, 1.5);
    const double expect = a.eval(x) * b.eval(x);
    EXPECT_NEAR((a * b).eval(x), expect, 1e-11 * std::max(1.0, std::abs(expect)));
    EXPECT_NEAR((a + b).eval(x), a.eval(x) + b.eval(x), 1e-12 * std::max(1.0, std::abs(a.eval(x))));
  }
}

TEST(PolynomialProperty, MatrixProductMatchesEvaluation)
{
  Gen g(12);
  const SymmetricSystem sys = maxwell_system();
  const PolyMatrix A = PolyMatrix::linear(sys.A);
  const PolyMatrix A2 = A * A;
  EXPECT_EQ(A2.total_degree(), 2);
  for (int trial = 0; trial < 50; trial++)
  {
    Vec xi = g.unit(3) * g.uniform(0.1, 3.0);
    const Mat a = eval_symbol(sys, xi);
    EXPECT_LT((A.eval(xi) - a).norm(), 1e-14);
    EXPECT_LT((A2.eval(xi) - a * a).norm(), 1e-12 * (1.0 + xi.squaredNorm()));
  }
}

TEST(Polynomial, IdentityMatrix)
{
  PolyMatrix I = PolyMatrix::identity(3, 2);
  Vec x(2);
  x << 0.3, -0.7;
  EXPECT_TRUE(I.eval(x).isIdentity());
}
