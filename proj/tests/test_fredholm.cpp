// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/errors.hpp"
#include "adspec/fredholm.hpp"
#include "common.hpp"
#include "oracles/laurent_oracle.hpp"

using namespace adspec;

namespace
{

AnalyticFamily diag_family(std::vector<cplx> c0, std::vector<cplx> c1)
{
  AnalyticFamily f;
  f.rows = f.cols = static_cast<int>(c0.size());
  MatC A = MatC::Zero(f.rows, f.rows), B = MatC::Zero(f.rows, f.rows);
  for (int i = 0; i < f.rows; i++)
  {
    A(i, i) = c0[i];
    B(i, i) = c1[i];
  }
  f.coeffs = {A, B};
  return f;
}

double cond(const MatC &M)
{
  Eigen::JacobiSVD<MatC> s(M);
  return s.singularValues()(0) / s.singularValues()(s.singularValues().size() - 1);
}

}  // namespace

TEST(Fredholm, IndexOfRectangularMatrices)
{
  testing_support::Gen g(1);
  MatC A(2, 3);
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 3; j++) A(i, j) = cplx(g.normal(), g.normal());
  EXPECT_EQ(fredholm_index(A), -1);
  EXPECT_EQ(fredholm_index(MatC(A.adjoint())), 1);
  EXPECT_EQ(fredholm_index(MatC::Zero(3, 3)), 0);
}

TEST(Fredholm, SimpleZeroOfDiagonalFamily)
{
  const auto f = diag_family({0.0, 1.0}, {1.0, 0.0});
  const auto c = classify(f);
  EXPECT_EQ(c.kind, Classification::DiscreteSingularSet);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_LT(std::abs(c.points[0].tau), 1e-12);
  EXPECT_EQ(c.points[0].multiplicity, 1);
  EXPECT_EQ(c.points[0].schur_multiplicity, 1);

  const auto red = schur_reduce(f, 0.0);
  EXPECT_EQ(red.kernel_dim, 1);
  EXPECT_NEAR(std::abs(red.s_at(0.1)(0, 0)), 0.1, 1e-12);

  const auto pp = meromorphic_inverse_data(f, 0.0, 0.5);
  EXPECT_EQ(pp.pole_order, 1);
  ASSERT_EQ(pp.ranks.size(), 1u);
  EXPECT_EQ(pp.ranks[0], 1);
  MatC expect = MatC::Zero(2, 2);
  expect(0, 0) = 1.0;
  EXPECT_LT((pp.coeffs[0] - expect).norm(), 1e-12);
  EXPECT_EQ(meromorphic_inverse_data(f, 0.5, 0.2).pole_order, 0);
}

TEST(Fredholm, ShiftedZeroFromTheDataFile)
{
  const auto f = diag_family({-0.5, 1.0}, {1.0, 0.0});
  const auto c = classify(f);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_LT(std::abs(c.points[0].tau - 0.5), 1e-12);
}

TEST(Fredholm, NowhereInvertible)
{
  EXPECT_EQ(classify(diag_family({0.0, 1.0}, {0.0, 2.0})).kind, Classification::NowhereInvertible);
  AnalyticFamily rect;
  rect.rows = 2;
  rect.cols = 3;
  rect.coeffs = {MatC::Ones(2, 3)};
  EXPECT_EQ(classify(rect).kind, Classification::NowhereInvertible);
}

TEST(Fredholm, AmbiguousDeterminantIsInconclusive)
{
  EXPECT_THROW(classify(diag_family({1.0, 1e-10}, {0.0, 0.0})), TruncationInconclusive);
}

TEST(Fredholm, CircleThroughSingularPoint)
{
  EXPECT_THROW(meromorphic_inverse_data(diag_family({0.0, 1.0}, {1.0, 0.0}), 0.3, 0.3), CircleHitsSingularity);
}

TEST(Fredholm, RegularBasepointRejected)
{
  EXPECT_THROW(schur_reduce(diag_family({1.0, 1.0}, {1.0, 0.0}), 0.0), BasepointRegular);
}

TEST(Fredholm, SeriesZerosWithMultiplicity)
{
  // (x - 0.2)^2 (x + 0.3) = x^3 - 0.1 x^2 - 0.08 x + 0.012
  const auto z = series_zeros({0.012, -0.08, -0.1, 1.0}, 1.0);
  ASSERT_EQ(z.size(), 2u);
  int total = 0;
  for (const auto &[x, m] : z)
  {
    total += m;
    if (m == 2) EXPECT_LT(std::abs(x - 0.2), 1e-12);
    if (m == 1) EXPECT_LT(std::abs(x + 0.3), 1e-12);
  }
  EXPECT_EQ(total, 3);
}

TEST(FredholmProperty, IndexIsConstantAcrossTheDisk)
{
  testing_support::Gen g(2);
  for (int t = 0; t < 20; t++)
  {
    AnalyticFamily f;
    f.rows = g.integer(1, 5);
    f.cols = g.integer(1, 5);
    for (int k = 0; k < 3; k++)
    {
      MatC C(f.rows, f.cols);
      for (int i = 0; i < f.rows; i++)
        for (int j = 0; j < f.cols; j++) C(i, j) = cplx(g.normal(), g.normal());
      f.coeffs.push_back(C);
    }
    for (int s = 0; s < 5; s++)
      EXPECT_EQ(fredholm_index(f.eval(g.in_box(-0.6, 0.6, -0.6, 0.6))), f.rows - f.cols);
  }
}

TEST(FredholmProperty, PlantedFamiliesRoundTrip)
{
  std::mt19937_64 rng(11);
  testing_support::Gen g(12);
  for (int t = 0; t < 15; t++)
  {
    const int n = g.integer(3, 6);
    const auto pf = planted_family(rng, n, g.integer(1, 3));
    const auto c = classify(pf.family);
    ASSERT_EQ(c.kind, Classification::DiscreteSingularSet);
    EXPECT_TRUE(c.cross_validated);
    const auto oracle_roots = oracle::planted_det_roots(pf);
    ASSERT_EQ(c.points.size(), oracle_roots.size());
    for (const auto &[root, mult] : oracle_roots)
    {
      const SingularPoint *hit = nullptr;
      for (const auto &p : c.points)
        if (std::abs(p.tau - root) < 1e-8) hit = &p;
      ASSERT_NE(hit, nullptr);
      EXPECT_EQ(hit->multiplicity, mult);
      EXPECT_EQ(hit->schur_multiplicity, mult);
    }
    for (std::size_t k = 0; k < pf.points.size(); k++)
    {
      const auto red = schur_reduce(pf.family, pf.points[k]);
      int kernel = 0;
      for (const auto &e : pf.exponents) kernel += e[k] > 0;
      EXPECT_EQ(red.kernel_dim, kernel);

      const auto pp = meromorphic_inverse_data(pf.family, pf.points[k]);
      const auto ref = oracle::planted_principal_part(pf, static_cast<int>(k));
      EXPECT_EQ(pp.pole_order, pf.pole_order(static_cast<int>(k)));
      ASSERT_EQ(static_cast<int>(ref.size()), pp.pole_order);
      for (int j = 0; j < pp.pole_order; j++)
      {
        EXPECT_EQ(pp.ranks[j], oracle::numerical_rank(ref[j]));
        EXPECT_LT((pp.coeffs[j] - ref[j]).norm(), 1e-7 * std::max(1.0, ref[j].norm()));
      }
    }
  }
}

// The block inverse reproduces M^{-1}; accuracy is only asserted where M is
// reasonably conditioned, since near the singular point both this and a
// direct LU inverse lose digits at the same rate.
TEST(FredholmProperty, SchurInverseReconstructsTheInverse)
{
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; t < 20; t++)
  {
    const int n = 3 + static_cast<int>(rng() % 4);
    const auto pf = planted_family(rng, n, 1 + static_cast<int>(rng() % 3));
    for (std::size_t k = 0; k < pf.points.size(); k++)
    {
      const auto red = schur_reduce(pf.family, pf.points[k]);
      for (int s = 0; s < 8; s++)
      {
        const cplx tau = pf.points[k] + 0.9 * red.subdisk_radius * std::polar(1.0, 0.7 + 0.785 * s);
        const MatC M = pf.family.eval(tau);
        if (cond(M) > 1e3) continue;
        EXPECT_LT((M * red.inverse_at(tau) - MatC::Identity(n, n)).norm(), 1e-12);
        checked++;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Fredholm, DemoPasses)
{
  const auto demo = fredholm_demo(7, 10);
  EXPECT_EQ(demo.families, 10);
  EXPECT_EQ(demo.passed, 10);
  for (const auto &r : demo.records) EXPECT_TRUE(r.passed) << r.failure;
}

TEST(Fredholm, ValidationErrors)
{
  AnalyticFamily f;
  f.rows = f.cols = 2;
  f.coeffs = {MatC::Identity(3, 3)};
  EXPECT_THROW(f.validate(), DimensionMismatch);
  AnalyticFamily rect;
  rect.rows = 2;
  rect.cols = 3;
  rect.coeffs = {MatC::Ones(2, 3)};
  EXPECT_THROW(schur_reduce(rect, 0.0), PreconditionError);
}
