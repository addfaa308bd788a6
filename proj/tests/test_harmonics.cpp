// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/harmonics.hpp"

using namespace adspec;

TEST(Harmonics, OrthonormalOnQuadrature)
{
  const auto q = SphereQuadrature::make(12, 24);
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= 4; l++)
    for (int m = -l; m <= l; m++) lm.push_back({l, m});
  for (auto [l1, m1] : lm)
  {
    for (auto [l2, m2] : lm)
    {
      double s = 0;
      for (std::size_t k = 0; k < q.size(); k++)
      {
        s += q.weight[k] * real_harmonic(l1, m1, q.theta[k], q.phi[k]).Y * real_harmonic(l2, m2, q.theta[k], q.phi[k]).Y;
      }
      EXPECT_NEAR(s, (l1 == l2 && m1 == m2) ? 1.0 : 0.0, 1e-12) << l1 << m1 << " " << l2 << m2;
    }
  }
}

TEST(Harmonics, SurfaceGradientIsTangentWithKnownNorm)
{
  // int |grad_S Y|^2 = l(l+1)
  const auto q = SphereQuadrature::make(12, 24);
  for (int l = 1; l <= 3; l++)
  {
    for (int m = -l; m <= l; m++)
    {
      double s = 0;
      for (std::size_t k = 0; k < q.size(); k++)
      {
        const auto h = real_harmonic(l, m, q.theta[k], q.phi[k]);
        EXPECT_NEAR(h.grad.dot(q.rhat[k]), 0.0, 1e-12);
        s += q.weight[k] * h.grad.squaredNorm();
      }
      EXPECT_NEAR(s, l * (l + 1.0), 1e-10);
    }
  }
}

TEST(Harmonics, UnitVectorsFormRightHandedFrame)
{
  for (double th : {0.3, 1.2, 2.5})
  {
    for (double ph : {0.0, 1.0, 4.0})
    {
      const auto r = unit_r(th, ph), t = unit_theta(th, ph), p = unit_phi(th, ph);
      EXPECT_NEAR(r.norm(), 1.0, 1e-15);
      EXPECT_NEAR(r.dot(t), 0.0, 1e-15);
      EXPECT_LT((r.cross(t) - p).norm(), 1e-15);
    }
  }
}

TEST(Harmonics, FieldEvaluation)
{
  SphericalField f{0.5, {{1, 0, 2.0}}};
  EXPECT_FALSE(f.is_constant());
  EXPECT_EQ(f.max_degree(), 1);
  EXPECT_NEAR(eval_field(f, 0.0, 0.0), 0.5 + 2.0 * std::sqrt(3.0 / (4 * pi)), 1e-14);
  EXPECT_TRUE((SphericalField{1.0, {}}).is_constant());
}
