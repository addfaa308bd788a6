// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/diagnostics.hpp"
#include "adspec/errors.hpp"
#include "common.hpp"

using namespace adspec;

TEST(Diagnostics, GradientWitnessesAreAnnihilated)
{
  const auto g = assemble(Problem{}, Resolution{});
  const auto rep = kernel_witness_check(g);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.interior.size(), 10u);
  EXPECT_EQ(rep.gram_rank, 10);
  EXPECT_LT(rep.max_ratio, 1e-6);
  for (const auto &w : rep.interior) EXPECT_LT(w.ratio, 1e-6);
}

TEST(DiagnosticsProperty, AnyCompactBumpIsInTheKernel)
{
  testing_support::Gen gen(8);
  const auto g = testing_support::sphere(201, 2);
  for (int t = 0; t < 10; t++)
  {
    const int mode = gen.integer(0, static_cast<int>(g.modes.size()) - 1);
    const double c = gen.uniform(3.0, 15.0), w = gen.uniform(0.5, 2.0);
    auto phi = [&](double r) {
      const double s = (r - c) / w;
      return std::abs(s) < 1 ? std::pow(1 - s * s, 4) : 0.0;
    };
    const VecC psi = gradient_witness(g, mode, phi);
    ASSERT_GT(g.norm(psi), 0.0);
    EXPECT_LT(g.norm(g.apply(psi)) / g.norm(psi), 1e-8);
  }
}

TEST(Diagnostics, CoercivityOffTheKernel)
{
  Resolution r;
  r.N_r = 48;
  r.all_m = false;
  r.tm = false;
  const auto g = assemble(Problem{}, r);
  const auto rep = coercivity_diagnostic(g, -1.0);
  EXPECT_GT(rep.kernel_dim, 0);
  EXPECT_GT(rep.at.sigma_min_complement, 0.0);
  EXPECT_LE(rep.at.sigma_min_full, rep.at.sigma_min_complement + 1e-12);
  EXPECT_EQ(rep.real_ray.size(), 6u);
  EXPECT_THROW(coercivity_diagnostic(g, 0.5), PreconditionError);
}
