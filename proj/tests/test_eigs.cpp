// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/eigs.hpp"
#include "adspec/errors.hpp"
#include "common.hpp"
#include "oracles/bessel_oracle.hpp"

using namespace adspec;

namespace
{
const cplx lambda_star = oracle::te1_root(1.0);
}

TEST(Eigs, DipoleRateAtDefaultResolution)
{
  const auto g = assemble(Problem{}, Resolution{});
  const auto ev = eigs_near(g, lambda_star, 3);
  ASSERT_EQ(ev.size(), 3u);
  // Three degenerate m members.
  for (const auto &e : ev)
  {
    EXPECT_LT(std::abs(e.lambda - lambda_star), 1e-4);
    EXPECT_LT(e.residual, 1e-8);
    EXPECT_NEAR(g.norm(e.vector), 1.0, 1e-10);
    const VecC r = g.apply(e.vector) - e.lambda * e.vector;
    EXPECT_LT(g.norm(r), 1e-8);
  }
}

TEST(EigsProperty, SpectrumIsClosedUnderConjugation)
{
  const auto g = testing_support::sphere(201, 2, 1.0, false);
  const auto ev = eigs_near(g, cplx(-0.8, 0.0), 10);
  ASSERT_EQ(ev.size(), 10u);
  for (const auto &e : ev)
  {
    EXPECT_LT(e.lambda.real(), 0.0);
    // The conjugate is the same distance from a real target.
    double best = 1e300;
    for (const auto &f : ev) best = std::min(best, std::abs(f.lambda - std::conj(e.lambda)));
    if (std::abs(std::abs(ev.back().lambda + 0.8) - std::abs(e.lambda + 0.8)) > 1e-8) EXPECT_LT(best, 1e-8);
  }
  for (std::size_t k = 1; k < ev.size(); k++)
    EXPECT_LE(std::abs(ev[k - 1].lambda + 0.8), std::abs(ev[k].lambda + 0.8) + 1e-12);
}

TEST(Eigs, ReachLimitsTheAnswer)
{
  const auto g = testing_support::sphere(201);
  EigsOptions o;
  o.reach = 0.05;
  const auto ev = eigs_near(g, lambda_star, 8, o);
  EXPECT_EQ(ev.size(), 3u);
  for (const auto &e : ev) EXPECT_LT(std::abs(e.lambda - lambda_star), 0.05);
}

TEST(Eigs, Preconditions)
{
  const auto g = testing_support::sphere(41);
  EXPECT_THROW(eigs_near(g, cplx(0.1, 0.0), 2), PreconditionError);
  EXPECT_THROW(eigs_near(g, cplx(-0.5, 0.0), 0), PreconditionError);
}
