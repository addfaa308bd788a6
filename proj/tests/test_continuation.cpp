// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/continuation.hpp"
#include "adspec/eigs.hpp"
#include "adspec/errors.hpp"
#include "common.hpp"
#include "oracles/bessel_oracle.hpp"

using namespace adspec;

namespace
{

PerturbationPath small_path(FamilyKind kind, std::vector<double> steps)
{
  PerturbationPath p;
  p.family.kind = kind;
  p.resolution.N_r = 201;
  p.resolution.tm = false;
  p.resolution.all_m = false;
  p.steps = std::move(steps);
  return p;
}

cplx discrete_seed(const PerturbationPath &p)
{
  return eigs_near(p.generator(0.0), oracle::te1_root(1.0), 1)[0].lambda;
}

StepControl no_ranks()
{
  StepControl c;
  c.projector_ranks = false;
  return c;
}

}  // namespace

TEST(Continuation, CoefficientFamilyScalesTheRate)
{
  const auto path = small_path(FamilyKind::Coefficient, PerturbationPath::uniform(0.1, 3));
  const cplx l0 = discrete_seed(path);
  const auto res = continue_eigenvalue(path, l0, no_ranks());
  ASSERT_GE(res.points.size(), 3u);
  for (const auto &pt : res.points) EXPECT_LT(std::abs(pt.lambda - (1 + pt.delta) * l0), 1e-9);
}

TEST(Continuation, EpsilonPathFollowsTheClosedForm)
{
  const auto path = small_path(FamilyKind::Epsilon, PerturbationPath::uniform(0.1, 5));
  const cplx l0 = discrete_seed(path);
  const double base_err = std::abs(l0 - oracle::te1_root(1.0));
  const auto res = continue_eigenvalue(path, l0);
  for (const auto &pt : res.points)
  {
    EXPECT_LT(std::abs(pt.lambda - oracle::te1_root(1.0 + pt.delta)), 2 * base_err + 1e-6) << pt.delta;
    EXPECT_EQ(pt.rank, 1);
  }
  for (std::size_t k = 1; k < res.points.size(); k++)
    EXPECT_LT(std::abs(res.points[k].lambda - res.points[k - 1].lambda), 0.05);
}

TEST(Continuation, LostPathIsReported)
{
  auto path = small_path(FamilyKind::Coefficient, {0.0, 5.0});
  StepControl c = no_ranks();
  c.max_halvings = 0;
  EXPECT_THROW(continue_eigenvalue(path, discrete_seed(path), c), PathLost);
}

TEST(Continuation, BadInputs)
{
  EXPECT_THROW(family_from_string("temperature"), PreconditionError);
  EXPECT_EQ(family_from_string("shape"), FamilyKind::Shape);
  EXPECT_THROW(PerturbationPath::uniform(0.0, 5), PreconditionError);
  auto path = small_path(FamilyKind::Epsilon, {0.0, 0.1, 0.05});
  EXPECT_THROW(continue_eigenvalue(path, oracle::te1_root(1.0), no_ranks()), PreconditionError);
  auto ok = small_path(FamilyKind::Epsilon, {0.0, 0.1});
  EXPECT_THROW(continue_eigenvalue(ok, cplx(-0.45, 0.0), no_ranks()), PreconditionError);
}

TEST(Continuation, ZeroDeltaReturnsBaseProblem)
{
  PerturbationFamily f;
  f.kind = FamilyKind::Shape;
  f.g = {0.0, {{2, 0, 1.0}}};
  Problem base;
  const auto p = f.at(base, 0.0);
  EXPECT_EQ(p.delta, 0.0);
  EXPECT_EQ(assemble(p, Resolution{}).hash, assemble(base, Resolution{}).hash);
}

TEST(Continuation, CountDistinct)
{
  EXPECT_EQ(count_distinct({cplx(-1, 0), cplx(-1, 1e-10), cplx(-2, 0)}), 2);
  EXPECT_EQ(count_distinct({}), 0);
}
