// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/errors.hpp"
#include "adspec/projector.hpp"
#include "common.hpp"
#include "oracles/bessel_oracle.hpp"

using namespace adspec;

namespace
{

const cplx lambda_star = oracle::te1_root(1.0);

const DiscreteGenerator &gen()
{
  static const DiscreteGenerator g = testing_support::sphere(201);
  return g;
}

}  // namespace

TEST(Projector, DipoleClusterHasRankThree)
{
  const ContourSpec c{lambda_star, 0.1 * std::abs(lambda_star.real()), 32};
  const auto P = spectral_projector(gen(), c);
  EXPECT_EQ(P.rank, 3);
  EXPECT_NEAR(P.trace.real(), 3.0, 1e-8);
  EXPECT_NEAR(P.trace.imag(), 0.0, 1e-8);
  EXPECT_LT(P.idempotency, 1e-10);
  EXPECT_EQ(P.eigs_inside, 3);
  const MatC G = P.basis.adjoint() * gen().W * P.basis;
  EXPECT_LT((G - MatC::Identity(3, 3)).norm(), 1e-10);
}

TEST(Projector, EmptyContour)
{
  const auto P = spectral_projector(gen(), ContourSpec{cplx(-2.5, 0.0), 0.3, 32});
  EXPECT_EQ(P.rank, 0);
  EXPECT_LT(std::abs(P.trace), 1e-8);
}

TEST(ProjectorProperty, AppliedTwiceIsApplyingOnce)
{
  testing_support::Gen g(17);
  const ContourSpec c{lambda_star, 0.06, 64};
  MatC X(gen().size(), 3);
  for (int k = 0; k < 3; k++) X.col(k) = g.cvec(gen().size());
  const MatC PX = apply_projector(gen(), c, 64, X);
  const MatC PPX = apply_projector(gen(), c, 64, PX);
  EXPECT_LT((PPX - PX).norm(), 1e-9 * PX.norm());
}

TEST(Projector, InvalidContours)
{
  EXPECT_THROW(spectral_projector(gen(), ContourSpec{cplx(-0.5, 0.0), 0.0, 32}), PreconditionError);
  EXPECT_THROW(spectral_projector(gen(), ContourSpec{cplx(-0.5, 0.0), 0.1, 4}), PreconditionError);
  EXPECT_THROW(spectral_projector(gen(), ContourSpec{cplx(-0.1, 0.0), 0.2, 32}), PreconditionError);
}

TEST(Projector, ContourThroughAnEigenvalue)
{
  const ContourSpec c{lambda_star - 0.05, 0.05, 32};
  EXPECT_THROW(spectral_projector(gen(), c), ContourNearEigenvalue);
}

TEST(Projector, EigenvaluesWithinReach)
{
  const auto inside = eigenvalues_within(gen(), lambda_star, 0.05);
  EXPECT_EQ(inside.size(), 3u);
}
