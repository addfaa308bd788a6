// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "adspec/discrete.hpp"
#include "adspec/eigs.hpp"
#include "adspec/errors.hpp"
#include "common.hpp"
#include "oracles/bessel_oracle.hpp"

using namespace adspec;
using testing_support::Gen;

namespace
{

Resolution single_mode(int nodes)
{
  Resolution r;
  r.N_r = nodes;
  r.tm = false;
  r.all_m = false;
  return r;
}

}  // namespace

TEST(Discrete, InteriorOperatorIsSkew)
{
  const auto g = testing_support::sphere(201);
  EXPECT_LT(g.skew_defect(), 1e-12);
  EXPECT_LE(g.max_boundary_symmetric_eig(), 1e-12);
  EXPECT_EQ(g.modes.size(), 6u);
  EXPECT_EQ(g.size(), 6 * g.block_size());
}

TEST(Discrete, AngleDependentBoundaryStaysDissipative)
{
  Problem p;
  p.epsilon = {1.0, {{1, 0, 0.3}, {2, 1, 0.2}}};
  Resolution r;
  r.N_r = 101;
  r.L_max = 2;
  const auto g = assemble(p, r);
  EXPECT_LE(g.max_boundary_symmetric_eig(), 1e-12);
  EXPECT_TRUE(g.coupled());
  const Mat S = 0.5 * (g.bc_coupling + g.bc_coupling.transpose());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(S).eigenvalues().minCoeff(), 0.0);
}

TEST(DiscreteProperty, EnergyIdentityForRandomStates)
{
  Gen gen(31);
  const auto g = testing_support::sphere(101);
  for (int t = 0; t < 30; t++)
  {
    const VecC x = gen.cvec(g.size());
    const double total = 2.0 * std::real(x.dot(g.K * x));
    const double interior = std::real(x.dot(g.K_int * x));
    EXPECT_NEAR(g.boundary_flux(x) + g.absorber_loss(x), total, 1e-11 * x.squaredNorm());
    EXPECT_NEAR(interior, 0.0, 1e-11 * x.squaredNorm());
    EXPECT_LE(g.boundary_flux(x), 1e-12 * x.squaredNorm());
    EXPECT_LE(g.absorber_loss(x), 1e-12 * x.squaredNorm());
    // W G x = K x
    const VecC y = g.apply(x);
    EXPECT_LT((g.W * y - g.K * x).norm(), 1e-10 * (g.K * x).norm());
    EXPECT_NEAR(g.energy(x), std::real(x.dot(g.W * x)), 1e-12 * g.energy(x));
  }
}

TEST(Discrete, ZeroPerturbationIsBitwiseTheBaseProblem)
{
  Resolution r;
  r.N_r = 101;
  r.L_max = 2;
  Problem base, shaped;
  shaped.shape.terms = {{2, 0, 1.0}};
  shaped.delta = 0.0;
  const auto a = assemble(base, r), b = assemble(shaped, r);
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.components.size(), a.modes.size());
  shaped.delta = 0.05;
  const auto c = assemble(shaped, r);
  EXPECT_NE(c.hash, a.hash);
  EXPECT_LT(c.components.size(), c.modes.size());
}

TEST(Discrete, ComponentDofsPartitionTheSpace)
{
  Problem p;
  p.delta = 0.05;
  p.shape.terms = {{2, 0, 1.0}};
  Resolution r;
  r.N_r = 61;
  r.L_max = 2;
  const auto g = assemble(p, r);
  std::vector<int> seen(g.size(), 0);
  for (std::size_t c = 0; c < g.components.size(); c++)
    for (int d : g.component_dofs(static_cast<int>(c))) seen[d]++;
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_GE(g.find_mode(2, 0, Polarization::TE), 0);
  EXPECT_LT(g.find_mode(3, 0, Polarization::TE), 0);
}

TEST(Discrete, InvalidInputsRejected)
{
  Resolution r;
  r.absorber.sigma_max = -1.0;
  EXPECT_THROW(assemble(Problem{}, r), UnstableAbsorber);
  Resolution coarse;
  coarse.N_r = 8;
  EXPECT_THROW(assemble(Problem{}, coarse), ResolutionError);
  Resolution nopol;
  nopol.te = nopol.tm = false;
  EXPECT_THROW(assemble(Problem{}, nopol), ResolutionError);
  Problem neg;
  neg.epsilon = {-0.5, {}};
  EXPECT_THROW(assemble(neg, Resolution{}), PreconditionError);
}

TEST(Discrete, CoordinateExport)
{
  const auto g = testing_support::sphere(21, 1, 1.0, false);
  std::ostringstream os;
  write_coo(os, g.K);
  std::istringstream is(os.str());
  std::string line;
  long lines = 0;
  while (std::getline(is, line)) lines++;
  EXPECT_EQ(lines, g.K.nonZeros());
}

TEST(Discrete, SampledProfileNeedsItsMode)
{
  const auto g = testing_support::sphere(41, 1, 1.0, false);
  RadialProfile prof;
  prof.l = 2;
  prof.lambda = -0.5;
  EXPECT_THROW(sample_profile(g, prof), PreconditionError);
}

// Error in the TE dipole rate shrinks at second order in the radial spacing.
TEST(Discrete, SecondOrderConvergence)
{
  const double exact = oracle::te1_root(1.0);
  std::vector<double> err;
  for (int n : {101, 201, 401})
  {
    const auto g = assemble(Problem{}, single_mode(n));
    err.push_back(std::abs(eigs_near(g, exact, 1)[0].lambda - exact));
  }
  EXPECT_GT(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GT(std::log2(err[1] / err[2]), 1.8);
}
