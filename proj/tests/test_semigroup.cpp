// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/diagnostics.hpp"
#include "adspec/errors.hpp"
#include "adspec/semigroup.hpp"
#include "common.hpp"
#include "oracles/bessel_oracle.hpp"

using namespace adspec;

namespace
{

const cplx lambda_star = oracle::te1_root(1.0);

Resolution m0(int nodes)
{
  Resolution r;
  r.N_r = nodes;
  r.all_m = false;
  return r;
}

}  // namespace

TEST(Semigroup, EigenmodeDecaysAtItsRate)
{
  const auto g = assemble(Problem{}, m0(401));
  ModeProblem mp;
  const VecC f = eigenmode_initial(g, mp, lambda_star);
  EXPECT_NEAR(g.energy(f), 1.0, 1e-12);
  EvolveOptions o;
  o.T = 5.0;
  const auto tr = evolve(g, f, o);
  double worst = 0;
  for (std::size_t k = 0; k < tr.t.size(); k++)
    worst = std::max(worst, std::abs(std::sqrt(tr.energy[k]) / std::exp(lambda_star.real() * tr.t[k]) - 1));
  EXPECT_LT(worst, 0.01);
  const auto audit = energy_flux_audit(tr);
  EXPECT_LT(audit.max_identity_error, 1e-10);
  EXPECT_TRUE(audit.flux_nonpositive);
  EXPECT_NEAR(audit.mean_flux_rate, 2 * lambda_star.real(), 0.02);
}

TEST(SemigroupProperty, EnergyBookkeepingForRandomData)
{
  testing_support::Gen gen(41);
  const auto g = assemble(Problem{}, m0(101));
  for (int t = 0; t < 5; t++)
  {
    EvolveOptions o;
    o.T = 1.0;
    o.dt = gen.uniform(0.005, 0.05);
    const auto tr = evolve(g, gen.cvec(g.size()), o);
    for (std::size_t k = 1; k < tr.energy.size(); k++)
    {
      EXPECT_LE(tr.energy[k], tr.energy[k - 1] * (1 + 1e-12));
      const double lhs = (tr.energy[k] - tr.energy[k - 1]) / tr.dt;
      EXPECT_NEAR(lhs, tr.boundary_flux[k] + tr.absorber_loss[k], 1e-10 * tr.energy[0] / tr.dt);
      EXPECT_LE(tr.boundary_flux[k], 1e-12 * tr.energy[0]);
    }
  }
}

TEST(Semigroup, ReflectingWallConservesEnergy)
{
  Problem p;
  p.reflecting = true;
  Resolution r = m0(101);
  r.absorber.sigma_max = 0.0;
  const auto g = assemble(p, r);
  const VecC f = shell_data(g, 0, 2.0, 3.0);
  EvolveOptions o;
  o.T = 3.0;
  const auto tr = evolve(g, f, o);
  EXPECT_NEAR(tr.energy.back() / tr.energy.front(), 1.0, 1e-11);
  o.growth_tol = -1e-3;
  EXPECT_THROW(evolve(g, f, o), StepRejected);
}

// At 400 intervals the scheme's dispersive precursor arrives about 0.05
// early; 800 intervals resolve the front.
TEST(Semigroup, ShellDataRespectsFiniteSpeed)
{
  Resolution r = m0(801);
  r.tm = false;
  const auto g = assemble(Problem{}, r);
  const auto fs = finite_speed_test(g, shell_data(g, 0, 2.0, 3.0), 3.0, 5.0, 2.5);
  EXPECT_TRUE(fs.passed);
  EXPECT_GE(fs.arrival, fs.bound);
  EXPECT_GT(fs.arrival, 0.0);
}

TEST(Semigroup, BadInputs)
{
  const auto g = assemble(Problem{}, m0(41));
  EXPECT_THROW(evolve(g, VecC::Ones(3)), DimensionMismatch);
  EvolveOptions o;
  o.T = -1;
  EXPECT_THROW(evolve(g, VecC::Ones(g.size()), o), PreconditionError);
  EXPECT_THROW(shell_data(g, 0, 3.0, 2.0), PreconditionError);
}

TEST(Semigroup, DecayExperimentIsOrthogonalToWitnesses)
{
  const auto g = assemble(Problem{}, m0(201));
  const auto rep = decay_experiment(g, 3.0);
  ASSERT_FALSE(rep.relative_energy.empty());
  EXPECT_NEAR(rep.relative_energy.front(), 1.0, 1e-12);
  EXPECT_LT(rep.relative_energy.back(), 1.0);
  EXPECT_LT(rep.kernel_overlap, 1e-8);
  for (std::size_t k = 1; k < rep.relative_energy.size(); k++)
    EXPECT_LE(rep.relative_energy[k], rep.relative_energy[k - 1] * (1 + 1e-12));
}
