// SPDX-License-Identifier: Apache-2.0
// Serial and parallel paths must agree bit for bit.
#include <gtest/gtest.h>

#include "adspec/ads.hpp"
#include "adspec/eigs.hpp"
#include "adspec/fredholm.hpp"
#include "adspec/projector.hpp"
#include "adspec/semigroup.hpp"
#include "adspec/symbol.hpp"
#include "common.hpp"

using namespace adspec;

namespace
{

struct Threads : ::testing::Test
{
  int saved = 1;
  void SetUp() override
  {
    saved = max_threads();
    set_num_threads(4);
  }
  void TearDown() override { set_num_threads(saved); }
};

bool same(const MatC &a, const MatC &b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

}  // namespace

TEST_F(Threads, SymbolSpectralData)
{
  SpectralOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  const auto a = spectral_data(maxwell_system(), 500, s), b = spectral_data(maxwell_system(), 500, p);
  EXPECT_EQ(a.speeds, b.speeds);
  EXPECT_EQ(a.v_min, b.v_min);
}

TEST_F(Threads, EigsNear)
{
  Problem pr;
  pr.delta = 0.05;
  pr.shape.terms = {{2, 0, 1.0}};
  Resolution r;
  r.N_r = 101;
  r.L_max = 2;
  const auto g = assemble(pr, r);
  EigsOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  const auto a = eigs_near(g, cplx(-0.6, 0.0), 6, s), b = eigs_near(g, cplx(-0.6, 0.0), 6, p);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); k++)
  {
    EXPECT_EQ(a[k].lambda, b[k].lambda);
    EXPECT_TRUE(a[k].vector == b[k].vector);
  }
}

TEST_F(Threads, ApplyProjector)
{
  const auto g = testing_support::sphere(101);
  testing_support::Gen gen(3);
  MatC X(g.size(), 2);
  X.col(0) = gen.cvec(g.size());
  X.col(1) = gen.cvec(g.size());
  const ContourSpec c{cplx(-0.62, 0.0), 0.06, 32};
  EXPECT_TRUE(same(apply_projector(g, c, 32, X, Exec::Serial), apply_projector(g, c, 32, X, Exec::Parallel)));
}

TEST_F(Threads, Evolve)
{
  const auto g = testing_support::sphere(101);
  const VecC f = shell_data(g, 0, 2.0, 3.0);
  EvolveOptions s, p;
  s.T = p.T = 1.0;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  const auto a = evolve(g, f, s), b = evolve(g, f, p);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(a.boundary_flux, b.boundary_flux);
  EXPECT_TRUE(a.final_state == b.final_state);
}

TEST_F(Threads, DispersionScan)
{
  ModeProblem m;
  m.l = 3;
  const Rect box{-3.0, -0.01, -6.0, 6.0};
  EXPECT_EQ(scan_abs_dispersion(m, box, 80, 70, Exec::Serial), scan_abs_dispersion(m, box, 80, 70, Exec::Parallel));
}

TEST_F(Threads, BatchClassify)
{
  std::mt19937_64 rng(9);
  std::vector<AnalyticFamily> fams;
  for (int k = 0; k < 8; k++) fams.push_back(planted_family(rng, 4, 2).family);
  const auto a = batch_classify(fams, Exec::Serial), b = batch_classify(fams, Exec::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); k++)
  {
    ASSERT_EQ(a[k].points.size(), b[k].points.size());
    for (std::size_t j = 0; j < a[k].points.size(); j++) EXPECT_EQ(a[k].points[j].tau, b[k].points[j].tau);
    EXPECT_EQ(a[k].det_coeffs, b[k].det_coeffs);
  }
}
