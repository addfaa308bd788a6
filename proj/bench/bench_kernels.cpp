// SPDX-License-Identifier: Apache-2.0
// Serial against parallel timings of the data-parallel kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "adspec/ads.hpp"
#include "adspec/eigs.hpp"
#include "adspec/fredholm.hpp"
#include "adspec/projector.hpp"
#include "adspec/semigroup.hpp"
#include "adspec/symbol.hpp"

using namespace adspec;

namespace
{

Exec exec_of(const benchmark::State &s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

const DiscreteGenerator &sphere()
{
  static const DiscreteGenerator g = [] {
    Resolution r;
    r.N_r = 201;
    return assemble(Problem{}, r);
  }();
  return g;
}

void BM_SpectralData(benchmark::State &state)
{
  SpectralOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_data(maxwell_system(), 2000, o));
}

void BM_DispersionScan(benchmark::State &state)
{
  ModeProblem m;
  m.l = 2;
  for (auto _ : state)
    benchmark::DoNotOptimize(scan_abs_dispersion(m, Rect{-3.0, -0.001, -6.0, 6.0}, 200, 200, exec_of(state)));
}

void BM_EigsNear(benchmark::State &state)
{
  EigsOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(eigs_near(sphere(), cplx(-0.6, 0.0), 4, o));
}

void BM_ApplyProjector(benchmark::State &state)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  MatC X(sphere().size(), 4);
  for (Eigen::Index i = 0; i < X.size(); i++) X.data()[i] = cplx(nd(rng), nd(rng));
  const ContourSpec c{cplx(-0.62, 0.0), 0.06, 32};
  for (auto _ : state) benchmark::DoNotOptimize(apply_projector(sphere(), c, 32, X, exec_of(state)));
}

void BM_Evolve(benchmark::State &state)
{
  EvolveOptions o;
  o.T = 1.0;
  o.exec = exec_of(state);
  const VecC f = shell_data(sphere(), 0, 2.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(sphere(), f, o));
}

void BM_BatchClassify(benchmark::State &state)
{
  std::mt19937_64 rng(2);
  std::vector<AnalyticFamily> fams;
  for (int k = 0; k < 16; k++) fams.push_back(planted_family(rng, 5, 2).family);
  for (auto _ : state) benchmark::DoNotOptimize(batch_classify(fams, exec_of(state)));
}

}  // namespace

// Argument 0 runs the serial reference path, 1 the OpenMP path.
BENCHMARK(BM_SpectralData)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DispersionScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigsNear)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyProjector)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchClassify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
