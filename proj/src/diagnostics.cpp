// SPDX-License-Identifier: Apache-2.0
#include "adspec/diagnostics.hpp"

#include <cmath>
#include <random>

#include "adspec/errors.hpp"

namespace adspec
{

VecC gradient_witness(const DiscreteGenerator &gen, int mode, const std::function<double(double)> &phi)
{
  const RadialGrid &g = gen.grid;
  const int N = g.N;
  const double c = std::sqrt(gen.modes.at(mode).l * (gen.modes.at(mode).l + 1.0));
  VecC x = VecC::Zero(gen.size());
  // Tangential part sqrt(L) phi on the half nodes; the radial part is the
  // discrete derivative that makes the u-rows vanish.
  std::vector<double> wv(N + 2);
  wv[0] = c * phi(g.a);
  for (int j = 0; j < N; j++) wv[j + 1] = c * phi(g.r_half[j]);
  wv[N + 1] = c * phi(g.R);
  for (int j = 0; j < N; j++) x[gen.w(mode, j)] = wv[j + 1];
  for (int i = 0; i <= N; i++)
  {
    x[gen.s(mode, i)] = g.r_node[i] * (wv[i + 1] - wv[i]) / (c * g.h_node[i]);
  }
  return x;
}

namespace
{

double ratio(const DiscreteGenerator &gen, const VecC &x) { return gen.norm(gen.apply(x)) / gen.norm(x); }

auto bump(double center, double hw)
{
  return [=](double r) {
    double t = (r - center) / hw;
    return std::abs(t) < 1.0 ? std::pow(1.0 - t * t, 4) : 0.0;
  };
}

}  // namespace

KernelWitnessReport kernel_witness_check(const DiscreteGenerator &gen, int count, std::uint64_t seed, double threshold)
{
  KernelWitnessReport rep;
  rep.threshold = threshold;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double lo = gen.grid.a + 0.5, hi = gen.resolution.absorber.r_start - 0.5;
  if (!(hi - lo > 0.4))
  {
    throw PreconditionError("shell too thin for interior kernel witnesses");
  }
  std::vector<VecC> vs;
  for (int k = 0; k < count; k++)
  {
    WitnessEntry e;
    int mode = static_cast<int>(U(rng) * gen.modes.size()) % static_cast<int>(gen.modes.size());
    e.half_width = std::min(0.2 + 1.3 * U(rng), 0.5 * (hi - lo));
    e.center = lo + e.half_width + (hi - lo - 2 * e.half_width) * U(rng);
    e.mode = gen.modes[mode].label();
    VecC x = gradient_witness(gen, mode, bump(e.center, e.half_width));
    e.ratio = ratio(gen, x);
    rep.max_ratio = std::max(rep.max_ratio, e.ratio);
    rep.interior.push_back(e);
    vs.push_back(x / gen.norm(x));
  }
  MatC G(count, count);
  for (int i = 0; i < count; i++)
  {
    for (int j = 0; j < count; j++) G(i, j) = gen.inner(vs[i], vs[j]);
  }
  Eigen::SelfAdjointEigenSolver<MatC> es(G);
  const double top = es.eigenvalues().maxCoeff();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++)
  {
    rep.gram_rank += es.eigenvalues()[i] > 1e-10 * top;
  }

  rep.boundary.mode = gen.modes[0].label();
  rep.boundary.center = gen.grid.a;
  rep.boundary.half_width = 1.0;
  rep.boundary.ratio = ratio(gen, gradient_witness(gen, 0, bump(gen.grid.a, 1.0)));
  rep.passed = rep.max_ratio < threshold && rep.gram_rank == count;
  return rep;
}

CoercivityReport coercivity_diagnostic(const DiscreteGenerator &gen, cplx z, const CoercivityOptions &opt)
{
  if (!(z.real() < 0.0))
  {
    throw PreconditionError("coercivity diagnostic needs Re z < 0");
  }
  const int n = gen.size();
  if (n > opt.max_dim)
  {
    throw PreconditionError("coercivity diagnostic is dense; generator has " + std::to_string(n) + " unknowns");
  }
  Mat W(gen.W), K(gen.K);
  Eigen::LLT<Mat> llt(W);
  // G_hat = L^{-1} K L^{-T}: the generator in energy-orthonormal coordinates.
  Mat Li = llt.matrixL().solve(Mat::Identity(n, n));
  Mat Gh = Li * K * Li.transpose();
  Eigen::BDCSVD<Mat> svd(Gh, Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  CoercivityReport rep;
  rep.sigma_max = sv[0];
  int keep = 0;
  while (keep < n && sv[keep] >= opt.kernel_rel * sv[0]) keep++;
  rep.kernel_dim = n - keep;
  MatC Vperp = svd.matrixV().leftCols(keep).cast<cplx>();
  MatC Ghc = Gh.cast<cplx>();

  auto sample = [&](cplx zz) {
    CoercivitySample s;
    s.z = zz;
    MatC A = Ghc - zz * MatC::Identity(n, n);
    s.sigma_min_full = Eigen::BDCSVD<MatC>(A).singularValues().minCoeff();
    MatC Ac = A * Vperp;
    s.sigma_min_complement = keep ? Eigen::BDCSVD<MatC>(Ac).singularValues().minCoeff() : 0.0;
    s.reference = std::abs(zz) * (1.0 + 1.0 / std::abs(zz.real()));
    return s;
  };
  rep.at = sample(z);
  for (double t : opt.real_ray) rep.real_ray.push_back(sample(cplx(-t, 0.0)));
  for (double t : opt.imag_ray) rep.imag_ray.push_back(sample(cplx(-0.1, t)));
  return rep;
}

}  // namespace adspec
