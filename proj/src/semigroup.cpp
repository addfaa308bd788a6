// SPDX-License-Identifier: Apache-2.0
#include "adspec/semigroup.hpp"

#include <cmath>
#include <random>

#include <Eigen/SparseLU>

#include "adspec/diagnostics.hpp"
#include "adspec/errors.hpp"
#include "adspec/linsolve.hpp"

namespace adspec
{

namespace
{

struct ComponentRun
{
  std::vector<double> energy, flux, loss;
  std::vector<std::vector<cplx>> overlaps, probes;
  VecC final;
  bool rejected = false;
};

}  // namespace

EvolveTrace evolve(const DiscreteGenerator &gen, const VecC &f, const EvolveOptions &opt)
{
  if (f.size() != gen.size())
  {
    throw DimensionMismatch("initial state has the wrong length");
  }
  if (!(opt.T > 0.0) || opt.dt < 0.0)
  {
    throw PreconditionError("evolve needs T > 0 and dt >= 0");
  }
  for (int d : opt.probe_dofs)
  {
    if (d < 0 || d >= gen.size()) throw PreconditionError("probe dof out of range");
  }
  for (const auto &v : opt.overlaps)
  {
    if (v.size() != gen.size()) throw DimensionMismatch("overlap vector has the wrong length");
  }
  const double vmax = gen.problem.coefficient_scale;
  double dt = opt.dt > 0.0 ? opt.dt : gen.grid.h_min() / (2.0 * vmax);
  const int steps = static_cast<int>(std::ceil(opt.T / dt - 1e-9));
  dt = opt.T / steps;

  auto parts = split_components(gen);
  const int nc = static_cast<int>(parts.size());
  std::vector<int> owner(gen.size()), local(gen.size());
  for (int c = 0; c < nc; c++)
  {
    for (std::size_t i = 0; i < parts[c].dofs.size(); i++)
    {
      owner[parts[c].dofs[i]] = c;
      local[parts[c].dofs[i]] = static_cast<int>(i);
    }
  }
  // Boundary and absorber parts restricted to each component.
  auto restrict = [&](const SpMat &A, int c) {
    const auto &d = parts[c].dofs;
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k < A.outerSize(); k++)
    {
      for (SpMat::InnerIterator it(A, k); it; ++it)
      {
        if (owner[it.row()] == c) t.emplace_back(local[it.row()], local[it.col()], it.value());
      }
    }
    SpMat out(d.size(), d.size());
    out.setFromTriplets(t.begin(), t.end());
    return out;
  };

  std::vector<ComponentRun> runs(nc);
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
  for (int c = 0; c < nc; c++)
  {
    const auto &P = parts[c];
    const int m = static_cast<int>(P.dofs.size());
    SpMat A = P.W - 0.5 * dt * P.K, B = P.W + 0.5 * dt * P.K;
    A.makeCompressed();
    Eigen::SparseLU<SpMat> lu(A);
    SpMat Kb = restrict(gen.K_bnd, c), Ka = restrict(gen.K_abs, c);
    const SpMatC Wc = P.W.cast<cplx>(), Bc = B.cast<cplx>(), Kbc = Kb.cast<cplx>(), Kac = Ka.cast<cplx>();
    std::vector<VecC> ov;
    for (const auto &v : opt.overlaps)
    {
      VecC s(m);
      for (int i = 0; i < m; i++) s[i] = v[P.dofs[i]];
      ov.push_back(s);
    }
    std::vector<int> pd;
    for (int d : opt.probe_dofs) pd.push_back(owner[d] == c ? local[d] : -1);

    VecC x(m);
    for (int i = 0; i < m; i++) x[i] = f[P.dofs[i]];
    ComponentRun &run = runs[c];
    auto record = [&](const VecC &y) {
      run.energy.push_back(std::real(y.dot(Wc * y)));
      std::vector<cplx> o;
      for (const auto &v : ov) o.push_back(v.dot(Wc * y));
      run.overlaps.push_back(o);
      std::vector<cplx> p;
      for (int d : pd) p.push_back(d >= 0 ? y[d] : cplx(0.0));
      run.probes.push_back(p);
    };
    record(x);
    for (int s = 0; s < steps; s++)
    {
      VecC rhs = Bc * x;
      VecC xn(m);
      // Contiguous targets: SparseLU::solve into a strided view is wrong.
      const Vec re = lu.solve(Vec(rhs.real())), im = lu.solve(Vec(rhs.imag()));
      xn.real() = re;
      xn.imag() = im;
      VecC mid = 0.5 * (x + xn);
      run.flux.push_back(2.0 * std::real(mid.dot(Kbc * mid)));
      run.loss.push_back(2.0 * std::real(mid.dot(Kac * mid)));
      x.swap(xn);
      record(x);
      const double e0 = run.energy[run.energy.size() - 2], e1 = run.energy.back();
      if (e1 > e0 * (1.0 + opt.growth_tol) + 1e-300)
      {
        run.rejected = true;
        break;
      }
    }
    run.final = x;
  }
  for (const auto &r : runs)
  {
    if (r.rejected)
    {
      throw StepRejected("energy grew during a step");
    }
  }

  EvolveTrace tr;
  tr.dt = dt;
  tr.steps = steps;
  tr.final_state = VecC::Zero(gen.size());
  for (int s = 0; s <= steps; s++)
  {
    tr.t.push_back(s * dt);
    double e = 0.0, fl = 0.0, lo = 0.0;
    std::vector<cplx> o(opt.overlaps.size(), 0.0), p(opt.probe_dofs.size(), 0.0);
    for (int c = 0; c < nc; c++)
    {
      e += runs[c].energy[s];
      if (s > 0)
      {
        fl += runs[c].flux[s - 1];
        lo += runs[c].loss[s - 1];
      }
      for (std::size_t i = 0; i < o.size(); i++) o[i] += runs[c].overlaps[s][i];
      for (std::size_t i = 0; i < p.size(); i++) p[i] += runs[c].probes[s][i];
    }
    tr.energy.push_back(e);
    tr.boundary_flux.push_back(fl);
    tr.absorber_loss.push_back(lo);
    tr.overlaps.push_back(o);
    tr.probes.push_back(p);
  }
  for (int c = 0; c < nc; c++)
  {
    for (std::size_t i = 0; i < parts[c].dofs.size(); i++) tr.final_state[parts[c].dofs[i]] = runs[c].final[i];
  }
  return tr;
}

FluxAudit energy_flux_audit(const EvolveTrace &tr)
{
  FluxAudit a;
  double emax = 0.0;
  for (double e : tr.energy) emax = std::max(emax, e);
  if (tr.steps == 0 || emax == 0.0)
  {
    return a;
  }
  a.max_boundary_flux = -std::numeric_limits<double>::infinity();
  double sf = 0.0, st = 0.0;
  for (int k = 1; k <= tr.steps; k++)
  {
    double rate = (tr.energy[k] - tr.energy[k - 1]) / tr.dt;
    a.max_identity_error =
        std::max(a.max_identity_error, std::abs(rate - tr.boundary_flux[k] - tr.absorber_loss[k]) / emax);
    a.max_boundary_flux = std::max(a.max_boundary_flux, tr.boundary_flux[k]);
    a.flux_nonpositive = a.flux_nonpositive && tr.boundary_flux[k] <= 0.0;
    double em = 0.5 * (tr.energy[k] + tr.energy[k - 1]);
    if (em > 0.0)
    {
      sf += tr.boundary_flux[k] / em;
      st += (tr.boundary_flux[k] + tr.absorber_loss[k]) / em;
    }
  }
  a.mean_flux_rate = sf / tr.steps;
  a.mean_total_rate = st / tr.steps;
  return a;
}

VecC eigenmode_initial(const DiscreteGenerator &gen, const ModeProblem &mode, cplx lambda)
{
  RadialProfile prof;
  prof.l = mode.l;
  prof.pol = mode.pol;
  prof.lambda = lambda;
  VecC x = sample_profile(gen, prof, 0);
  return x / gen.norm(x);
}

VecC shell_data(const DiscreteGenerator &gen, int mode, double r0, double r1, int degree)
{
  if (!(r1 > r0) || mode < 0 || mode >= static_cast<int>(gen.modes.size()))
  {
    throw PreconditionError("shell data needs r1 > r0 and a valid mode");
  }
  auto bump = [&](double r) {
    double t = (2.0 * r - (r0 + r1)) / (r1 - r0);
    return std::abs(t) < 1.0 ? std::pow(1.0 - t * t, degree) : 0.0;
  };
  VecC x = VecC::Zero(gen.size());
  for (int i = 0; i <= gen.grid.N; i++) x[gen.u(mode, i)] = bump(gen.grid.r_node[i]);
  for (int j = 0; j < gen.grid.N; j++) x[gen.w(mode, j)] = bump(gen.grid.r_half[j]);
  return x;
}

FiniteSpeedResult finite_speed_test(const DiscreteGenerator &gen, const VecC &f, double b, double c, double T, double dt)
{
  if (!(c < gen.resolution.absorber.r_start) || !(c > gen.grid.a))
  {
    throw PreconditionError("probe radius must lie between the obstacle and the absorber");
  }
  EvolveOptions opt;
  opt.T = T;
  opt.dt = dt;
  const int ic = gen.grid.nearest_node(c), ih = gen.grid.nearest_half(c);
  for (int k = 0; k < static_cast<int>(gen.modes.size()); k++)
  {
    opt.probe_dofs.push_back(gen.u(k, ic));
    opt.probe_dofs.push_back(gen.w(k, ih));
    opt.probe_dofs.push_back(gen.s(k, ic));
  }
  EvolveTrace tr = evolve(gen, f, opt);
  FiniteSpeedResult r;
  r.dt = tr.dt;
  r.threshold = 1e-8 * gen.norm(f);
  r.bound = (c - b) / gen.problem.coefficient_scale - 2.0 * tr.dt;
  for (std::size_t s = 0; s < tr.t.size(); s++)
  {
    double amp = 0.0;
    for (cplx v : tr.probes[s]) amp = std::max(amp, std::abs(v));
    if (amp > r.threshold)
    {
      r.arrival = tr.t[s];
      break;
    }
  }
  r.passed = r.arrival < 0.0 || r.arrival >= r.bound;
  return r;
}

DecayReport decay_experiment(const DiscreteGenerator &gen, double T, int witnesses, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  // Boundary-localised data: random mixture over modes of a bump on [a, a + 1].
  VecC f = VecC::Zero(gen.size());
  for (int k = 0; k < static_cast<int>(gen.modes.size()); k++)
  {
    f += nd(rng) * shell_data(gen, k, gen.grid.a - 1.0, gen.grid.a + 1.0, 4);
  }
  // Orthogonalise (twice) against interior gradient witnesses.
  std::vector<VecC> basis;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double lo = gen.grid.a + 0.5, hi = gen.resolution.absorber.r_start - 0.5;
  for (int i = 0; i < witnesses; i++)
  {
    int mode = static_cast<int>(U(rng) * gen.modes.size()) % static_cast<int>(gen.modes.size());
    double hw = 0.5 + U(rng);
    double c = lo + hw + (hi - lo - 2 * hw) * U(rng);
    VecC v = gradient_witness(gen, mode, [=](double r) {
      double t = (r - c) / hw;
      return std::abs(t) < 1.0 ? std::pow(1.0 - t * t, 4) : 0.0;
    });
    for (int pass = 0; pass < 2; pass++)
      for (const auto &q : basis) v -= gen.inner(q, v) * q;
    v /= gen.norm(v);
    basis.push_back(v);
  }
  for (int pass = 0; pass < 2; pass++)
    for (const auto &q : basis) f -= gen.inner(q, f) * q;
  f /= gen.norm(f);
  DecayReport rep;
  for (const auto &q : basis) rep.kernel_overlap = std::max(rep.kernel_overlap, std::abs(gen.inner(q, f)));
  EvolveOptions opt;
  opt.T = T;
  EvolveTrace tr = evolve(gen, f, opt);
  const int every = std::max(1, tr.steps / 50);
  for (int s = 0; s <= tr.steps; s += every)
  {
    rep.t.push_back(tr.t[s]);
    rep.relative_energy.push_back(tr.energy[s] / tr.energy[0]);
  }
  return rep;
}

}  // namespace adspec
