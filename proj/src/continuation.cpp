// SPDX-License-Identifier: Apache-2.0
#include "adspec/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "adspec/eigs.hpp"
#include "adspec/errors.hpp"

namespace adspec
{

std::string to_string(FamilyKind k)
{
  switch (k)
  {
    case FamilyKind::Epsilon:
      return "epsilon";
    case FamilyKind::Shape:
      return "shape";
    default:
      return "coefficient";
  }
}

FamilyKind family_from_string(const std::string &s)
{
  if (s == "epsilon") return FamilyKind::Epsilon;
  if (s == "shape") return FamilyKind::Shape;
  if (s == "coefficient") return FamilyKind::Coefficient;
  throw PreconditionError("unknown perturbation family '" + s + "' (epsilon, shape, coefficient)");
}

Problem PerturbationFamily::at(const Problem &base, double delta) const
{
  Problem p = base;
  switch (kind)
  {
    case FamilyKind::Epsilon:
      if (base.epsilon.is_constant())
      {
        const double e0 = base.epsilon.constant;
        p.epsilon.constant = e0 * (1.0 + delta * g.constant);
        p.epsilon.terms.clear();
        for (const auto &t : g.terms)
        {
          p.epsilon.terms.push_back({t.l, t.m, e0 * delta * t.c});
        }
      }
      else if (g.is_constant())
      {
        const double f = 1.0 + delta * g.constant;
        p.epsilon.constant *= f;
        for (auto &t : p.epsilon.terms) t.c *= f;
      }
      else
      {
        throw PreconditionError("epsilon family needs a constant base epsilon or a constant g");
      }
      break;
    case FamilyKind::Shape:
      p.delta = delta;
      p.shape = g;
      break;
    case FamilyKind::Coefficient:
      p.coefficient_scale = base.coefficient_scale * (1.0 + delta);
      break;
  }
  return p;
}

std::vector<double> PerturbationPath::uniform(double delta_max, int nsteps)
{
  if (nsteps < 2 || !(delta_max > 0.0))
  {
    throw PreconditionError("path needs delta_max > 0 and at least 2 samples");
  }
  std::vector<double> s(nsteps);
  for (int i = 0; i < nsteps; i++) s[i] = delta_max * i / (nsteps - 1);
  return s;
}

int count_distinct(const std::vector<cplx> &values, double rel)
{
  std::vector<cplx> reps;
  for (cplx v : values)
  {
    bool seen = false;
    for (cplx r : reps)
    {
      if (std::abs(v - r) <= rel * std::max(1.0, std::abs(v)))
      {
        seen = true;
        break;
      }
    }
    if (!seen) reps.push_back(v);
  }
  return static_cast<int>(reps.size());
}

namespace
{

double gap_of(const std::vector<Eigenpair> &ev, cplx lambda, double track)
{
  double gap = 0.0;
  bool found = false;
  for (const auto &e : ev)
  {
    double d = std::abs(e.lambda - lambda);
    if (d > track && (!found || d < gap))
    {
      gap = d;
      found = true;
    }
  }
  if (!found)
  {
    // Nothing outside the tracking disk among the computed pairs: the
    // farthest one bounds the gap from below.
    for (const auto &e : ev) gap = std::max(gap, std::abs(e.lambda - lambda));
  }
  return gap;
}

// Nearest eigenpairs for the corrector and the gap estimate. Far from the
// spectrum the sixth-nearest eigenvalue can sit in a near-tied cluster that
// the Krylov solver does not resolve; fewer neighbours still give a gap.
std::vector<Eigenpair> probe_near(const DiscreteGenerator &gen, cplx target)
{
  for (int count : {6, 3})
  {
    try
    {
      return eigs_near(gen, target, count);
    }
    catch (const NoConvergence &)
    {
    }
  }
  return eigs_near(gen, target, 2);
}

int rank_at(const DiscreteGenerator &gen, cplx lambda, double radius, int nodes)
{
  try
  {
    ContourSpec c{lambda, radius, nodes};
    c.validate();
    return spectral_projector(gen, c).rank;
  }
  catch (const ComputeError &)
  {
    return -1;
  }
  catch (const PreconditionError &)
  {
    return -1;
  }
}

}  // namespace

ContinuationResult continue_eigenvalue(const PerturbationPath &path, cplx seed, const StepControl &ctl)
{
  if (path.steps.empty())
  {
    throw PreconditionError("empty perturbation path");
  }
  for (std::size_t i = 1; i < path.steps.size(); i++)
  {
    if (!(path.steps[i] > path.steps[i - 1]))
    {
      throw PreconditionError("path steps must be strictly increasing");
    }
  }
  ContinuationResult out;
  double cur = path.steps[0];
  DiscreteGenerator g0 = path.generator(cur);
  auto ev = probe_near(g0, seed);
  cplx lam = ev.front().lambda;
  const double track = ctl.track_factor * std::abs(lam.real());
  out.track_radius = track;
  if (std::abs(lam - seed) > track)
  {
    throw PreconditionError("seed is not an eigenvalue of the starting generator");
  }
  double gap = gap_of(ev, lam, track);
  out.points.push_back({cur, lam, ctl.projector_ranks ? rank_at(g0, lam, track, ctl.projector_nodes) : -1,
                        ev.front().residual, gap});

  for (std::size_t k = 1; k < path.steps.size(); k++)
  {
    const double target = path.steps[k];
    while (cur < target)
    {
      double h = target - cur;
      int halvings = 0;
      while (true)
      {
        const double d = std::min(cur + h, target);
        cplx pred = lam;
        if (out.points.size() >= 2)
        {
          const auto &a = out.points[out.points.size() - 2];
          const auto &b = out.points.back();
          pred = b.lambda + (b.lambda - a.lambda) / (b.delta - a.delta) * (d - b.delta);
        }
        DiscreteGenerator g = path.generator(d);
        auto evn = probe_near(g, pred);
        const cplx ln = evn.front().lambda;
        const bool trusted = std::abs(ln - pred) <= track;
        const bool small = std::abs(ln - lam) <= ctl.gap_fraction * gap;
        if (!(trusted && small))
        {
          if (halvings++ < ctl.max_halvings)
          {
            h *= 0.5;
            continue;
          }
          throw PathLost("eigenvalue lost along the path; last good delta = " + std::to_string(cur));
        }
        gap = gap_of(evn, ln, track);
        lam = ln;
        cur = d;
        out.points.push_back({cur, lam, ctl.projector_ranks ? rank_at(g, lam, track, ctl.projector_nodes) : -1,
                              evn.front().residual, gap});
        break;
      }
    }
  }
  return out;
}

SplittingReport splitting_report(const PerturbationPath &path, const ContourSpec &contour)
{
  contour.validate();
  SplittingReport rep;
  rep.contour = contour;
  for (std::size_t k = 0; k < path.steps.size(); k++)
  {
    const double d = path.steps[k];
    try
    {
      DiscreteGenerator g = path.generator(d);
      ProjectorResult pr = spectral_projector(g, contour);
      if (k == 0) rep.rank0 = pr.rank;
      rep.deltas.push_back(d);
      rep.counts.push_back(pr.rank);
      rep.distinct.push_back(count_distinct(pr.eigenvalues_inside));
      rep.total_constant = rep.total_constant && pr.rank == rep.rank0;
    }
    catch (const ContourNearEigenvalue &e)
    {
      rep.complete = false;
      rep.failure = "delta = " + std::to_string(d) + ": " + e.what();
      if (k == 0) throw;
      break;
    }
  }
  return rep;
}

}  // namespace adspec
