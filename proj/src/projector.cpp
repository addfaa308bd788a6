// SPDX-License-Identifier: Apache-2.0
#include "adspec/projector.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adspec/eigs.hpp"
#include "adspec/errors.hpp"
#include "adspec/linsolve.hpp"

namespace adspec
{

void ContourSpec::validate() const
{
  if (!(radius > 0.0) || nodes < 8)
  {
    throw PreconditionError("contour needs radius > 0 and at least 8 nodes");
  }
  if (!(center.real() + radius < 0.0))
  {
    throw PreconditionError("contour disk must lie in Re z < 0");
  }
}

std::vector<cplx> eigenvalues_within(const DiscreteGenerator &gen, cplx center, double reach)
{
  // The centre is often an eigenvalue itself (contours that follow a path);
  // shift slightly off it so the shift-invert operator stays well scaled.
  const cplx off = 0.05 * reach * cplx(0.6, 0.8);
  EigsOptions o;
  o.reach = 1.05 * reach;
  std::vector<cplx> out;
  for (const auto &e : eigs_near(gen, center + off, 64, o))
  {
    if (std::abs(e.lambda - center) <= reach) out.push_back(e.lambda);
  }
  return out;
}

namespace
{

// Sum over j in `idx` of rho e^{i theta_j} (z_j W - K)^{-1} W X, in node order.
MatC node_sum(const std::vector<ComponentSystem> &parts, const DiscreteGenerator &gen, const ContourSpec &c, int n,
              const std::vector<int> &idx, const MatC &WX, Exec exec)
{
  MatC acc = MatC::Zero(WX.rows(), WX.cols());
  const int chunk = exec == Exec::Parallel ? std::max(1, 2 * max_threads()) : 1;
  for (std::size_t s = 0; s < idx.size(); s += chunk)
  {
    const int m = static_cast<int>(std::min<std::size_t>(chunk, idx.size() - s));
    std::vector<MatC> part(m);
    std::vector<std::exception_ptr> errs(m);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (int q = 0; q < m; q++)
    {
      try
      {
        int j = idx[s + q];
        cplx z = c.node(j, n);
        ShiftedSolver lu(parts, gen.size(), z, Exec::Serial);
        part[q] = (c.radius * std::polar(1.0, 2.0 * pi * j / n)) * lu.solve(WX);
      }
      catch (...)
      {
        errs[q] = std::current_exception();
      }
    }
    for (int q = 0; q < m; q++)
    {
      if (errs[q])
      {
        try
        {
          std::rethrow_exception(errs[q]);
        }
        catch (const FactorizationSingular &)
        {
          throw ContourNearEigenvalue("resolvent singular on the contour");
        }
      }
      acc += part[q];
    }
  }
  return acc;
}

std::vector<int> range(int a, int b, int step)
{
  std::vector<int> v;
  for (int j = a; j < b; j += step) v.push_back(j);
  return v;
}

double w_opnorm(const DiscreteGenerator &gen, const MatC &D)
{
  if (D.cols() == 0) return 0.0;
  MatC G = D.adjoint() * (gen.W * D);
  return std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<MatC>(G).eigenvalues().maxCoeff()));
}

}  // namespace

MatC apply_projector(const DiscreteGenerator &gen, const ContourSpec &c, int nodes, const MatC &X, Exec exec)
{
  auto parts = split_components(gen);
  MatC WX = gen.W * X;
  return node_sum(parts, gen, c, nodes, range(0, nodes, 1), WX, exec) / static_cast<double>(nodes);
}

ProjectorResult spectral_projector(const DiscreteGenerator &gen, const ContourSpec &contour, const ProjectorOptions &opt)
{
  contour.validate();
  ProjectorResult res;
  res.contour = contour;
  if (opt.precheck)
  {
    auto ev = eigenvalues_within(gen, contour.center, 1.1 * contour.radius);
    for (cplx l : ev)
    {
      double d = std::abs(l - contour.center);
      if (std::abs(d - contour.radius) < 0.1 * contour.radius)
      {
        throw ContourNearEigenvalue("eigenvalue at distance " + std::to_string(std::abs(d - contour.radius)) +
                                    " from the contour");
      }
      if (d < contour.radius)
      {
        res.eigenvalues_inside.push_back(l);
      }
    }
    res.eigs_inside = static_cast<int>(res.eigenvalues_inside.size());
  }

  auto parts = split_components(gen);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  int p = std::max(1, opt.probes);
  while (true)
  {
    MatC X(gen.size(), p);
    for (auto &v : X.reshaped()) v = cplx(nd(rng), nd(rng));
    // W-orthonormal probe block.
    {
      MatC G = X.adjoint() * (gen.W * X);
      Eigen::LLT<MatC> llt(G);
      X = X * MatC(llt.matrixU().solve(MatC::Identity(p, p)));
    }
    const MatC WX = gen.W * X;

    int n = contour.nodes;
    MatC S = node_sum(parts, gen, contour, n, range(0, n, 1), WX, opt.exec);
    cplx prev_trace = 0.0;
    bool have_prev = false;
    while (true)
    {
      MatC Y = S / static_cast<double>(n);
      MatC M = Y.adjoint() * (gen.W * Y);
      Eigen::SelfAdjointEigenSolver<MatC> es(M);
      std::vector<double> sv(p);
      for (int i = 0; i < p; i++) sv[i] = std::sqrt(std::max(0.0, es.eigenvalues()[p - 1 - i]));
      // Probe columns have unit W-norm, so a genuine direction shows up far
      // above both the solver noise (~1e-10) and the 1e-7 floor.
      const double thr = std::max(1e-7, 1e-6 * sv[0]);
      int r = 0;
      while (r < p && sv[r] > thr) r++;

      MatC Q(gen.size(), r);
      for (int i = 0; i < r; i++) Q.col(i) = Y * es.eigenvectors().col(p - 1 - i) / sv[i];
      MatC PQ = r ? MatC(node_sum(parts, gen, contour, n, range(0, n, 1), MatC(gen.W * Q), opt.exec) /
                         static_cast<double>(n))
                  : MatC(gen.size(), 0);
      cplx trace = r ? (Q.adjoint() * (gen.W * PQ)).trace() : cplx(0.0);

      if (have_prev && std::abs(trace - prev_trace) < opt.trace_tol)
      {
        if (r == p)
        {
          break;  // probe block saturated: enlarge and redo
        }
        res.rank = r;
        res.trace = trace;
        res.basis = Q;
        res.idempotency = w_opnorm(gen, PQ - Q);
        res.nodes_used = n;
        res.trace_change = std::abs(trace - prev_trace);
        res.singular_values = sv;
        return res;
      }
      if (2 * n > opt.max_nodes)
      {
        throw QuadratureNotConverged("projector trace did not settle by " + std::to_string(n) + " nodes");
      }
      prev_trace = trace;
      have_prev = true;
      // Doubling reuses the existing nodes: add the odd nodes of the finer rule.
      S += node_sum(parts, gen, contour, 2 * n, range(1, 2 * n, 2), WX, opt.exec);
      n *= 2;
    }
    p *= 2;
    if (p > gen.size())
    {
      throw QuadratureNotConverged("projector rank exceeds the probe budget");
    }
  }
}

}  // namespace adspec
