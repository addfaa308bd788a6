// SPDX-License-Identifier: Apache-2.0
#include "adspec/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "adspec/errors.hpp"
#include "adspec/linsolve.hpp"

namespace adspec
{

namespace
{

struct Local
{
  cplx lambda;
  VecC x;  // component-local, unit W-norm
  double residual;
};

class SubProblem
{
public:
  SubProblem(const ComponentSystem &part, bool diagonal) : p_(part)
  {
    Wc_ = p_.W.cast<cplx>();
    Kc_ = p_.K.cast<cplx>();
    if (diagonal)
    {
      wdiag_ = p_.W.diagonal();
    }
    else
    {
      ldlt_.compute(p_.W);
    }
  }

  int size() const { return static_cast<int>(p_.dofs.size()); }
  cplx dot(const VecC &a, const VecC &b) const { return a.dot(Wc_ * b); }
  double norm(const VecC &a) const { return std::sqrt(std::max(0.0, std::real(dot(a, a)))); }

  VecC mass_solve(const VecC &b) const
  {
    if (wdiag_.size())
    {
      return b.cwiseQuotient(wdiag_.cast<cplx>());
    }
    VecC x(b.size());
    const Vec re = ldlt_.solve(Vec(b.real())), im = ldlt_.solve(Vec(b.imag()));
    x.real() = re;
    x.imag() = im;
    return x;
  }

  double residual(cplx lambda, const VecC &x) const
  {
    VecC r = mass_solve(Kc_ * x) - lambda * x;
    return norm(r) / norm(x);
  }

  const ComponentSystem &part() const { return p_; }
  const SpMatC &Kc() const { return Kc_; }
  const SpMatC &Wc() const { return Wc_; }

private:
  const ComponentSystem &p_;
  SpMatC Wc_, Kc_;
  Vec wdiag_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

std::vector<Local> dense_solve(const SubProblem &sp, cplx target, int count)
{
  Mat K(sp.part().K), W(sp.part().W);
  Mat G = W.llt().solve(K);
  Eigen::EigenSolver<Mat> es(G);
  if (es.info() != Eigen::Success)
  {
    throw NoConvergence("dense eigensolver failed");
  }
  std::vector<int> idx(G.rows());
  for (int i = 0; i < static_cast<int>(idx.size()); i++) idx[i] = i;
  auto ev = es.eigenvalues();
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(ev[a] - target) < std::abs(ev[b] - target); });
  std::vector<Local> out;
  for (int i = 0; i < std::min<int>(count, static_cast<int>(idx.size())); i++)
  {
    VecC x = es.eigenvectors().col(idx[i]);
    x /= sp.norm(x);
    out.push_back({ev[idx[i]], x, sp.residual(ev[idx[i]], x)});
  }
  return out;
}

// W-orthonormalise the columns of C against V (CGS, twice) and among
// themselves; collapsed columns are replaced by random directions.
MatC orthonormalize(const SubProblem &sp, const MatC &V, MatC C, std::mt19937_64 &rng)
{
  std::normal_distribution<double> nd;
  for (Eigen::Index j = 0; j < C.cols(); j++)
  {
    for (int attempt = 0; attempt < 3; attempt++)
    {
      double before = sp.norm(C.col(j));
      for (int pass = 0; pass < 2; pass++)
      {
        if (V.cols())
        {
          VecC h = V.adjoint() * (sp.Wc() * C.col(j));
          C.col(j) -= V * h;
        }
        if (j)
        {
          VecC h = C.leftCols(j).adjoint() * (sp.Wc() * C.col(j));
          C.col(j) -= C.leftCols(j) * h;
        }
      }
      double after = sp.norm(C.col(j));
      if (after > 1e-10 * before && after > 0.0)
      {
        C.col(j) /= after;
        break;
      }
      for (Eigen::Index i = 0; i < C.rows(); i++) C(i, j) = cplx(nd(rng), nd(rng));
    }
  }
  return C;
}

std::vector<Local> krylov_solve(const SubProblem &sp, cplx target, int count, const EigsOptions &opt, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int m = sp.size();
  const int b = std::max(1, opt.block);
  const int maxk = std::min(m, std::max(opt.max_basis, 2 * (count + b) + b));

  // Shift-invert operator, jittering a shift that hits the spectrum.
  cplx sigma = target;
  Eigen::SparseLU<SpMatC> lu;
  bool ok = false;
  for (int attempt = 0; attempt <= 3 && !ok; attempt++)
  {
    if (attempt)
    {
      double ang = 2 * pi * std::uniform_real_distribution<double>(0, 1)(rng);
      sigma = target + 1e-6 * std::max(1.0, std::abs(target)) * attempt * std::polar(1.0, ang);
    }
    SpMatC A = sp.Kc() - sigma * sp.Wc();
    A.makeCompressed();
    lu.compute(A);
    ok = lu.info() == Eigen::Success && std::isfinite(std::real(lu.logAbsDeterminant()));
  }
  if (!ok)
  {
    throw FactorizationSingular("shift coincides with an eigenvalue after three jitters");
  }
  auto op = [&](const MatC &X) -> MatC { return lu.solve(MatC(sp.Wc() * X)); };

  // A shift sitting on an eigenvalue (a continuation seed, say) factors fine
  // but swamps every other direction in roundoff. Move it off along the real
  // axis, which keeps conjugate pairs tied, and widen the search slightly so
  // the final sort by distance to the target still sees the right set.
  {
    VecC probe(m);
    for (auto &v : probe) v = cplx(nd(rng), nd(rng));
    const double growth = sp.norm(op(probe).col(0)) / sp.norm(probe);
    const double scale = std::max(1.0, std::abs(target));
    if (!(growth * scale < 1e8))
    {
      sigma = target + 1e-3 * scale;
      SpMatC A = sp.Kc() - sigma * sp.Wc();
      A.makeCompressed();
      lu.compute(A);
      if (lu.info() != Eigen::Success)
      {
        throw FactorizationSingular("shift coincides with an eigenvalue after moving it");
      }
      count = std::min(m, count + 2);
    }
  }

  MatC start(m, b);
  for (auto &v : start.reshaped()) v = cplx(nd(rng), nd(rng));
  MatC V = orthonormalize(sp, MatC(m, 0), start, rng);
  MatC AV = op(V);

  std::vector<Local> best;
  for (int restart = 0; restart <= opt.max_restarts; restart++)
  {
    while (true)
    {
      const int k = static_cast<int>(V.cols());
      MatC H = V.adjoint() * (sp.Wc() * AV);
      Eigen::ComplexEigenSolver<MatC> es(H);
      std::vector<int> idx(k);
      for (int i = 0; i < k; i++) idx[i] = i;
      const auto &th = es.eigenvalues();
      std::sort(idx.begin(), idx.end(), [&](int x, int y) { return std::abs(th[x]) > std::abs(th[y]); });

      int want = std::min(count, k);
      if (opt.reach > 0.0)
      {
        // Ritz values outside the reach are not wanted.
        int w = 0;
        while (w < want && std::abs(th[idx[w]]) * opt.reach >= 1.0) w++;
        want = w;
      }
      best.clear();
      int converged = 0;
      std::vector<int> unconverged;
      for (int i = 0; i < want; i++)
      {
        VecC y = es.eigenvectors().col(idx[i]);
        VecC x = V * y;
        double nx = sp.norm(x);
        x /= nx;
        cplx lambda = sigma + 1.0 / th[idx[i]];
        double r = sp.residual(lambda, x);
        best.push_back({lambda, x, r});
        if (r < opt.tol)
        {
          converged++;
        }
        else
        {
          unconverged.push_back(i);
        }
      }
      const int min_basis = opt.reach > 0.0 ? std::min(m, 4 * b) : std::min(m, count + b);
      if (converged == want && k >= min_basis)
      {
        return best;
      }
      if (k + b > maxk)
      {
        // Explicit restart: keep the count + b most wanted Ritz vectors.
        const int keep = std::min(k, count + b);
        MatC Y(k, keep);
        for (int i = 0; i < keep; i++) Y.col(i) = es.eigenvectors().col(idx[i]);
        MatC Vn = V * Y, AVn = AV * Y;
        // W-orthonormalise Vn through a small QR in the W-inner product.
        MatC G = Vn.adjoint() * (sp.Wc() * Vn);
        Eigen::LLT<MatC> llt(G);
        if (llt.info() != Eigen::Success)
        {
          MatC Q = orthonormalize(sp, MatC(m, 0), Vn, rng);
          V = Q;
          AV = op(V);
        }
        else
        {
          MatC Rinv = llt.matrixU().solve(MatC::Identity(keep, keep));
          V = Vn * Rinv;
          AV = AVn * Rinv;
        }
        break;
      }
      // Expand with the images of the wanted, unconverged Ritz vectors.
      std::vector<int> order = unconverged;
      for (int i = want; i < k; i++) order.push_back(i);
      if (order.empty())
      {
        for (int i = 0; i < k; i++) order.push_back(i);
      }
      MatC C(m, b);
      for (int j = 0; j < b; j++)
      {
        C.col(j) = AV * es.eigenvectors().col(idx[order[j % order.size()]]);
      }
      MatC Vnew = orthonormalize(sp, V, C, rng);
      MatC AVnew = op(Vnew);
      MatC V2(m, k + b), AV2(m, k + b);
      V2 << V, Vnew;
      AV2 << AV, AVnew;
      V.swap(V2);
      AV.swap(AV2);
    }
  }
  throw NoConvergence("eigs_near did not converge within the restart cap");
}

}  // namespace

std::vector<Eigenpair> eigs_near(const DiscreteGenerator &gen, cplx target, int count, const EigsOptions &opt)
{
  if (!(target.real() < 0.0))
  {
    throw PreconditionError("eigs_near target must lie in Re z < 0");
  }
  if (count < 1)
  {
    throw PreconditionError("eigs_near count must be positive");
  }
  auto parts = split_components(gen);
  const int nc = static_cast<int>(parts.size());
  std::vector<std::vector<Local>> found(nc);
  std::vector<std::exception_ptr> errs(nc);
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
  for (int c = 0; c < nc; c++)
  {
    try
    {
      SubProblem sp(parts[c], gen.diagonal_mass);
      int cc = std::min(count, sp.size());
      found[c] = sp.size() <= opt.dense_limit ? dense_solve(sp, target, cc)
                                              : krylov_solve(sp, target, cc, opt, opt.seed + 7919ull * c);
      if (opt.reach > 0.0)
      {
        std::erase_if(found[c], [&](const Local &l) { return std::abs(l.lambda - target) > opt.reach; });
      }
    }
    catch (...)
    {
      errs[c] = std::current_exception();
    }
  }
  for (auto &e : errs)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  struct Tagged
  {
    int c;
    Local *l;
  };
  std::vector<Tagged> all;
  for (int c = 0; c < nc; c++)
  {
    for (auto &l : found[c]) all.push_back({c, &l});
  }
  std::stable_sort(all.begin(), all.end(), [&](const Tagged &a, const Tagged &b) {
    return std::abs(a.l->lambda - target) < std::abs(b.l->lambda - target);
  });
  std::vector<Eigenpair> out;
  for (int i = 0; i < std::min<int>(count, static_cast<int>(all.size())); i++)
  {
    Eigenpair e;
    e.lambda = all[i].l->lambda;
    e.residual = all[i].l->residual;
    e.vector = VecC::Zero(gen.size());
    const auto &d = parts[all[i].c].dofs;
    for (std::size_t j = 0; j < d.size(); j++) e.vector[d[j]] = all[i].l->x[j];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace adspec
