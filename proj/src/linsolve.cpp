// SPDX-License-Identifier: Apache-2.0
#include "adspec/linsolve.hpp"

#include <cmath>
#include <random>

#include "adspec/errors.hpp"

namespace adspec
{

std::vector<ComponentSystem> split_components(const DiscreteGenerator &gen)
{
  std::vector<ComponentSystem> parts(gen.components.size());
  std::vector<int> local(gen.size(), -1), owner(gen.size(), -1);
  for (std::size_t c = 0; c < parts.size(); c++)
  {
    parts[c].dofs = gen.component_dofs(static_cast<int>(c));
    for (std::size_t i = 0; i < parts[c].dofs.size(); i++)
    {
      local[parts[c].dofs[i]] = static_cast<int>(i);
      owner[parts[c].dofs[i]] = static_cast<int>(c);
    }
  }
  for (const auto &[src, dst] : {std::pair{&gen.K, 0}, std::pair{&gen.W, 1}})
  {
    std::vector<std::vector<Eigen::Triplet<double>>> trip(parts.size());
    for (int k = 0; k < src->outerSize(); k++)
    {
      for (SpMat::InnerIterator it(*src, k); it; ++it)
      {
        int c = owner[it.row()];
        if (owner[it.col()] != c)
        {
          throw InvalidSystem("component split found a coupling across components");
        }
        trip[c].emplace_back(local[it.row()], local[it.col()], it.value());
      }
    }
    for (std::size_t c = 0; c < parts.size(); c++)
    {
      int m = static_cast<int>(parts[c].dofs.size());
      SpMat &out = dst == 0 ? parts[c].K : parts[c].W;
      out.resize(m, m);
      out.setFromTriplets(trip[c].begin(), trip[c].end());
      out.makeCompressed();
    }
  }
  return parts;
}

template <typename Scalar>
BlockSolver<Scalar>::BlockSolver(const std::vector<ComponentSystem> &parts, int n, Scalar a, Scalar b, Exec exec)
    : n_(n), exec_(exec)
{
  const int nc = static_cast<int>(parts.size());
  dofs_.resize(nc);
  mats_.resize(nc);
  lu_.resize(nc);
  std::vector<char> good(nc, 1);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (int c = 0; c < nc; c++)
  {
    dofs_[c] = parts[c].dofs;
    SpS A = a * parts[c].W.template cast<Scalar>() + b * parts[c].K.template cast<Scalar>();
    A.makeCompressed();
    mats_[c] = A;
    lu_[c] = std::make_unique<Eigen::SparseLU<SpS>>();
    lu_[c]->analyzePattern(mats_[c]);
    lu_[c]->factorize(mats_[c]);
    if (lu_[c]->info() != Eigen::Success || !std::isfinite(std::real(lu_[c]->logAbsDeterminant())))
    {
      good[c] = 0;
    }
  }
  for (char g : good)
  {
    ok_ = ok_ && g;
  }
}

template <typename Scalar>
MatC BlockSolver<Scalar>::solve(const MatC &rhs) const
{
  MatC out(rhs.rows(), rhs.cols());
  const int nc = static_cast<int>(lu_.size());
#pragma omp parallel for schedule(dynamic) if (exec_ == Exec::Parallel)
  for (int c = 0; c < nc; c++)
  {
    const auto &d = dofs_[c];
    const Eigen::Index m = static_cast<Eigen::Index>(d.size());
    if constexpr (std::is_same_v<Scalar, cplx>)
    {
      MatC r(m, rhs.cols());
      for (Eigen::Index i = 0; i < m; i++) r.row(i) = rhs.row(d[i]);
      MatC x = lu_[c]->solve(r);
      for (Eigen::Index i = 0; i < m; i++) out.row(d[i]) = x.row(i);
    }
    else
    {
      Mat r(m, 2 * rhs.cols());
      for (Eigen::Index i = 0; i < m; i++)
      {
        r.row(i).head(rhs.cols()) = rhs.row(d[i]).real();
        r.row(i).tail(rhs.cols()) = rhs.row(d[i]).imag();
      }
      Mat x = lu_[c]->solve(r);
      for (Eigen::Index i = 0; i < m; i++)
      {
        out.row(d[i]).real() = x.row(i).head(rhs.cols());
        out.row(d[i]).imag() = x.row(i).tail(rhs.cols());
      }
    }
  }
  return out;
}

template class BlockSolver<double>;
template class BlockSolver<cplx>;

ShiftedSolver::ShiftedSolver(const DiscreteGenerator &gen, cplx z, Exec exec)
    : ShiftedSolver(split_components(gen), gen.size(), z, exec)
{
}

ShiftedSolver::ShiftedSolver(const std::vector<ComponentSystem> &parts, int n, cplx z, Exec exec)
    : z_(z), lu_(parts, n, z, cplx(-1.0), exec)
{
  if (!lu_.ok())
  {
    throw FactorizationSingular("z W - K is singular at z = (" + std::to_string(z.real()) + ", " +
                                std::to_string(z.imag()) + ")");
  }
}

Resolvent::Resolvent(const DiscreteGenerator &gen, Exec exec) : gen_(gen), parts_(split_components(gen)), exec_(exec) {}

Resolvent::Entry &Resolvent::entry(cplx z)
{
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(z.real(), z.imag());
  auto it = cache_.find(key);
  if (it != cache_.end())
  {
    return it->second;
  }
  Entry e;
  try
  {
    e.solver = std::make_shared<ShiftedSolver>(parts_, gen_.size(), z, exec_);
  }
  catch (const FactorizationSingular &)
  {
    throw NearSingularSolve("z - G is numerically singular");
  }
  return cache_.emplace(key, std::move(e)).first->second;
}

double Resolvent::generator_norm()
{
  std::lock_guard<std::mutex> lock(mu_);
  if (gnorm_ >= 0.0)
  {
    return gnorm_;
  }
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  VecC x(gen_.size());
  for (auto &v : x) v = nd(rng);
  x /= gen_.norm(x);
  double est = 0.0;
  for (int it = 0; it < 20; it++)
  {
    VecC y = gen_.apply(x);
    est = gen_.norm(y);
    x = y / est;
  }
  gnorm_ = est;
  return gnorm_;
}

double Resolvent::condition_estimate(cplx z)
{
  Entry &e = entry(z);
  if (e.cond >= 0.0)
  {
    return e.cond;
  }
  // A few steps of inverse iteration on (z - G): the growth factor estimates
  // ||(z - G)^{-1}||_W from below.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  VecC x(gen_.size());
  for (auto &v : x) v = cplx(nd(rng), nd(rng));
  x /= gen_.norm(x);
  double inv = 0.0;
  for (int it = 0; it < 4; it++)
  {
    VecC y = e.solver->solve(VecC(gen_.W * x));
    inv = gen_.norm(y);
    if (!std::isfinite(inv))
    {
      inv = std::numeric_limits<double>::infinity();
      break;
    }
    x = y / inv;
  }
  double cond = (std::abs(z) + generator_norm()) * inv;
  e.cond = cond;
  return cond;
}

double Resolvent::residual(cplx z, const VecC &x, const VecC &b) const
{
  VecC r = z * x - gen_.apply(x) - b;
  double nb = gen_.norm(b);
  return nb > 0.0 ? gen_.norm(r) / nb : gen_.norm(r);
}

MatC Resolvent::solve_block(cplx z, const MatC &B)
{
  if (condition_estimate(z) > 1e14)
  {
    throw NearSingularSolve("estimated condition of z - G exceeds 1e14");
  }
  Entry &e = entry(z);
  MatC WB = gen_.W * B;
  MatC X = e.solver->solve(WB);
  for (int it = 0; it < 4; it++)
  {
    MatC R = WB - (z * (gen_.W * X) - gen_.K * X);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < B.cols(); j++)
    {
      VecC rj = gen_.solve_mass(R.col(j));
      double nb = gen_.norm(B.col(j));
      worst = std::max(worst, nb > 0 ? gen_.norm(rj) / nb : gen_.norm(rj));
    }
    if (worst < 1e-13)
    {
      break;
    }
    X += e.solver->solve(R);
  }
  return X;
}

VecC Resolvent::solve(cplx z, const VecC &b) { return solve_block(z, MatC(b)).col(0); }

VecC resolvent_solve(const DiscreteGenerator &gen, cplx z, const VecC &rhs)
{
  Resolvent r(gen);
  return r.solve(z, rhs);
}

}  // namespace adspec
