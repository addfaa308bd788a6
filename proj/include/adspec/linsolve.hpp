// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/SparseLU>

#include "adspec/discrete.hpp"

namespace adspec
{

// Restriction of K and W to one decoupled component of the generator.
struct ComponentSystem
{
  std::vector<int> dofs;
  SpMat K, W;
};

std::vector<ComponentSystem> split_components(const DiscreteGenerator &gen);

// Sparse LU of (a W + b K) factored independently on every decoupled
// component. Factorizations (and multi-vector solves) run in parallel over
// components under Exec::Parallel.
template <typename Scalar>
class BlockSolver
{
public:
  using SpS = Eigen::SparseMatrix<Scalar>;
  using MatS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BlockSolver(const std::vector<ComponentSystem> &parts, int n, Scalar a, Scalar b, Exec exec = Exec::Parallel);

  bool ok() const { return ok_; }
  int size() const { return n_; }
  // Solves against a block of right-hand sides (complex data accepted for
  // real factorizations: real and imaginary parts are solved separately).
  MatC solve(const MatC &rhs) const;
  VecC solve(const VecC &rhs) const { return solve(MatC(rhs)).col(0); }
  const SpS &matrix(int c) const { return mats_[c]; }

private:
  std::vector<std::vector<int>> dofs_;
  std::vector<SpS> mats_;
  std::vector<std::unique_ptr<Eigen::SparseLU<SpS>>> lu_;
  int n_ = 0;
  bool ok_ = true;
  Exec exec_;
};

extern template class BlockSolver<double>;
extern template class BlockSolver<cplx>;

// Factorization of z W - K; throws FactorizationSingular if it breaks down.
class ShiftedSolver
{
public:
  ShiftedSolver(const DiscreteGenerator &gen, cplx z, Exec exec = Exec::Parallel);
  ShiftedSolver(const std::vector<ComponentSystem> &parts, int n, cplx z, Exec exec = Exec::Parallel);

  cplx shift() const { return z_; }
  // (z W - K)^{-1} rhs
  MatC solve(const MatC &rhs) const { return lu_.solve(rhs); }
  VecC solve(const VecC &rhs) const { return lu_.solve(rhs); }

private:
  cplx z_;
  BlockSolver<cplx> lu_;
};

// (z - G)^{-1} with one cached factorization per z.
class Resolvent
{
public:
  explicit Resolvent(const DiscreteGenerator &gen, Exec exec = Exec::Parallel);

  // x = (z - G)^{-1} b, iteratively refined to a relative residual < 1e-10
  // in the energy norm. Throws NearSingularSolve if the estimated condition
  // number of z - G exceeds 1e14.
  VecC solve(cplx z, const VecC &b);
  MatC solve_block(cplx z, const MatC &B);
  double condition_estimate(cplx z);
  // Residual ||(z - G) x - b||_W / ||b||_W.
  double residual(cplx z, const VecC &x, const VecC &b) const;
  std::size_t cached() const { return cache_.size(); }

private:
  struct Entry
  {
    std::shared_ptr<ShiftedSolver> solver;
    double cond = -1.0;
  };
  Entry &entry(cplx z);
  double generator_norm();

  const DiscreteGenerator &gen_;
  std::vector<ComponentSystem> parts_;
  Exec exec_;
  std::map<std::pair<double, double>, Entry> cache_;
  double gnorm_ = -1.0;
  std::mutex mu_;
};

VecC resolvent_solve(const DiscreteGenerator &gen, cplx z, const VecC &rhs);

}  // namespace adspec
