// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "adspec/discrete.hpp"

namespace adspec
{

struct Eigenpair
{
  cplx lambda = 0.0;
  VecC vector;            // unit W-norm
  double residual = 0.0;  // ||G v - lambda v||_W / ||v||_W
};

struct EigsOptions
{
  int block = 4;
  int max_basis = 64;
  int max_restarts = 60;
  double tol = 1e-8;
  std::uint64_t seed = 20240611;
  // Components at most this large are solved densely.
  int dense_limit = 300;
  Exec exec = Exec::Parallel;
  // If > 0, only eigenvalues within `reach` of the target are wanted and
  // returned (at most `count`); farther Ritz values need not converge.
  double reach = 0.0;
};

// The `count` eigenpairs of G nearest `target`, by block shift-invert Krylov
// on (K - target W)^{-1} W with explicit restarts, run independently on each
// decoupled component. Sorted by distance to the target.
// Throws PreconditionError for Re target >= 0, FactorizationSingular if the
// shift stays singular after three jitters, NoConvergence at the restart cap.
std::vector<Eigenpair> eigs_near(const DiscreteGenerator &gen, cplx target, int count, const EigsOptions &opt = {});

}  // namespace adspec
