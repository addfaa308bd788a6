// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "adspec/discrete.hpp"

namespace adspec
{

// Circle |z - center| = radius discretised by `nodes` trapezoid points.
struct ContourSpec
{
  cplx center = -0.5;
  double radius = 0.1;
  int nodes = 32;

  void validate() const;
  cplx node(int j, int n) const { return center + radius * std::polar(1.0, 2.0 * pi * j / n); }
};

struct ProjectorResult
{
  ContourSpec contour;
  int rank = 0;
  cplx trace = 0.0;
  MatC basis;  // W-orthonormal columns spanning the range
  double idempotency = 0.0;  // ||P Q - Q||_W on the basis
  int nodes_used = 0;
  double trace_change = 0.0;  // |trace(2N) - trace(N)| at acceptance
  int eigs_inside = 0;  // eigenvalues inside found by the pre-check
  std::vector<double> singular_values;
  std::vector<cplx> eigenvalues_inside;
};

struct ProjectorOptions
{
  int probes = 12;
  int max_nodes = 512;
  double trace_tol = 1e-8;
  std::uint64_t seed = 99;
  bool precheck = true;
  Exec exec = Exec::Parallel;
};

// P = (1 / 2 pi i) \oint (z - G)^{-1} dz applied to a random probe block.
// Throws ContourNearEigenvalue if an eigenvalue lies within 0.1 radius of
// the circle, QuadratureNotConverged if doubling the nodes up to max_nodes
// never settles the trace.
ProjectorResult spectral_projector(const DiscreteGenerator &gen, const ContourSpec &contour,
                                   const ProjectorOptions &opt = {});

// P applied to a block with a fixed node count (no gate); used for
// composing projectors.
MatC apply_projector(const DiscreteGenerator &gen, const ContourSpec &contour, int nodes, const MatC &X,
                     Exec exec = Exec::Parallel);

// Eigenvalues within `reach` of the centre, found with eigs_near.
std::vector<cplx> eigenvalues_within(const DiscreteGenerator &gen, cplx center, double reach);

}  // namespace adspec
