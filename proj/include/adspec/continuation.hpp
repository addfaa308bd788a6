// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "adspec/discrete.hpp"
#include "adspec/projector.hpp"

namespace adspec
{

enum class FamilyKind
{
  Epsilon,      // eps(delta) = eps0 (1 + delta g)
  Shape,        // radius (1 + delta s)
  Coefficient,  // K -> (1 + delta) K
};

std::string to_string(FamilyKind k);
FamilyKind family_from_string(const std::string &s);

struct PerturbationFamily
{
  FamilyKind kind = FamilyKind::Epsilon;
  SphericalField g{1.0, {}};  // g for Epsilon, s for Shape; unused otherwise

  // Problem at parameter delta; delta = 0 returns the base problem exactly.
  Problem at(const Problem &base, double delta) const;
};

struct PerturbationPath
{
  Problem base;
  Resolution resolution;
  PerturbationFamily family;
  std::vector<double> steps;  // increasing, starting at 0

  DiscreteGenerator generator(double delta) const { return assemble(family.at(base, delta), resolution); }
  static std::vector<double> uniform(double delta_max, int nsteps);
};

struct StepControl
{
  double gap_fraction = 0.3;
  // Tracking radius relative to |Re lambda(0)|; also the trust radius for a
  // single corrector step.
  double track_factor = 0.1;
  int max_halvings = 8;
  bool projector_ranks = true;
  int projector_nodes = 32;
};

struct PathPoint
{
  double delta = 0.0;
  cplx lambda = 0.0;
  int rank = -1;  // -1 when not computed or the contour was unusable
  double residual = 0.0;
  double gap = 0.0;
};

struct ContinuationResult
{
  std::vector<PathPoint> points;
  double track_radius = 0.0;
};

// Predictor-corrector continuation of one eigenvalue along the path.
// Throws PathLost (message carries the last good delta) if the corrector
// jumps beyond the trust radius even after step halving.
ContinuationResult continue_eigenvalue(const PerturbationPath &path, cplx seed, const StepControl &ctl = {});

struct SplittingReport
{
  ContourSpec contour;
  int rank0 = 0;
  std::vector<double> deltas;
  std::vector<int> counts;    // projector rank (with multiplicity)
  std::vector<int> distinct;  // distinct eigenvalues inside
  bool total_constant = true;
  bool complete = true;
  std::string failure;  // set when a contour check failed part-way
};

SplittingReport splitting_report(const PerturbationPath &path, const ContourSpec &contour);

// Number of clusters among the values, joined when closer than
// rel * max(1, |z|).
int count_distinct(const std::vector<cplx> &values, double rel = 1e-7);

}  // namespace adspec
