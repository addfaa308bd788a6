// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adspec/types.hpp"

namespace adspec
{

// tau -> M(tau) = sum_k C_k (tau - center)^k on |tau - center| < radius.
// `truncated` marks a cut Taylor series (as opposed to an exact polynomial);
// its last coefficient must then be negligible on the disk.
struct AnalyticFamily
{
  int rows = 0, cols = 0;
  cplx center = 0.0;
  double radius = 1.0;
  std::vector<MatC> coeffs;
  bool truncated = false;

  void validate() const;
  MatC eval(cplx tau) const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  // Coefficients of the same family expanded about another point.
  std::vector<MatC> recentred(cplx at) const;
};

// codim Range - dim Ker (= rows - cols for a matrix).
int fredholm_index(const MatC &M, double rel_tol = 1e-10);

struct SchurReduction
{
  cplx basepoint = 0.0;
  int kernel_dim = 0;
  MatC kernel, cokernel;      // V_ker, U_perp
  MatC range_in, range_out;   // V_r, U_r
  // Blocks of [U_perp U_r]^H M [V_ker V_r], Taylor about the basepoint.
  AnalyticFamily a11, a12, a21, a22;
  // s = a11 - a12 a22^{-1} a21 on the sub-disk where a22 stays invertible.
  AnalyticFamily s;
  double subdisk_radius = 0.0;
  std::vector<cplx> det_s_coeffs;  // Taylor coefficients of det s about the basepoint

  // M(tau)^{-1} from the block formula (tau in the sub-disk, det s != 0).
  MatC inverse_at(cplx tau) const;
  MatC s_at(cplx tau) const;
};

// Throws BasepointRegular if M(basepoint) is invertible and
// PreconditionError for non-square families.
SchurReduction schur_reduce(const AnalyticFamily &fam, cplx basepoint);

struct SingularPoint
{
  cplx tau = 0.0;
  int multiplicity = 0;        // order of the zero of det M
  int schur_multiplicity = 0;  // order of the zero of det s (Schur reduction at tau)
};

struct Classification
{
  enum Kind
  {
    NowhereInvertible,
    DiscreteSingularSet
  } kind = DiscreteSingularSet;
  std::string reason;
  std::vector<SingularPoint> points;
  std::vector<cplx> det_coeffs;  // about the family centre
  bool cross_validated = true;
};

std::string to_string(Classification::Kind k);

// Throws TruncationInconclusive when the determinant is neither clearly zero
// nor clearly nonzero.
Classification classify(const AnalyticFamily &fam);

// Zeros (with multiplicity) of a scalar Taylor series sum c_k x^k in |x| < r.
std::vector<std::pair<cplx, int>> series_zeros(const std::vector<cplx> &c, double r);

// Singular points of the Schur-reduced family inside half its sub-disk.
std::vector<std::pair<cplx, int>> schur_singular_points(const SchurReduction &red);

struct PrincipalPart
{
  cplx tau0 = 0.0;
  double radius = 0.0;
  std::vector<MatC> coeffs;  // coeffs[k-1] multiplies (tau - tau0)^{-k}
  std::vector<int> ranks;
  int pole_order = 0;
};

// Laurent principal part of M^{-1} at tau0 by trapezoid quadrature of
// M^{-1}(tau) (tau - tau0)^{k-1} on a circle (radius 0 picks one from the
// singular set). Throws CircleHitsSingularity.
PrincipalPart meromorphic_inverse_data(const AnalyticFamily &fam, cplx tau0, double radius = 0.0, int nodes = 256);

// M = U D(tau) (I + tau N) V0 with D = diag(prod_k (tau - tau_k)^{e_ik}),
// U, V0 well conditioned and N nilpotent.
struct PlantedFamily
{
  AnalyticFamily family;
  std::vector<cplx> points;
  std::vector<std::vector<int>> exponents;  // [diag entry][point]
  MatC U, V0, N;

  int multiplicity(int point) const;
  int pole_order(int point) const;
};

PlantedFamily planted_family(std::mt19937_64 &rng, int n, int npoints, int max_order = 2);

std::vector<Classification> batch_classify(const std::vector<AnalyticFamily> &fams, Exec exec = Exec::Parallel);

struct FredholmDemo
{
  struct Record
  {
    int dim = 0;
    int planted_points = 0;
    int found_points = 0;
    bool passed = false;
    std::string failure;
  };
  int families = 0;
  int passed = 0;
  std::vector<Record> records;
};

// Planted-family round trip used by the CLI demo.
FredholmDemo fredholm_demo(std::uint64_t seed, int families = 20);

}  // namespace adspec
