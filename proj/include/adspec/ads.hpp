// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "adspec/types.hpp"

namespace adspec
{

enum class Polarization
{
  TE,
  TM
};

std::string to_string(Polarization p);
Polarization polarization_from_string(const std::string &s);

struct ModeProblem
{
  int l = 1;
  Polarization pol = Polarization::TE;
  double epsilon = 1.0;
  double radius = 1.0;

  void validate() const;
};

// Axis-aligned rectangle [re0, re1] x [im0, im1] in the lambda plane.
struct Rect
{
  double re0 = -5.0, re1 = -1e-3, im0 = -20.0, im1 = 20.0;

  bool conj_symmetric() const { return im0 == -im1; }
  bool contains(cplx z, double pad = 0.0) const
  {
    return z.real() >= re0 - pad && z.real() <= re1 + pad && z.imag() >= im0 - pad && z.imag() <= im1 + pad;
  }
};

// Outgoing radial profile of a mode,
//   u(r) = scale * i^l * lambda * r * h_l(-i lambda r),
// with w = u'/lambda and s = sqrt(l(l+1)) u / (lambda r).
struct RadialProfile
{
  int l = 1;
  Polarization pol = Polarization::TE;
  cplx lambda = 0.0;
  cplx scale = 1.0;

  cplx u(double r) const;
  cplx du(double r) const;
  cplx w(double r) const { return du(r) / lambda; }
  cplx s(double r) const;
};

struct ComplexEigenpair
{
  cplx lambda = 0.0;
  ModeProblem mode;
  RadialProfile radial_profile;
  double pde_residual = 0.0;
  double bc_residual = 0.0;
  double divergence_residual = 0.0;
  double tail_ratio = 0.0;
  bool decay_ok = false;
};

// F(lambda) whose zeros in Re lambda < 0 are the mode rates:
//   TE:  (1 + eps) lambda u(a) - u'(a)
//   TM:  (1 + eps) u'(a) - lambda u(a)
cplx dispersion_residual(const ModeProblem &mode, cplx lambda);
// Sum of the magnitudes of the terms in F: the roundoff scale of |F|.
double dispersion_scale(const ModeProblem &mode, cplx lambda);

struct RootOptions
{
  int max_depth = 40;
  int newton_iters = 60;
  int contour_retries = 4;
  double quad_tol = 1e-8;
  // |F| below zero_guard * scale on a contour triggers a perturbed retry.
  double zero_guard = 1e-9;
  double newton_tol = 1e-12;
  bool verify = true;
};

// (1 / 2 pi i) times the contour integral of F'/F over the rectangle boundary
// (not rounded). Throws ContourThroughZero.
cplx winding_integral(const ModeProblem &mode, const Rect &rect, const RootOptions &opt = {});
int winding_number(const ModeProblem &mode, const Rect &rect, const RootOptions &opt = {});

std::vector<ComplexEigenpair> find_roots(const ModeProblem &mode, const Rect &region, const RootOptions &opt = {});

struct EigenpairCheck
{
  double pde_residual = 0.0;
  double bc_residual = 0.0;
  double divergence_residual = 0.0;
  double tail_ratio = 0.0;
  bool decay_ok = false;
};

// Independent check on the assembled Cartesian field (m = 0 member).
// Throws PreconditionError for Re lambda >= 0.
EigenpairCheck verify_eigenpair(const ModeProblem &mode, cplx lambda);
inline EigenpairCheck verify_eigenpair(const ComplexEigenpair &p) { return verify_eigenpair(p.mode, p.lambda); }

// Cartesian electric field of the m = 0 member at point x (for diagnostics).
Eigen::Vector3cd mode_field_E(const ModeProblem &mode, cplx lambda, const Eigen::Vector3d &x);

// |F| on an nx x ny grid over the rectangle (row index = imaginary part),
// cell-centred. Parallel over rows.
std::vector<double> scan_abs_dispersion(const ModeProblem &mode, const Rect &rect, int nx, int ny,
                                        Exec exec = Exec::Parallel);

}  // namespace adspec
