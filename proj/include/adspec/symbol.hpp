// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "adspec/polynomial.hpp"
#include "adspec/types.hpp"

namespace adspec
{

// First-order system  d_t u = sum_j A_j d_{x_j} u  with symmetric A_j.
struct SymmetricSystem
{
  int n = 0;
  int r = 0;
  std::vector<Mat> A;

  // Throws InvalidSystem: n odd >= 3, shapes r x r, each A_j == A_j^T exactly.
  void validate() const;
};

// Maxwell in (E, B) variables: G(E, B) = (curl B, -curl E).
SymmetricSystem maxwell_system(double speed = 1.0);

Mat eval_symbol(const SymmetricSystem &sys, const Vec &xi);

struct SymbolSpectralData
{
  int d0 = 0;
  int d = 0;
  std::vector<Vec> directions;
  // speeds[k] = positive eigenvalues of A(-omega_k), sorted decreasing.
  std::vector<std::vector<double>> speeds;
  // Orthonormal eigenbasis per sample, columns in the order of the sorted
  // eigenvalues (descending). No continuity across samples.
  std::vector<Mat> eigenbasis;
  double v_min = 0.0;
  double v_max = 0.0;
};

struct SpectralOptions
{
  double rank_tol = 1e-9;
  bool augment_cube_directions = true;
  Exec exec = Exec::Parallel;
};

// Fibonacci lattice on the unit sphere (quasi-uniform, deterministic).
std::vector<Vec> fibonacci_sphere(int samples);
// The 26 directions of the cube neighbourhood, normalised.
std::vector<Vec> cube_directions();

SymbolSpectralData spectral_data(const SymmetricSystem &sys, int samples, const SpectralOptions &opt = {});

// Coefficients c_0..c_{2d} of det(zI - A(xi)) = sum_j c_j(xi) z^{j+d0}.
struct CharPolyOptions
{
  double holdout_tol = 1e-10;
  int holdout_samples = 40;
  unsigned seed = 7;
};
std::vector<Poly> char_poly_coeffs(const SymmetricSystem &sys, const SymbolSpectralData &data,
                                   const CharPolyOptions &opt = {});

struct BuildQReport
{
  PolyMatrix Q;
  // Largest |coefficient| of Q(xi) A(xi)^{d0} and the scale it is compared to.
  double cayley_hamilton_max = 0.0;
  double cayley_hamilton_scale = 0.0;
};

// Q(xi) = sum_j c_j(xi) A(xi)^j. Throws CayleyHamiltonResidual.
BuildQReport build_Q(const SymmetricSystem &sys, const std::vector<Poly> &coeffs, int d0,
                     double ch_tol = 1e-9);

// The first-order Q(xi)(E, B) = (xi.E, xi.B) for Maxwell.
PolyMatrix maxwell_divergence_Q();

struct ExactSequenceReport
{
  bool certified = false;
  double max_angle = 0.0;
  int range_dim = 0;
  int kernel_dim = 0;
  bool dims_agree = true;
  std::optional<Vec> failure_xi;
};

// Throws ExactSequenceFailure (carrying the first offending xi in the
// message) unless Ker Q(xi) = Range A(xi) at every sample.
ExactSequenceReport verify_exact_sequence(const SymmetricSystem &sys, const PolyMatrix &Q,
                                          const std::vector<Vec> &xi_samples, double angle_tol = 1e-8);

struct EllipticityReport
{
  double min_sv_at_tau0 = 0.0;
  bool speed_bound_ok = false;
  // Smallest singular value of l(tau, .) over the samples, per tau.
  std::vector<std::pair<double, double>> min_sv_by_tau;
  // Taus at which l(tau, xi) is numerically singular for some sample.
  std::vector<double> characteristic_taus;
};

// l(tau, xi) = (tau I - A(xi))^{4d} + Q(xi)^T Q(xi).
Mat ellipticity_symbol(const SymmetricSystem &sys, const PolyMatrix &Q, int d, double tau, const Vec &xi);

EllipticityReport check_L_ellipticity(const SymmetricSystem &sys, const PolyMatrix &Q, int d, double v_min,
                                      const std::vector<double> &tau_grid, const std::vector<Vec> &xi_samples,
                                      double margin = 0.0);

// Seeded random unit vectors.
std::vector<Vec> random_unit_vectors(int n, int count, unsigned seed);

}  // namespace adspec
