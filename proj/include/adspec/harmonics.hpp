// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "adspec/types.hpp"

namespace adspec
{

// Real orthonormal spherical harmonic Y_lm; m < 0 carries sin(|m| phi).
struct SHTerm
{
  int l = 0;
  int m = 0;
  double c = 0.0;
};

// f(theta, phi) = constant + sum c Y_lm.
struct SphericalField
{
  double constant = 0.0;
  std::vector<SHTerm> terms;

  bool is_constant() const;
  int max_degree() const;
};

// Values and surface gradients at one point of the sphere.
struct HarmonicSample
{
  double Y = 0.0;
  Eigen::Vector3d grad;  // grad_S Y_lm (unnormalised), Cartesian components
};

HarmonicSample real_harmonic(int l, int m, double theta, double phi);

// Tensor-product Gauss-Legendre (cos theta) x trapezoid (phi) rule, exact for
// band-limited integrands of degree < 2 * ntheta and |m| < nphi / 2.
struct SphereQuadrature
{
  std::vector<double> theta, phi, weight;
  std::vector<Eigen::Vector3d> rhat;

  static SphereQuadrature make(int ntheta, int nphi);
  std::size_t size() const { return weight.size(); }
};

double eval_field(const SphericalField &f, double theta, double phi);

// Unit vectors of the spherical frame.
Eigen::Vector3d unit_r(double theta, double phi);
Eigen::Vector3d unit_theta(double theta, double phi);
Eigen::Vector3d unit_phi(double theta, double phi);

}  // namespace adspec
