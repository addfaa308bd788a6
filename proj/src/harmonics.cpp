// SPDX-License-Identifier: Apache-2.0
#include "adspec/harmonics.hpp"

#include <cmath>

#include "adspec/errors.hpp"
#include "adspec/special.hpp"

namespace adspec
{

bool SphericalField::is_constant() const
{
  for (const auto &t : terms)
  {
    if (t.l != 0 && t.c != 0.0)
    {
      return false;
    }
  }
  return true;
}

int SphericalField::max_degree() const
{
  int d = 0;
  for (const auto &t : terms)
  {
    d = std::max(d, t.l);
  }
  return d;
}

Eigen::Vector3d unit_r(double th, double ph)
{
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

Eigen::Vector3d unit_theta(double th, double ph)
{
  return {std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
}

Eigen::Vector3d unit_phi(double, double ph)
{
  return {-std::sin(ph), std::cos(ph), 0.0};
}

namespace
{

// Normalised associated Legendre values Pbar_k^m(x) for k = m..l (no
// Condon-Shortley phase); returns {Pbar_l^m, Pbar_{l-1}^m}.
std::pair<double, double> assoc_legendre(int l, int m, double x)
{
  const double st = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = std::sqrt(1.0 / (4.0 * pi));
  for (int k = 1; k <= m; k++)
  {
    pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * st;
  }
  if (l == m)
  {
    return {pmm, 0.0};
  }
  double p1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  double p0 = pmm;
  for (int k = m + 2; k <= l; k++)
  {
    double a = std::sqrt((4.0 * k * k - 1.0) / (static_cast<double>(k) * k - static_cast<double>(m) * m));
    double b = std::sqrt((static_cast<double>(k - 1) * (k - 1) - static_cast<double>(m) * m) /
                         (4.0 * (k - 1) * (k - 1) - 1.0));
    double p2 = a * (x * p1 - b * p0);
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

HarmonicSample real_harmonic(int l, int m, double th, double ph)
{
  if (l < 0 || std::abs(m) > l)
  {
    throw DomainError("invalid spherical harmonic index");
  }
  const int am = std::abs(m);
  const double x = std::cos(th), st = std::sin(th);
  auto [P, Pm1] = assoc_legendre(l, am, x);
  // d/dtheta Pbar_l^m = -[sqrt((2l+1)(l-m)(l+m)/(2l-1)) Pbar_{l-1}^m - l x Pbar_l^m] / sin(theta)
  double c = l > am ? std::sqrt((2.0 * l + 1.0) * (l - am) * (l + am) / (2.0 * l - 1.0)) : 0.0;
  double dP = -(c * Pm1 - l * x * P) / st;

  double ang, dang;
  if (m > 0)
  {
    ang = std::sqrt(2.0) * std::cos(m * ph);
    dang = -std::sqrt(2.0) * m * std::sin(m * ph);
  }
  else if (m < 0)
  {
    ang = std::sqrt(2.0) * std::sin(am * ph);
    dang = std::sqrt(2.0) * am * std::cos(am * ph);
  }
  else
  {
    ang = 1.0;
    dang = 0.0;
  }
  HarmonicSample s;
  s.Y = P * ang;
  s.grad = dP * ang * unit_theta(th, ph) + (P / st) * dang * unit_phi(th, ph);
  return s;
}

SphereQuadrature SphereQuadrature::make(int ntheta, int nphi)
{
  SphereQuadrature q;
  std::vector<double> x, w;
  gauss_legendre(ntheta, x, w);
  for (int i = 0; i < ntheta; i++)
  {
    double th = std::acos(x[i]);
    for (int j = 0; j < nphi; j++)
    {
      double ph = 2.0 * pi * j / nphi;
      q.theta.push_back(th);
      q.phi.push_back(ph);
      q.weight.push_back(w[i] * 2.0 * pi / nphi);
      q.rhat.push_back(unit_r(th, ph));
    }
  }
  return q;
}

double eval_field(const SphericalField &f, double th, double ph)
{
  double v = f.constant;
  for (const auto &t : f.terms)
  {
    v += t.c * real_harmonic(t.l, t.m, th, ph).Y;
  }
  return v;
}

}  // namespace adspec
