// SPDX-License-Identifier: Apache-2.0
#include "adspec/special.hpp"

#include <cmath>

#include "adspec/errors.hpp"

namespace adspec
{

namespace
{

cplx hankel_value(int l, cplx x)
{
  // (-i)^{l+1} (e^{ix}/x) sum_m i^m (l+m)! / (m! (l-m)! (2x)^m)
  cplx sum = 0.0, im = 1.0, inv2x = 1.0 / (2.0 * x), pw = 1.0;
  double a = 1.0;
  for (int m = 0; m <= l; m++)
  {
    sum += im * a * pw;
    a *= static_cast<double>((l + m + 1) * (l - m)) / (m + 1);
    im *= I1;
    pw *= inv2x;
  }
  cplx pref = std::pow(-I1, l + 1);
  return pref * std::exp(I1 * x) / x * sum;
}

}  // namespace

std::pair<cplx, cplx> hankel_elem(int l, cplx x)
{
  if (l < 0)
  {
    throw DomainError("spherical Hankel order must be >= 0");
  }
  if (x == 0.0)
  {
    throw DomainError("spherical Hankel function is singular at x = 0");
  }
  cplx h = hankel_value(l, x);
  cplx dh = l == 0 ? -hankel_value(1, x) : hankel_value(l - 1, x) - (l + 1.0) / x * h;
  return {h, dh};
}

std::pair<double, double> legendre(int l, double x)
{
  double p0 = 1.0, p1 = x;
  if (l == 0)
  {
    return {1.0, 0.0};
  }
  for (int k = 2; k <= l; k++)
  {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P_l' from l (x P_l - P_{l-1}) / (x^2 - 1); at |x| = 1 use the closed value.
  double dp;
  if (std::abs(x * x - 1.0) < 1e-14)
  {
    dp = 0.5 * l * (l + 1.0) * (x > 0 ? 1.0 : (l % 2 ? 1.0 : -1.0));
  }
  else
  {
    dp = l * (x * p1 - p0) / (x * x - 1.0);
  }
  return {p1, dp};
}

void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w)
{
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; it++)
    {
      auto [p, d] = legendre(n, z);
      dp = d;
      double dz = p / d;
      z -= dz;
      if (std::abs(dz) < 1e-16)
      {
        break;
      }
    }
    dp = legendre(n, z).second;
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace adspec
