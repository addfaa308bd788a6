// SPDX-License-Identifier: Apache-2.0
#include "oracles/bessel_oracle.hpp"

#include <cmath>

namespace oracle
{

namespace
{
const cplx I(0.0, 1.0);
}

cplx hankel_recurrence(int l, cplx x)
{
  cplx h0 = -I * std::exp(I * x) / x;
  if (l == 0) return h0;
  cplx h1 = -(x + I) * std::exp(I * x) / (x * x);
  for (int k = 1; k < l; k++)
  {
    cplx h2 = (2.0 * k + 1.0) / x * h1 - h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

cplx hankel_recurrence_deriv(int l, cplx x)
{
  if (l == 0) return -hankel_recurrence(1, x);
  return hankel_recurrence(l - 1, x) - (l + 1.0) / x * hankel_recurrence(l, x);
}

cplx dispersion(int l, bool te, double eps, double a, cplx lambda)
{
  // u(r) = lambda r h_l(-i lambda r)
  const cplx z = -I * lambda * a;
  const cplx u = lambda * a * hankel_recurrence(l, z);
  const cplx du = lambda * hankel_recurrence(l, z) + lambda * a * (-I * lambda) * hankel_recurrence_deriv(l, z);
  return te ? (1.0 + eps) * lambda * u - du : (1.0 + eps) * du - lambda * u;
}

double te1_root(double eps) { return (eps - std::sqrt(eps * eps + 4.0 * eps)) / (2.0 * eps); }

}  // namespace oracle
