// SPDX-License-Identifier: Apache-2.0
#include "adspec/grid.hpp"

#include <cmath>

#include "adspec/errors.hpp"

namespace adspec
{

RadialGrid RadialGrid::make(int N, double a, double R, double alpha)
{
  if (N < 2 || !(R > a) || !(a > 0.0) || alpha < 0.0)
  {
    throw ResolutionError("radial grid needs N >= 2, 0 < a < R and alpha >= 0");
  }
  RadialGrid g;
  g.N = N;
  g.a = a;
  g.R = R;
  g.alpha = alpha;
  auto map = [&](double xi) { return alpha == 0.0 ? a + (R - a) * xi : a + (R - a) * std::expm1(alpha * xi) / std::expm1(alpha); };
  auto jac = [&](double xi) { return alpha == 0.0 ? R - a : (R - a) * alpha * std::exp(alpha * xi) / std::expm1(alpha); };
  g.r_node.resize(N + 1);
  g.h_node.resize(N + 1);
  g.r_half.resize(N);
  g.h_half.resize(N);
  for (int i = 0; i <= N; i++)
  {
    double xi = static_cast<double>(i) / N;
    g.r_node[i] = map(xi);
    g.h_node[i] = jac(xi) / N;
  }
  g.r_node[0] = a;
  g.r_node[N] = R;
  g.h_node[0] *= 0.5;
  g.h_node[N] *= 0.5;
  for (int j = 0; j < N; j++)
  {
    double xi = (j + 0.5) / N;
    g.r_half[j] = map(xi);
    g.h_half[j] = jac(xi) / N;
  }
  for (int i = 0; i < N; i++)
  {
    if (!(g.r_node[i + 1] > g.r_node[i]))
    {
      throw ResolutionError("radial nodes are not strictly increasing");
    }
  }
  return g;
}

double RadialGrid::h_min() const
{
  double h = R - a;
  for (int i = 0; i < N; i++)
  {
    h = std::min(h, r_node[i + 1] - r_node[i]);
  }
  return h;
}

int RadialGrid::nearest_node(double r) const
{
  int best = 0;
  for (int i = 1; i <= N; i++)
  {
    if (std::abs(r_node[i] - r) < std::abs(r_node[best] - r))
    {
      best = i;
    }
  }
  return best;
}

int RadialGrid::nearest_half(double r) const
{
  int best = 0;
  for (int j = 1; j < N; j++)
  {
    if (std::abs(r_half[j] - r) < std::abs(r_half[best] - r))
    {
      best = j;
    }
  }
  return best;
}

}  // namespace adspec
