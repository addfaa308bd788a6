// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adspec/types.hpp"

namespace adspec
{

// Staggered radial grid on [a, R] clustered at the obstacle:
//   r(xi) = a + (R - a) expm1(alpha xi) / expm1(alpha),  xi_i = i / N.
// u and s live on the N + 1 nodes, w on the N half nodes. h_node and h_half
// are the quadrature weights of the discrete inner product.
struct RadialGrid
{
  int N = 0;
  double a = 1.0, R = 30.0, alpha = 4.0;
  Vec r_node, r_half, h_node, h_half;

  static RadialGrid make(int intervals, double a, double R, double alpha);
  double h_min() const;
  // Index of the node (resp. half node) closest to r.
  int nearest_node(double r) const;
  int nearest_half(double r) const;
};

}  // namespace adspec
