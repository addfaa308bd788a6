// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace oracle
{

using cplx = std::complex<double>;

struct ScanBox
{
  double re0, re1, im0, im1;
};

// Zeros of f in the box by brute force: local minima of |f| on an n x n
// grid, each refined by repeated zoomed grids (no derivatives, no contour
// integrals). A minimum counts as a zero when |f| there is below
// accept * (median of |f| over the coarse grid).
std::vector<cplx> grid_scan_zeros(const std::function<cplx(cplx)> &f, const ScanBox &box, int n = 2000,
                                  int zoom_levels = 12, double accept = 1e-9);

}  // namespace oracle
