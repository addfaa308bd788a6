// SPDX-License-Identifier: Apache-2.0
#include "oracles/grid_scan_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oracle
{

std::vector<cplx> grid_scan_zeros(const std::function<cplx(cplx)> &f, const ScanBox &box, int n, int zoom_levels,
                                  double accept)
{
  const double hx = (box.re1 - box.re0) / (n - 1), hy = (box.im1 - box.im0) / (n - 1);
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> double & { return a[static_cast<std::size_t>(j) * n + i]; };
  for (int j = 0; j < n; j++)
  {
    for (int i = 0; i < n; i++) at(i, j) = std::abs(f(cplx(box.re0 + i * hx, box.im0 + j * hy)));
  }
  std::vector<double> sorted(a);
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];

  std::vector<cplx> zeros;
  for (int j = 1; j + 1 < n; j++)
  {
    for (int i = 1; i + 1 < n; i++)
    {
      const double v = at(i, j);
      bool minimum = true;
      for (int dj = -1; dj <= 1 && minimum; dj++)
      {
        for (int di = -1; di <= 1; di++)
        {
          if ((di || dj) && at(i + di, j + dj) < v) minimum = false;
        }
      }
      if (!minimum) continue;
      // Zoom: a 41 x 41 grid on the 2-cell neighbourhood, recentred each time.
      cplx c(box.re0 + i * hx, box.im0 + j * hy);
      double wx = 2 * hx, wy = 2 * hy, best = v;
      for (int z = 0; z < zoom_levels; z++)
      {
        const int m = 41;
        cplx bc = c;
        for (int q = 0; q < m; q++)
        {
          for (int p = 0; p < m; p++)
          {
            cplx t = c + cplx(wx * (2.0 * p / (m - 1) - 1.0), wy * (2.0 * q / (m - 1) - 1.0));
            double fv = std::abs(f(t));
            if (fv < best)
            {
              best = fv;
              bc = t;
            }
          }
        }
        c = bc;
        wx *= 4.0 / (m - 1);
        wy *= 4.0 / (m - 1);
      }
      if (best >= accept * median) continue;
      bool seen = false;
      for (cplx q : zeros) seen = seen || std::abs(q - c) < 1e-8;
      if (!seen) zeros.push_back(c);
    }
  }
  return zeros;
}

}  // namespace oracle
