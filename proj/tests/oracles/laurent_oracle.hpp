// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "adspec/fredholm.hpp"

namespace oracle
{

// Principal part of M^{-1} at planted point k computed from the factors
// M = U D (I + tau N) V0 by Laurent-series multiplication (no quadrature).
// Returned coefficients multiply (tau - tau_k)^{-1}, (tau - tau_k)^{-2}, ...
std::vector<adspec::MatC> planted_principal_part(const adspec::PlantedFamily &pf, int k);

int numerical_rank(const adspec::MatC &A, double rel = 1e-8);

// Roots (centroid, multiplicity) of prod_i d_i(tau), the determinant up to
// a constant, from its companion matrix. The polynomial is expanded by exact
// multiplication of the planted factors; planted points are >= 0.2 apart.
std::vector<std::pair<adspec::cplx, int>> planted_det_roots(const adspec::PlantedFamily &pf);

}  // namespace oracle
