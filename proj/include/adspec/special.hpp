// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "adspec/types.hpp"

namespace adspec
{

// First-kind spherical Hankel function and its derivative from the
// terminating elementary sum. Throws DomainError at x = 0.
std::pair<cplx, cplx> hankel_elem(int l, cplx x);

// Legendre polynomial P_l(x) and derivative P_l'(x) (three-term recurrence).
std::pair<double, double> legendre(int l, double x);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w);

}  // namespace adspec
