// SPDX-License-Identifier: Apache-2.0
#include "oracles/laurent_oracle.hpp"

#include <cmath>

namespace oracle
{

using adspec::cplx;
using adspec::MatC;

namespace
{

// Taylor coefficients of (x + c)^{-e} up to x^{order}.
std::vector<cplx> inverse_power_series(cplx c, int e, int order)
{
  std::vector<cplx> s(order + 1);
  // binom(-e, j) c^{-e-j}
  double b = 1.0;
  for (int j = 0; j <= order; j++)
  {
    s[j] = b * std::pow(c, -e - j);
    b = b * (-e - j) / (j + 1);
  }
  return s;
}

std::vector<cplx> mul(const std::vector<cplx> &a, const std::vector<cplx> &b, int order)
{
  std::vector<cplx> c(order + 1, 0.0);
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); i++)
  {
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); j++) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace

std::vector<MatC> planted_principal_part(const adspec::PlantedFamily &pf, int k)
{
  const int n = pf.family.rows;
  const cplx t0 = pf.points[k];
  const int p = pf.pole_order(k);
  if (p == 0) return {};
  const int order = p;  // Taylor terms needed from the regular factors

  // (I + tau N)^{-1} = sum_j (-tau N)^j, re-expanded in x = tau - t0:
  // (I + t0 N + x N)^{-1} = sum_j (-1)^j (A^{-1} N)^j A^{-1} x^j, A = I + t0 N.
  const MatC A = MatC::Identity(n, n) + t0 * pf.N;
  const MatC Ai = A.inverse();
  std::vector<MatC> Q(order + 1);
  MatC term = Ai;
  for (int j = 0; j <= order; j++)
  {
    Q[j] = term;
    term = (-(Ai * pf.N) * term).eval();
  }
  // D^{-1}: diagonal Laurent series; entry i has x^{-e_ik} times a Taylor series.
  std::vector<std::vector<cplx>> dser(n);
  std::vector<int> lead(n);
  for (int i = 0; i < n; i++)
  {
    std::vector<cplx> s{1.0};
    for (std::size_t q = 0; q < pf.points.size(); q++)
    {
      if (static_cast<int>(q) == k || pf.exponents[i][q] == 0) continue;
      s = mul(s, inverse_power_series(t0 - pf.points[q], pf.exponents[i][q], order), order);
    }
    dser[i] = s;
    lead[i] = pf.exponents[i][k];
  }
  const MatC Ui = pf.U.inverse(), Vi = pf.V0.inverse();
  std::vector<MatC> out;
  for (int j = 1; j <= p; j++)
  {
    // Coefficient of x^{-j} in Q(x) Dinv(x): sum_a Q_a [Dinv]_{-j-a}.
    MatC C = MatC::Zero(n, n);
    for (int a = 0; a <= order; a++)
    {
      MatC Dd = MatC::Zero(n, n);
      for (int i = 0; i < n; i++)
      {
        const int idx = -j - a + lead[i];  // index into the Taylor part
        if (idx >= 0 && idx < static_cast<int>(dser[i].size())) Dd(i, i) = dser[i][idx];
      }
      C += Q[a] * Dd;
    }
    out.push_back(Vi * C * Ui);
  }
  return out;
}

int numerical_rank(const MatC &A, double rel)
{
  Eigen::JacobiSVD<MatC> svd(A);
  const auto &s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); i++) r += s[i] > rel * s[0];
  return s.size() && s[0] > 0 ? r : 0;
}

std::vector<std::pair<cplx, int>> planted_det_roots(const adspec::PlantedFamily &pf)
{
  std::vector<cplx> poly{1.0};
  for (const auto &row : pf.exponents)
  {
    for (std::size_t q = 0; q < pf.points.size(); q++)
    {
      for (int e = 0; e < row[q]; e++) poly = mul(poly, {-pf.points[q], 1.0}, static_cast<int>(poly.size()));
    }
  }
  const int d = static_cast<int>(poly.size()) - 1;
  if (d == 0) return {};
  MatC C = MatC::Zero(d, d);
  for (int i = 1; i < d; i++) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; i++) C(i, d - 1) = -poly[i] / poly[d];
  Eigen::ComplexEigenSolver<MatC> es(C, false);
  // A root of multiplicity m scatters into a ring; the ring's centroid is
  // well conditioned.
  std::vector<std::pair<cplx, int>> out;
  std::vector<bool> used(d, false);
  for (int i = 0; i < d; i++)
  {
    if (used[i]) continue;
    cplx sum = 0.0;
    int m = 0;
    for (int j = i; j < d; j++)
    {
      if (!used[j] && std::abs(es.eigenvalues()[j] - es.eigenvalues()[i]) < 0.05)
      {
        used[j] = true;
        sum += es.eigenvalues()[j];
        m++;
      }
    }
    out.push_back({sum / static_cast<double>(m), m});
  }
  return out;
}

}  // namespace oracle
