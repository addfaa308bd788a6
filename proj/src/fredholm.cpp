// SPDX-License-Identifier: Apache-2.0
#include "adspec/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "adspec/errors.hpp"

namespace adspec
{

namespace
{

cplx root_of_unity(int j, int n) { return std::polar(1.0, 2.0 * pi * j / n); }

// Taylor coefficients c_k (k < keep) of f from n samples on |x| = r.
std::vector<cplx> sampled_coeffs(const std::vector<cplx> &samples, double r, int keep)
{
  const int n = static_cast<int>(samples.size());
  std::vector<cplx> c(keep);
  for (int k = 0; k < keep; k++)
  {
    cplx acc = 0.0;
    for (int j = 0; j < n; j++) acc += samples[j] * std::conj(root_of_unity((j * k) % n, n));
    c[k] = acc / (n * std::pow(r, k));
  }
  return c;
}

std::vector<MatC> sampled_matrix_coeffs(const std::vector<MatC> &samples, double r, int keep)
{
  const int n = static_cast<int>(samples.size());
  std::vector<MatC> c(keep, MatC::Zero(samples[0].rows(), samples[0].cols()));
  for (int k = 0; k < keep; k++)
  {
    for (int j = 0; j < n; j++) c[k] += samples[j] * std::conj(root_of_unity((j * k) % n, n));
    c[k] /= n * std::pow(r, k);
  }
  return c;
}

int pow2_at_least(int n)
{
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

cplx det_of(const MatC &M) { return M.size() == 0 ? cplx(1.0) : M.partialPivLu().determinant(); }

// p^{(d)} coefficients.
std::vector<cplx> derivative(std::vector<cplx> c, int d)
{
  for (int t = 0; t < d; t++)
  {
    if (c.size() <= 1) return {0.0};
    std::vector<cplx> n(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); k++) n[k - 1] = static_cast<double>(k) * c[k];
    c = std::move(n);
  }
  return c;
}

cplx horner(const std::vector<cplx> &c, cplx x)
{
  cplx v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

AnalyticFamily block_family(const std::vector<MatC> &D, const MatC &L, const MatC &R, cplx center, double radius)
{
  AnalyticFamily f;
  f.rows = static_cast<int>(L.cols());
  f.cols = static_cast<int>(R.cols());
  f.center = center;
  f.radius = radius;
  for (const auto &d : D) f.coeffs.push_back(L.adjoint() * d * R);
  return f;
}

}  // namespace

void AnalyticFamily::validate() const
{
  if (rows <= 0 || cols <= 0 || coeffs.empty())
  {
    throw PreconditionError("analytic family needs positive dimensions and at least one coefficient");
  }
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(std::abs(center)))
  {
    throw PreconditionError("analytic family needs a finite disk of positive radius");
  }
  double top = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); k++)
  {
    if (coeffs[k].rows() != rows || coeffs[k].cols() != cols)
    {
      throw DimensionMismatch("coefficient " + std::to_string(k) + " has the wrong shape");
    }
    if (!coeffs[k].allFinite()) throw PreconditionError("non-finite family coefficient");
    top = std::max(top, coeffs[k].norm() * std::pow(radius, k));
  }
  if (truncated && coeffs.size() > 1 && coeffs.back().norm() * std::pow(radius, degree()) > 1e-14 * top)
  {
    throw PreconditionError("Taylor tail is not negligible on the stated disk");
  }
}

MatC AnalyticFamily::eval(cplx tau) const
{
  const cplx x = tau - center;
  MatC M = coeffs.back();
  for (int k = degree() - 1; k >= 0; k--) M = (M * x + coeffs[k]).eval();
  return M;
}

std::vector<MatC> AnalyticFamily::recentred(cplx at) const
{
  const cplx d = at - center;
  const int n = static_cast<int>(coeffs.size());
  std::vector<MatC> D(n, MatC::Zero(rows, cols));
  for (int j = 0; j < n; j++)
  {
    // (y + d)^j = sum_k binom(j, k) d^{j-k} y^k
    double binom = 1.0;
    for (int k = 0; k <= j; k++)
    {
      D[k] += binom * std::pow(d, j - k) * coeffs[j];
      binom = binom * (j - k) / (k + 1);
    }
  }
  return D;
}

int fredholm_index(const MatC &M, double rel_tol)
{
  Eigen::JacobiSVD<MatC> svd(M);
  const auto &sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0)
  {
    for (Eigen::Index i = 0; i < sv.size(); i++) rank += sv[i] > rel_tol * sv[0];
  }
  const int rows = static_cast<int>(M.rows()), cols = static_cast<int>(M.cols());
  return (rows - rank) - (cols - rank);
}

std::vector<std::pair<cplx, int>> series_zeros(const std::vector<cplx> &c, double r)
{
  double scale = 0.0;
  for (std::size_t k = 0; k < c.size(); k++) scale = std::max(scale, std::abs(c[k]) * std::pow(r, k));
  if (scale == 0.0) throw PreconditionError("zero series has no isolated zeros");
  int deg = static_cast<int>(c.size()) - 1;
  while (deg > 0 && std::abs(c[deg]) * std::pow(r, deg) <= 1e-13 * scale) deg--;
  // Work in y = x / r so the companion matrix is balanced.
  std::vector<cplx> p(deg + 1);
  for (int k = 0; k <= deg; k++) p[k] = c[k] * std::pow(r, k);
  if (deg == 0) return {};

  // Companion matrix of the monic polynomial.
  MatC C = MatC::Zero(deg, deg);
  for (int i = 1; i < deg; i++) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; i++) C(i, deg - 1) = -p[i] / p[deg];
  Eigen::ComplexEigenSolver<MatC> es(C, false);
  std::vector<cplx> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++)
  {
    cplx z = es.eigenvalues()[i];
    if (std::abs(z) < 1.05) roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // Multiple roots come back as rings of radius ~ eps^{1/m}; merge them by
  // single linkage before polishing.
  const double link = 1e-2;
  const int nr = static_cast<int>(roots.size());
  std::vector<int> parent(nr);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < nr; i++)
  {
    for (int j = i + 1; j < nr; j++)
    {
      if (std::abs(roots[i] - roots[j]) < link) parent[find(i)] = find(j);
    }
  }
  std::vector<std::pair<cplx, int>> out;
  for (int i = 0; i < nr; i++)
  {
    if (find(i) != i) continue;
    cplx sum = 0.0;
    int m = 0;
    for (int j = 0; j < nr; j++)
    {
      if (find(j) == i)
      {
        sum += roots[j];
        m++;
      }
    }
    cplx x = sum / static_cast<double>(m);
    // The (m-1)th derivative has a simple root there.
    const auto f = derivative(p, m - 1);
    const auto df = derivative(f, 1);
    for (int it = 0; it < 50; it++)
    {
      const cplx d = horner(df, x);
      if (d == 0.0) break;
      const cplx step = horner(f, x) / d;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    if (std::abs(x) < 1.0) out.push_back({x * r, m});
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.first.real() != b.first.real() ? a.first.real() < b.first.real() : a.first.imag() < b.first.imag();
  });
  return out;
}

MatC SchurReduction::s_at(cplx tau) const
{
  if (a22.rows == 0) return a11.eval(tau);
  const MatC A22 = a22.eval(tau);
  return a11.eval(tau) - a12.eval(tau) * A22.partialPivLu().solve(a21.eval(tau));
}

MatC SchurReduction::inverse_at(cplx tau) const
{
  const int k = kernel_dim;
  const int r = a22.rows;
  MatC Ti(k + r, k + r);
  const MatC S = s_at(tau);
  Eigen::PartialPivLU<MatC> Slu(S);
  const MatC Si = Slu.inverse();
  if (r == 0)
  {
    Ti = Si;
  }
  else
  {
    Eigen::PartialPivLU<MatC> lu(a22.eval(tau));
    const MatC A12 = a12.eval(tau), A21 = a21.eval(tau);
    const MatC X = lu.solve(A21);                              // a22^{-1} a21
    const MatC Y = lu.solve(MatC::Identity(r, r));             // a22^{-1}
    const MatC Z = A12 * Y;                                    // a12 a22^{-1}
    Ti.topLeftCorner(k, k) = Si;
    Ti.topRightCorner(k, r) = -Si * Z;
    Ti.bottomLeftCorner(r, k) = -X * Si;
    Ti.bottomRightCorner(r, r) = Y + X * Si * Z;
  }
  MatC Qin(kernel.rows(), k + r), Qout(cokernel.rows(), k + r);
  Qin << kernel, range_in;
  Qout << cokernel, range_out;
  return Qin * Ti * Qout.adjoint();
}

SchurReduction schur_reduce(const AnalyticFamily &fam, cplx basepoint)
{
  fam.validate();
  if (fam.rows != fam.cols)
  {
    throw PreconditionError("Schur reduction needs a square family; index is " +
                            std::to_string(fam.rows - fam.cols));
  }
  const double local = fam.radius - std::abs(basepoint - fam.center);
  if (!(local > 0.0)) throw PreconditionError("basepoint outside the family disk");

  const int n = fam.rows;
  const auto D = fam.recentred(basepoint);
  Eigen::JacobiSVD<MatC> svd(D[0], Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const double tol = 1e-10 * sv[0];
  int rank = 0;
  while (rank < n && sv[rank] > tol) rank++;
  if (rank == n) throw BasepointRegular("family is invertible at the basepoint");

  SchurReduction red;
  red.basepoint = basepoint;
  red.kernel_dim = n - rank;
  red.range_in = svd.matrixV().leftCols(rank);
  red.kernel = svd.matrixV().rightCols(n - rank);
  red.range_out = svd.matrixU().leftCols(rank);
  red.cokernel = svd.matrixU().rightCols(n - rank);
  red.a11 = block_family(D, red.cokernel, red.kernel, basepoint, local);
  red.a12 = block_family(D, red.cokernel, red.range_in, basepoint, local);
  red.a21 = block_family(D, red.range_out, red.kernel, basepoint, local);
  red.a22 = block_family(D, red.range_out, red.range_in, basepoint, local);

  // a22 stays invertible while sum_{j>=1} |D22_j| rho^j <= sigma_min / 2.
  double rho = 0.999 * local;
  if (rank > 0)
  {
    const double smin = sv[rank - 1];
    auto drift = [&](double x) {
      double acc = 0.0;
      for (std::size_t j = 1; j < red.a22.coeffs.size(); j++) acc += red.a22.coeffs[j].norm() * std::pow(x, j);
      return acc;
    };
    if (drift(rho) > 0.5 * smin)
    {
      double lo = 0.0, hi = rho;
      for (int it = 0; it < 100; it++)
      {
        const double mid = 0.5 * (lo + hi);
        (drift(mid) <= 0.5 * smin ? lo : hi) = mid;
      }
      rho = lo;
    }
  }
  red.subdisk_radius = rho;

  // s and det s are sampled at a quarter of the guaranteed radius, so the
  // kept coefficients decay by at least 4^-k.
  const int N = 64;
  const double rs = 0.25 * rho;
  std::vector<MatC> S(N);
  std::vector<cplx> dets(N);
  for (int j = 0; j < N; j++)
  {
    S[j] = red.s_at(basepoint + rs * root_of_unity(j, N));
    dets[j] = det_of(S[j]);
  }
  red.s.rows = red.s.cols = red.kernel_dim;
  red.s.center = basepoint;
  red.s.radius = rs;
  red.s.coeffs = sampled_matrix_coeffs(S, rs, N / 2);
  red.det_s_coeffs = sampled_coeffs(dets, rs, N / 2);
  return red;
}

std::vector<std::pair<cplx, int>> schur_singular_points(const SchurReduction &red)
{
  auto z = series_zeros(red.det_s_coeffs, red.s.radius);
  for (auto &p : z) p.first += red.basepoint;
  return z;
}

std::string to_string(Classification::Kind k)
{
  return k == Classification::NowhereInvertible ? "nowhere_invertible" : "discrete_singular_set";
}

namespace
{

int zero_order(const std::vector<cplx> &c, double r)
{
  double top = 0.0;
  for (std::size_t k = 0; k < c.size(); k++) top = std::max(top, std::abs(c[k]) * std::pow(r, k));
  for (std::size_t k = 0; k < c.size(); k++)
  {
    if (std::abs(c[k]) * std::pow(r, k) > 1e-8 * top) return static_cast<int>(k);
  }
  return static_cast<int>(c.size());
}

}  // namespace

Classification classify(const AnalyticFamily &fam)
{
  fam.validate();
  Classification out;
  if (fam.rows != fam.cols)
  {
    out.kind = Classification::NowhereInvertible;
    out.reason = "index " + std::to_string(fam.rows - fam.cols) + " is nonzero";
    return out;
  }
  const int n = fam.rows;
  const int N = std::max(64, pow2_at_least(2 * (n * fam.degree() + 1)));
  std::vector<cplx> dets(N);
  double scale = 0.0;
  for (int j = 0; j < N; j++)
  {
    const MatC M = fam.eval(fam.center + fam.radius * root_of_unity(j, N));
    dets[j] = det_of(M);
    // Hadamard bound |det M| <= (|M|_F / sqrt n)^n.
    scale = std::max(scale, std::pow(M.norm() / std::sqrt(static_cast<double>(n)), n));
  }
  out.det_coeffs = sampled_coeffs(dets, fam.radius, std::min(N, n * fam.degree() + 1));
  double top = 0.0;
  for (std::size_t k = 0; k < out.det_coeffs.size(); k++)
  {
    top = std::max(top, std::abs(out.det_coeffs[k]) * std::pow(fam.radius, k));
  }
  if (top <= 1e-12 * scale)
  {
    out.kind = Classification::NowhereInvertible;
    out.reason = "determinant vanishes identically";
    return out;
  }
  if (top <= 1e-8 * scale)
  {
    throw TruncationInconclusive("determinant coefficients are tiny but not negligible (max " + std::to_string(top) +
                                 " against scale " + std::to_string(scale) + ")");
  }
  out.kind = Classification::DiscreteSingularSet;
  for (const auto &[x, m] : series_zeros(out.det_coeffs, fam.radius))
  {
    SingularPoint p;
    p.tau = fam.center + x;
    p.multiplicity = m;
    try
    {
      const SchurReduction red = schur_reduce(fam, p.tau);
      p.schur_multiplicity = zero_order(red.det_s_coeffs, red.s.radius);
    }
    catch (const BasepointRegular &)
    {
      p.schur_multiplicity = 0;
    }
    out.cross_validated = out.cross_validated && p.schur_multiplicity == p.multiplicity;
    out.points.push_back(p);
  }
  return out;
}

PrincipalPart meromorphic_inverse_data(const AnalyticFamily &fam, cplx tau0, double radius, int nodes)
{
  fam.validate();
  if (fam.rows != fam.cols) throw PreconditionError("principal part needs a square family");
  if (nodes < 16) throw PreconditionError("at least 16 quadrature nodes");
  const double local = fam.radius - std::abs(tau0 - fam.center);
  if (!(local > 0.0)) throw PreconditionError("tau0 outside the family disk");
  if (radius <= 0.0)
  {
    const Classification c = classify(fam);
    if (c.kind == Classification::NowhereInvertible)
    {
      throw PreconditionError("family is nowhere invertible: " + c.reason);
    }
    double d = local;
    for (const auto &p : c.points)
    {
      const double dist = std::abs(p.tau - tau0);
      if (dist > 1e-6) d = std::min(d, dist);
    }
    radius = 0.4 * d;
  }
  if (!(radius < local)) throw PreconditionError("circle leaves the family disk");

  const int n = fam.rows;
  const int kmax = std::min(n * std::max(fam.degree(), 1), 24);
  std::vector<MatC> A(kmax, MatC::Zero(n, n));
  double biggest = 0.0;
  for (int j = 0; j < nodes; j++)
  {
    const cplx x = radius * root_of_unity(j, nodes);
    const MatC M = fam.eval(tau0 + x);
    Eigen::JacobiSVD<MatC> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    if (sv[n - 1] <= 1e-10 * sv[0])
    {
      throw CircleHitsSingularity("quadrature circle passes through a singular point near " +
                                  std::to_string((tau0 + x).real()) + std::to_string((tau0 + x).imag()) + "i");
    }
    const MatC Mi = svd.solve(MatC::Identity(n, n));
    biggest = std::max(biggest, Mi.norm());
    cplx w = x;
    for (int k = 0; k < kmax; k++)
    {
      A[k] += Mi * w;
      w *= x;
    }
  }
  PrincipalPart pp;
  pp.tau0 = tau0;
  pp.radius = radius;
  for (int k = 0; k < kmax; k++)
  {
    A[k] /= static_cast<double>(nodes);
    const double floor = 1e-9 * biggest * std::pow(radius, k + 1);
    Eigen::JacobiSVD<MatC> svd(A[k]);
    const auto &sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); i++) rank += sv[i] > std::max(floor, 1e-8 * sv[0]);
    pp.ranks.push_back(rank);
    pp.coeffs.push_back(A[k]);
    if (rank > 0) pp.pole_order = k + 1;
  }
  pp.coeffs.resize(pp.pole_order);
  pp.ranks.resize(pp.pole_order);
  return pp;
}

int PlantedFamily::multiplicity(int point) const
{
  int m = 0;
  for (const auto &e : exponents) m += e[point];
  return m;
}

int PlantedFamily::pole_order(int point) const
{
  int m = 0;
  for (const auto &e : exponents) m = std::max(m, e[point]);
  return m;
}

namespace
{

MatC random_unitary(std::mt19937_64 &rng, int n)
{
  std::normal_distribution<double> g;
  MatC A(n, n);
  for (int i = 0; i < n; i++)
  {
    for (int j = 0; j < n; j++) A(i, j) = cplx(g(rng), g(rng));
  }
  Eigen::HouseholderQR<MatC> qr(A);
  return qr.householderQ() * MatC::Identity(n, n);
}

MatC well_conditioned(std::mt19937_64 &rng, int n)
{
  std::uniform_real_distribution<double> s(0.5, 2.0);
  Vec d(n);
  for (int i = 0; i < n; i++) d[i] = s(rng);
  return random_unitary(rng, n) * d.cast<cplx>().asDiagonal() * random_unitary(rng, n);
}

}  // namespace

PlantedFamily planted_family(std::mt19937_64 &rng, int n, int npoints, int max_order)
{
  if (n < 1 || npoints < 0 || max_order < 1)
  {
    throw PreconditionError("planted family needs n >= 1, npoints >= 0, max_order >= 1");
  }
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PlantedFamily pf;
  for (int tries = 0; static_cast<int>(pf.points.size()) < npoints; tries++)
  {
    if (tries > 10000) throw PreconditionError("could not place planted points");
    const cplx z = std::polar(0.6 * std::sqrt(U(rng)), 2.0 * pi * U(rng));
    bool ok = true;
    for (cplx q : pf.points) ok = ok && std::abs(z - q) >= 0.2;
    if (ok) pf.points.push_back(z);
  }
  pf.exponents.assign(n, std::vector<int>(npoints, 0));
  for (int k = 0; k < npoints; k++)
  {
    const int count = 1 + (n > 1 && U(rng) < 0.5);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int c = 0; c < count; c++) pf.exponents[idx[c]][k] = 1 + static_cast<int>(U(rng) * max_order) % max_order;
  }

  // Diagonal polynomials d_i(tau) = prod_k (tau - tau_k)^{e_ik}.
  std::vector<std::vector<cplx>> d(n, std::vector<cplx>{1.0});
  int degD = 0;
  for (int i = 0; i < n; i++)
  {
    for (int k = 0; k < npoints; k++)
    {
      for (int e = 0; e < pf.exponents[i][k]; e++)
      {
        std::vector<cplx> nx(d[i].size() + 1, 0.0);
        for (std::size_t t = 0; t < d[i].size(); t++)
        {
          nx[t + 1] += d[i][t];
          nx[t] -= pf.points[k] * d[i][t];
        }
        d[i] = std::move(nx);
      }
    }
    degD = std::max(degD, static_cast<int>(d[i].size()) - 1);
  }

  pf.U = well_conditioned(rng, n);
  pf.V0 = well_conditioned(rng, n);
  std::normal_distribution<double> g;
  MatC S = MatC::Zero(n, n);
  for (int i = 0; i < n; i++)
  {
    for (int j = i + 1; j < n; j++) S(i, j) = cplx(g(rng), g(rng)) * (0.3 / std::sqrt(static_cast<double>(n)));
  }
  const MatC Q = random_unitary(rng, n);
  pf.N = Q * S * Q.adjoint();

  auto Dk = [&](int k) {
    MatC M = MatC::Zero(n, n);
    for (int i = 0; i < n; i++)
    {
      if (k >= 0 && k < static_cast<int>(d[i].size())) M(i, i) = d[i][k];
    }
    return M;
  };
  AnalyticFamily &f = pf.family;
  f.rows = f.cols = n;
  f.center = 0.0;
  f.radius = 1.0;
  const MatC NV = pf.N * pf.V0;
  for (int k = 0; k <= degD + 1; k++) f.coeffs.push_back(pf.U * (Dk(k) * pf.V0 + Dk(k - 1) * NV));
  return pf;
}

std::vector<Classification> batch_classify(const std::vector<AnalyticFamily> &fams, Exec exec)
{
  const int n = static_cast<int>(fams.size());
  std::vector<Classification> out(n);
  std::vector<std::exception_ptr> err(n);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (int i = 0; i < n; i++)
  {
    try
    {
      out[i] = classify(fams[i]);
    }
    catch (...)
    {
      err[i] = std::current_exception();
    }
  }
  for (auto &e : err)
  {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

FredholmDemo fredholm_demo(std::uint64_t seed, int families)
{
  std::mt19937_64 rng(seed);
  FredholmDemo demo;
  std::vector<PlantedFamily> pfs;
  std::vector<AnalyticFamily> fams;
  for (int i = 0; i < families; i++)
  {
    const int n = 3 + static_cast<int>(rng() % 4);
    const int np = 1 + static_cast<int>(rng() % 3);
    pfs.push_back(planted_family(rng, n, np));
    fams.push_back(pfs.back().family);
  }
  const auto cls = batch_classify(fams);
  demo.families = families;
  for (int i = 0; i < families; i++)
  {
    const auto &pf = pfs[i];
    const auto &c = cls[i];
    std::string why;
    if (c.kind != Classification::DiscreteSingularSet || c.points.size() != pf.points.size())
    {
      why = "wrong singular set size";
    }
    for (std::size_t k = 0; why.empty() && k < pf.points.size(); k++)
    {
      const SingularPoint *hit = nullptr;
      for (const auto &p : c.points)
      {
        if (std::abs(p.tau - pf.points[k]) < 1e-9) hit = &p;
      }
      if (!hit || hit->multiplicity != pf.multiplicity(static_cast<int>(k)))
      {
        why = "planted point " + std::to_string(k) + " not recovered";
      }
      else if (meromorphic_inverse_data(pf.family, hit->tau).pole_order != pf.pole_order(static_cast<int>(k)))
      {
        why = "pole order mismatch at planted point " + std::to_string(k);
      }
    }
    if (why.empty() && !c.cross_validated) why = "Schur cross-check failed";
    FredholmDemo::Record rec;
    rec.dim = pf.family.rows;
    rec.planted_points = static_cast<int>(pf.points.size());
    rec.found_points = static_cast<int>(c.points.size());
    rec.passed = why.empty();
    rec.failure = why;
    demo.passed += rec.passed;
    demo.records.push_back(rec);
  }
  return demo;
}

}  // namespace adspec
