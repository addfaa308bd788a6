// SPDX-License-Identifier: Apache-2.0
#include "adspec/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "adspec/errors.hpp"

namespace adspec
{

namespace
{

std::string fmt_vec(const Vec &v)
{
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < v.size(); i++)
  {
    os << (i ? ", " : "") << v[i];
  }
  os << ")";
  return os.str();
}

double levi_civita(int i, int j, int k)
{
  return 0.5 * (i - j) * (j - k) * (k - i);
}

// Coefficients p_0..p_r of prod (z - mu_i), lowest degree first.
Vec poly_from_roots(const Vec &mu)
{
  Vec p = Vec::Zero(mu.size() + 1);
  p[0] = 1.0;
  for (int i = 0; i < mu.size(); i++)
  {
    for (int k = i + 1; k >= 1; k--)
    {
      p[k] = p[k - 1] - mu[i] * p[k];
    }
    p[0] = -mu[i] * p[0];
  }
  return p;
}

double monomial_value(const Poly::Exponent &e, const Vec &x)
{
  double m = 1.0;
  for (int k = 0; k < x.size(); k++)
  {
    for (int p = 0; p < e[k]; p++)
    {
      m *= x[k];
    }
  }
  return m;
}

std::vector<Vec> lattice_points(int n)
{
  // {-2..2}^n without the origin; fall back to {-1,0,1}^n in high dimension.
  int radius = std::pow(5.0, n) <= 5000 ? 2 : 1;
  int side = 2 * radius + 1;
  long total = 1;
  for (int k = 0; k < n; k++)
  {
    total *= side;
  }
  std::vector<Vec> pts;
  for (long idx = 0; idx < total; idx++)
  {
    Vec x(n);
    long t = idx;
    bool zero = true;
    for (int k = 0; k < n; k++)
    {
      x[k] = static_cast<double>(t % side - radius);
      zero = zero && x[k] == 0.0;
      t /= side;
    }
    if (!zero)
    {
      pts.push_back(x);
    }
  }
  return pts;
}

}  // namespace

void SymmetricSystem::validate() const
{
  if (n < 3 || n % 2 == 0)
  {
    throw InvalidSystem("spatial dimension n must be odd and >= 3, got " + std::to_string(n));
  }
  if (static_cast<int>(A.size()) != n)
  {
    throw InvalidSystem("expected " + std::to_string(n) + " coefficient matrices, got " + std::to_string(A.size()));
  }
  if (r < 1)
  {
    throw InvalidSystem("system size r must be positive");
  }
  for (int j = 0; j < n; j++)
  {
    if (A[j].rows() != r || A[j].cols() != r)
    {
      throw InvalidSystem("coefficient matrix " + std::to_string(j) + " is not r x r");
    }
    if (!(A[j].array() == A[j].transpose().array()).all())
    {
      throw InvalidSystem("coefficient matrix " + std::to_string(j) + " is not symmetric");
    }
  }
}

SymmetricSystem maxwell_system(double speed)
{
  SymmetricSystem s;
  s.n = 3;
  s.r = 6;
  for (int j = 0; j < 3; j++)
  {
    Mat A = Mat::Zero(6, 6);
    for (int i = 0; i < 3; i++)
    {
      for (int k = 0; k < 3; k++)
      {
        double e = speed * levi_civita(i, j, k);
        A(i, 3 + k) = e;
        A(3 + i, k) = -levi_civita(i, j, k) * speed;
      }
    }
    s.A.push_back(A);
  }
  return s;
}

Mat eval_symbol(const SymmetricSystem &sys, const Vec &xi)
{
  if (xi.size() != sys.n)
  {
    throw DimensionMismatch("xi has dimension " + std::to_string(xi.size()) + ", system has n = " +
                            std::to_string(sys.n));
  }
  Mat M = Mat::Zero(sys.r, sys.r);
  for (int j = 0; j < sys.n; j++)
  {
    M += xi[j] * sys.A[j];
  }
  return M;
}

std::vector<Vec> fibonacci_sphere(int samples)
{
  std::vector<Vec> out;
  out.reserve(samples);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < samples; i++)
  {
    double z = 1.0 - (2.0 * i + 1.0) / samples;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    Vec w(3);
    w << rho * std::cos(phi), rho * std::sin(phi), z;
    out.push_back(w);
  }
  return out;
}

std::vector<Vec> cube_directions()
{
  std::vector<Vec> out;
  for (int a = -1; a <= 1; a++)
  {
    for (int b = -1; b <= 1; b++)
    {
      for (int c = -1; c <= 1; c++)
      {
        if (a == 0 && b == 0 && c == 0)
        {
          continue;
        }
        Vec w(3);
        w << a, b, c;
        out.push_back(w.normalized());
      }
    }
  }
  return out;
}

std::vector<Vec> random_unit_vectors(int n, int count, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec> out;
  for (int k = 0; k < count; k++)
  {
    Vec x(n);
    do
    {
      for (int i = 0; i < n; i++)
      {
        x[i] = g(rng);
      }
    } while (x.norm() < 1e-3);
    out.push_back(x.normalized());
  }
  return out;
}

SymbolSpectralData spectral_data(const SymmetricSystem &sys, int samples, const SpectralOptions &opt)
{
  sys.validate();
  if (samples < 1)
  {
    throw PreconditionError("spectral_data needs at least one sample");
  }
  SymbolSpectralData out;
  if (sys.n == 3)
  {
    out.directions = fibonacci_sphere(samples);
    if (opt.augment_cube_directions)
    {
      for (auto &w : cube_directions())
      {
        out.directions.push_back(w);
      }
    }
  }
  else
  {
    out.directions = random_unit_vectors(sys.n, samples, 11);
  }

  const int ns = static_cast<int>(out.directions.size());
  std::vector<Vec> evals(ns);
  std::vector<Mat> evecs(ns);
#pragma omp parallel for schedule(static) if (opt.exec == Exec::Parallel)
  for (int k = 0; k < ns; k++)
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(eval_symbol(sys, -out.directions[k]));
    // Descending order.
    evals[k] = es.eigenvalues().reverse();
    evecs[k] = es.eigenvectors().rowwise().reverse();
  }

  double scale = 0.0;
  for (const auto &e : evals)
  {
    scale = std::max(scale, e.cwiseAbs().maxCoeff());
  }
  if (scale == 0.0)
  {
    throw DegenerateSymbol("A(omega) vanishes at every sample");
  }
  const double tol = opt.rank_tol * scale;

  std::vector<int> d0(ns), npos(ns), nneg(ns);
  for (int k = 0; k < ns; k++)
  {
    for (int i = 0; i < evals[k].size(); i++)
    {
      double mu = evals[k][i];
      if (std::abs(mu) < tol)
      {
        d0[k]++;
      }
      else if (mu > 0)
      {
        npos[k]++;
      }
      else
      {
        nneg[k]++;
      }
    }
  }
  for (int k = 1; k < ns; k++)
  {
    if (d0[k] != d0[0] || npos[k] != npos[0] || nneg[k] != nneg[0])
    {
      throw ConstantRankViolation("dim Ker A = " + std::to_string(d0[0]) + " at omega = " +
                                  fmt_vec(out.directions[0]) + " but " + std::to_string(d0[k]) +
                                  " at omega = " + fmt_vec(out.directions[k]));
    }
  }
  if (d0[0] == sys.r)
  {
    throw DegenerateSymbol("A(omega) = 0 at every sample");
  }
  if (npos[0] != nneg[0])
  {
    throw ConstantRankViolation("positive and negative eigenvalue counts differ");
  }

  out.d0 = d0[0];
  out.d = npos[0];
  out.v_min = std::numeric_limits<double>::infinity();
  out.v_max = 0.0;
  out.speeds.resize(ns);
  out.eigenbasis = std::move(evecs);
  for (int k = 0; k < ns; k++)
  {
    out.speeds[k].assign(evals[k].data(), evals[k].data() + out.d);
    out.v_max = std::max(out.v_max, out.speeds[k].front());
    out.v_min = std::min(out.v_min, out.speeds[k].back());
  }
  return out;
}

std::vector<Poly> char_poly_coeffs(const SymmetricSystem &sys, const SymbolSpectralData &data,
                                   const CharPolyOptions &opt)
{
  sys.validate();
  const int n = sys.n;
  const int d0 = data.d0;
  const int two_d = 2 * data.d;
  if (d0 + two_d != sys.r)
  {
    throw PreconditionError("spectral data inconsistent with system size");
  }

  auto coeffs_at = [&](const Vec &xi) {
    Eigen::SelfAdjointEigenSolver<Mat> es(eval_symbol(sys, xi), Eigen::EigenvaluesOnly);
    return poly_from_roots(es.eigenvalues());
  };

  std::vector<Vec> pts = lattice_points(n);
  std::vector<Vec> vals;
  vals.reserve(pts.size());
  for (const auto &x : pts)
  {
    vals.push_back(coeffs_at(x));
  }

  std::vector<Vec> hold = random_unit_vectors(n, opt.holdout_samples, opt.seed);
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> rad(0.5, 2.0);
  for (auto &h : hold)
  {
    h *= rad(rng);
  }

  std::vector<Poly> out;
  for (int j = 0; j <= two_d; j++)
  {
    const int deg = two_d - j;
    const int power = j + d0;
    auto exps = homogeneous_exponents(n, deg);
    Mat V(pts.size(), exps.size());
    Vec b(pts.size());
    for (std::size_t p = 0; p < pts.size(); p++)
    {
      for (std::size_t q = 0; q < exps.size(); q++)
      {
        V(p, q) = monomial_value(exps[q], pts[p]);
      }
      b[p] = vals[p][power];
    }
    Vec c = V.colPivHouseholderQr().solve(b);
    Poly cj(n);
    double cmax = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
    for (std::size_t q = 0; q < exps.size(); q++)
    {
      cj.add_term(exps[q], c[q]);
    }
    cj.prune(Poly::drop_tol * std::max(1.0, cmax));

    for (const auto &h : hold)
    {
      double ref = coeffs_at(h)[power];
      double got = cj.eval(h);
      double scale = std::max(1.0, std::pow(h.norm(), deg) * std::max(1.0, cmax));
      if (std::abs(ref - got) > opt.holdout_tol * scale)
      {
        std::ostringstream os;
        os << "coefficient c_" << j << " fails held-out check at xi = " << fmt_vec(h) << ": |" << ref << " - "
           << got << "|";
        throw InterpolationFailure(os.str());
      }
    }
    if (j == two_d)
    {
      cj = Poly::constant(n, 1.0);
    }
    out.push_back(std::move(cj));
  }
  return out;
}

BuildQReport build_Q(const SymmetricSystem &sys, const std::vector<Poly> &coeffs, int d0, double ch_tol)
{
  const int n = sys.n;
  PolyMatrix A = PolyMatrix::linear(sys.A);
  std::vector<PolyMatrix> powers{PolyMatrix::identity(sys.r, n)};
  const int top = static_cast<int>(coeffs.size()) - 1 + d0;
  for (int k = 1; k <= top; k++)
  {
    powers.push_back(powers.back() * A);
  }

  BuildQReport rep;
  rep.Q = PolyMatrix(sys.r, sys.r, n);
  PolyMatrix P(sys.r, sys.r, n);
  for (std::size_t j = 0; j < coeffs.size(); j++)
  {
    PolyMatrix term = powers[j];
    term.scale(coeffs[j]);
    rep.Q += term;
    PolyMatrix full = powers[j + d0];
    full.scale(coeffs[j]);
    rep.cayley_hamilton_scale = std::max(rep.cayley_hamilton_scale, full.max_abs_coeff());
    P += full;
  }
  for (int i = 0; i < sys.r; i++)
  {
    for (int k = 0; k < sys.r; k++)
    {
      rep.Q(i, k).prune();
      P(i, k).prune();
    }
  }
  rep.cayley_hamilton_max = P.max_abs_coeff();
  if (rep.cayley_hamilton_max > ch_tol * std::max(rep.cayley_hamilton_scale, 1e-300))
  {
    std::ostringstream os;
    os << "Q A^d0 has a coefficient of size " << rep.cayley_hamilton_max << " (scale "
       << rep.cayley_hamilton_scale << ")";
    throw CayleyHamiltonResidual(os.str());
  }
  return rep;
}

PolyMatrix maxwell_divergence_Q()
{
  PolyMatrix Q(2, 6, 3);
  for (int k = 0; k < 3; k++)
  {
    Q(0, k) = Poly::variable(3, k);
    Q(1, 3 + k) = Poly::variable(3, k);
  }
  return Q;
}

ExactSequenceReport verify_exact_sequence(const SymmetricSystem &sys, const PolyMatrix &Q,
                                          const std::vector<Vec> &xi_samples, double angle_tol)
{
  if (Q.cols() != sys.r)
  {
    throw DimensionMismatch("Q must have r columns");
  }
  ExactSequenceReport rep;
  rep.certified = true;
  for (const auto &xi : xi_samples)
  {
    if (xi.norm() == 0.0)
    {
      throw PreconditionError("exact-sequence samples must be nonzero");
    }
    Eigen::JacobiSVD<Mat> sa(eval_symbol(sys, xi), Eigen::ComputeFullU);
    const Vec &s = sa.singularValues();
    int ra = 0;
    for (int i = 0; i < s.size(); i++)
    {
      ra += s[i] > 1e-9 * s[0];
    }
    Mat range = sa.matrixU().leftCols(ra);

    Mat q = Q.eval(xi);
    int rq = 0;
    Mat V = Mat::Identity(sys.r, sys.r);
    if (q.size() > 0 && q.cwiseAbs().maxCoeff() > 0.0)
    {
      Eigen::JacobiSVD<Mat> sq(q, Eigen::ComputeFullV);
      const Vec &t = sq.singularValues();
      for (int i = 0; i < t.size(); i++)
      {
        rq += t[i] > 1e-9 * t[0];
      }
      V = sq.matrixV();
    }
    Mat ker = V.rightCols(sys.r - rq);

    rep.range_dim = ra;
    rep.kernel_dim = sys.r - rq;
    double angle = 0.0;
    if (ra != sys.r - rq)
    {
      rep.dims_agree = false;
      angle = pi / 2;
    }
    else if (ra > 0)
    {
      Mat resid = range - ker * (ker.transpose() * range);
      double sn = Eigen::JacobiSVD<Mat>(resid).singularValues()[0];
      angle = std::asin(std::min(1.0, sn));
    }
    rep.max_angle = std::max(rep.max_angle, angle);
    if (!rep.dims_agree || angle >= angle_tol)
    {
      rep.certified = false;
      rep.failure_xi = xi;
      std::ostringstream os;
      os << "Ker Q(xi) != Range A(xi) at xi = " << fmt_vec(xi) << " (dim Range A = " << ra
         << ", dim Ker Q = " << sys.r - rq << ", angle = " << angle << ")";
      throw ExactSequenceFailure(os.str());
    }
  }
  return rep;
}

Mat ellipticity_symbol(const SymmetricSystem &sys, const PolyMatrix &Q, int d, double tau, const Vec &xi)
{
  Mat T = tau * Mat::Identity(sys.r, sys.r) - eval_symbol(sys, xi);
  Mat P = Mat::Identity(sys.r, sys.r);
  for (int k = 0; k < 4 * d; k++)
  {
    P = P * T;
  }
  Mat q = Q.eval(xi);
  return P + q.transpose() * q;
}

EllipticityReport check_L_ellipticity(const SymmetricSystem &sys, const PolyMatrix &Q, int d, double v_min,
                                      const std::vector<double> &tau_grid, const std::vector<Vec> &xi_samples,
                                      double margin)
{
  EllipticityReport rep;
  auto min_sv = [&](double tau, bool &singular) {
    double m = std::numeric_limits<double>::infinity();
    singular = false;
    for (const auto &xi : xi_samples)
    {
      Mat l = ellipticity_symbol(sys, Q, d, tau, xi);
      Eigen::SelfAdjointEigenSolver<Mat> es(l, Eigen::EigenvaluesOnly);
      double lo = std::max(0.0, es.eigenvalues()[0]);
      double hi = es.eigenvalues().cwiseAbs().maxCoeff();
      m = std::min(m, lo);
      singular = singular || lo <= 1e-8 * std::max(1.0, hi);
    }
    return m;
  };

  bool sing0 = false;
  rep.min_sv_at_tau0 = min_sv(0.0, sing0);
  rep.speed_bound_ok = !sing0;
  for (double tau : tau_grid)
  {
    bool sing = false;
    double m = min_sv(tau, sing);
    rep.min_sv_by_tau.emplace_back(tau, m);
    if (sing)
    {
      rep.characteristic_taus.push_back(tau);
    }
    if (std::abs(tau) < v_min * (1.0 - margin) && sing)
    {
      rep.speed_bound_ok = false;
    }
  }
  return rep;
}

}  // namespace adspec
