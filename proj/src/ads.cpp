// SPDX-License-Identifier: Apache-2.0
#include "adspec/ads.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "adspec/errors.hpp"
#include "adspec/special.hpp"
#include "adspec/symbol.hpp"

namespace adspec
{

std::string to_string(Polarization p)
{
  return p == Polarization::TE ? "TE" : "TM";
}

Polarization polarization_from_string(const std::string &s)
{
  if (s == "TE" || s == "te")
  {
    return Polarization::TE;
  }
  if (s == "TM" || s == "tm")
  {
    return Polarization::TM;
  }
  throw ConfigError("unknown polarization '" + s + "'");
}

void ModeProblem::validate() const
{
  if (l < 1)
  {
    throw PreconditionError("mode degree l must be >= 1");
  }
  if (!(epsilon > 0.0))
  {
    throw PreconditionError("epsilon must be > 0 (epsilon = 0 is outside the supported range)");
  }
  if (!(radius > 0.0))
  {
    throw PreconditionError("obstacle radius must be > 0");
  }
}

cplx RadialProfile::u(double r) const
{
  auto [h, dh] = hankel_elem(l, -I1 * lambda * r);
  return scale * std::pow(I1, l) * lambda * r * h;
}

cplx RadialProfile::du(double r) const
{
  cplx x = -I1 * lambda * r;
  auto [h, dh] = hankel_elem(l, x);
  return scale * std::pow(I1, l) * lambda * (h + x * dh);
}

cplx RadialProfile::s(double r) const
{
  return std::sqrt(l * (l + 1.0)) * u(r) / (lambda * r);
}

namespace
{

struct Terms
{
  cplx a, b;  // F = a - b
};

Terms dispersion_terms(const ModeProblem &m, cplx lambda)
{
  const double a = m.radius;
  cplx x = -I1 * lambda * a;
  auto [h, dh] = hankel_elem(m.l, x);
  cplx pre = std::pow(I1, m.l) * lambda;
  cplx ua = pre * a * h;
  cplx dua = pre * (h + x * dh);
  if (m.pol == Polarization::TE)
  {
    return {(1.0 + m.epsilon) * lambda * ua, dua};
  }
  return {(1.0 + m.epsilon) * dua, lambda * ua};
}

}  // namespace

cplx dispersion_residual(const ModeProblem &mode, cplx lambda)
{
  if (lambda == 0.0)
  {
    throw DomainError("dispersion function is evaluated at lambda = 0");
  }
  auto t = dispersion_terms(mode, lambda);
  return t.a - t.b;
}

double dispersion_scale(const ModeProblem &mode, cplx lambda)
{
  auto t = dispersion_terms(mode, lambda);
  return std::abs(t.a) + std::abs(t.b);
}

namespace
{

constexpr std::array<double, 8> xgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> wgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Accumulates (1/2 pi i) int F'/F dz and (1/2 pi i) int z F'/F dz along segments.
class ContourIntegrator
{
public:
  ContourIntegrator(const ModeProblem &m, const RootOptions &o) : mode_(m), opt_(o) {}

  std::array<cplx, 2> segment(cplx z0, cplx z1)
  {
    return adapt(z0, z1, 0.0, 1.0, 0);
  }

private:
  std::array<cplx, 2> integrand(cplx z0, cplx dz, double t)
  {
    cplx z = z0 + t * dz;
    cplx f = dispersion_residual(mode_, z);
    double sc = dispersion_scale(mode_, z);
    if (std::abs(f) < opt_.zero_guard * sc)
    {
      std::ostringstream os;
      os << "|F| vanishes on the contour near lambda = " << z;
      throw ContourThroughZero(os.str());
    }
    double h = 1e-6 * std::max(1.0, std::abs(z));
    cplx df = (dispersion_residual(mode_, z + h) - dispersion_residual(mode_, z - h)) / (2.0 * h);
    cplx g = df / f * dz;
    return {g, z * g};
  }

  std::array<cplx, 2> adapt(cplx z0, cplx z1, double a, double b, int depth)
  {
    const cplx dz = z1 - z0;
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    std::array<cplx, 2> k{0.0, 0.0}, g{0.0, 0.0};
    auto fc = integrand(z0, dz, c);
    for (int q = 0; q < 2; q++)
    {
      k[q] += wgk[7] * fc[q];
      g[q] += wg[3] * fc[q];
    }
    for (int j = 0; j < 7; j++)
    {
      auto f1 = integrand(z0, dz, c - hw * xgk[j]);
      auto f2 = integrand(z0, dz, c + hw * xgk[j]);
      for (int q = 0; q < 2; q++)
      {
        k[q] += wgk[j] * (f1[q] + f2[q]);
        if (j % 2 == 1)
        {
          g[q] += wg[j / 2] * (f1[q] + f2[q]);
        }
      }
    }
    double err = 0.0, mag = 0.0;
    for (int q = 0; q < 2; q++)
    {
      k[q] *= hw;
      g[q] *= hw;
      err = std::max(err, std::abs(k[q] - g[q]));
      mag = std::max(mag, std::abs(k[q]));
    }
    if (err <= std::max(opt_.quad_tol * (b - a), 1e-9 * mag) || depth >= 20)
    {
      return k;
    }
    auto left = adapt(z0, z1, a, c, depth + 1);
    auto right = adapt(z0, z1, c, b, depth + 1);
    return {left[0] + right[0], left[1] + right[1]};
  }

  const ModeProblem &mode_;
  const RootOptions &opt_;
};

std::array<cplx, 2> rect_integrals(const ModeProblem &mode, const Rect &r, const RootOptions &opt)
{
  ContourIntegrator ci(mode, opt);
  const cplx c[4] = {{r.re0, r.im0}, {r.re1, r.im0}, {r.re1, r.im1}, {r.re0, r.im1}};
  std::array<cplx, 2> tot{0.0, 0.0};
  for (int e = 0; e < 4; e++)
  {
    auto s = ci.segment(c[e], c[(e + 1) % 4]);
    tot[0] += s[0];
    tot[1] += s[1];
  }
  const cplx norm = 1.0 / (2.0 * pi * I1);
  return {tot[0] * norm, tot[1] * norm};
}

struct Counted
{
  int n;
  cplx moment;
};

Counted count_roots(const ModeProblem &mode, const Rect &r, const RootOptions &opt)
{
  RootOptions o = opt;
  for (int attempt = 0; attempt < 3; attempt++)
  {
    auto v = rect_integrals(mode, r, o);
    double n = std::round(v[0].real());
    if (std::abs(v[0] - n) < 0.05)
    {
      return {static_cast<int>(n), v[1]};
    }
    o.quad_tol *= 1e-2;
  }
  throw NonConvergence("winding integral does not settle to an integer");
}

std::optional<cplx> newton(const ModeProblem &mode, cplx z, const RootOptions &opt)
{
  for (int it = 0; it < opt.newton_iters; it++)
  {
    cplx f = dispersion_residual(mode, z);
    if (std::abs(f) <= opt.newton_tol * dispersion_scale(mode, z))
    {
      // One extra step only if it does not make things worse.
      double h = 1e-6 * std::max(1.0, std::abs(z));
      cplx df = (dispersion_residual(mode, z + h) - dispersion_residual(mode, z - h)) / (2.0 * h);
      cplx zn = z - f / df;
      if (zn.real() < 0.0 && std::abs(dispersion_residual(mode, zn)) < std::abs(f))
      {
        z = zn;
      }
      return z;
    }
    double h = 1e-6 * std::max(1.0, std::abs(z));
    cplx df = (dispersion_residual(mode, z + h) - dispersion_residual(mode, z - h)) / (2.0 * h);
    if (df == 0.0)
    {
      return std::nullopt;
    }
    z -= f / df;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == 0.0)
    {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

cplx snap_real(const ModeProblem &mode, cplx z, const RootOptions &opt)
{
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z)))
  {
    return z;
  }
  double x = z.real();
  for (int it = 0; it < opt.newton_iters; it++)
  {
    double f = dispersion_residual(mode, x).real();
    if (std::abs(f) <= opt.newton_tol * dispersion_scale(mode, x))
    {
      return {x, 0.0};
    }
    double h = 1e-6 * std::max(1.0, std::abs(x));
    double df = (dispersion_residual(mode, x + h).real() - dispersion_residual(mode, x - h).real()) / (2.0 * h);
    x -= f / df;
  }
  return z;
}

class RootSearch
{
public:
  RootSearch(const ModeProblem &m, const RootOptions &o) : mode_(m), opt_(o), rng_(12345) {}

  void run(const Rect &r, int n, cplx moment, int depth)
  {
    if (n == 0)
    {
      return;
    }
    if (n == 1)
    {
      auto z = newton(mode_, moment, opt_);
      double pad = 1e-6 * std::max({1.0, r.re1 - r.re0, r.im1 - r.im0});
      if (z && r.contains(*z, pad))
      {
        add(snap_real(mode_, *z, opt_));
        return;
      }
    }
    if (depth >= opt_.max_depth)
    {
      throw NonConvergence("bisection depth limit reached with " + std::to_string(n) + " roots unresolved");
    }
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    for (int attempt = 0; attempt <= opt_.contour_retries; attempt++)
    {
      double f = 0.5 + (depth % 2 ? -0.0317 : 0.0317) + (attempt ? jitter(rng_) : 0.0);
      Rect a = r, b = r;
      if (r.re1 - r.re0 >= r.im1 - r.im0)
      {
        a.re1 = b.re0 = r.re0 + f * (r.re1 - r.re0);
      }
      else
      {
        a.im1 = b.im0 = r.im0 + f * (r.im1 - r.im0);
      }
      try
      {
        Counted ca = count_roots(mode_, a, opt_);
        Counted cb = count_roots(mode_, b, opt_);
        if (ca.n + cb.n != n)
        {
          continue;
        }
        run(a, ca.n, ca.n ? ca.moment / static_cast<double>(ca.n) : 0.0, depth + 1);
        run(b, cb.n, cb.n ? cb.moment / static_cast<double>(cb.n) : 0.0, depth + 1);
        return;
      }
      catch (const ContourThroughZero &)
      {
      }
    }
    throw NonConvergence("could not split region into consistent sub-counts");
  }

  std::vector<cplx> roots;

private:
  void add(cplx z)
  {
    for (auto &q : roots)
    {
      if (std::abs(q - z) < 1e-9 * std::max(1.0, std::abs(z)))
      {
        return;
      }
    }
    roots.push_back(z);
  }

  const ModeProblem &mode_;
  const RootOptions &opt_;
  std::mt19937_64 rng_;
};

void check_region(const Rect &r)
{
  if (!(r.re0 < r.re1 && r.im0 < r.im1))
  {
    throw PreconditionError("search region must have positive area");
  }
  if (!(r.re1 < 0.0))
  {
    throw PreconditionError("search region must lie in the open left half-plane");
  }
}

}  // namespace

cplx winding_integral(const ModeProblem &mode, const Rect &rect, const RootOptions &opt)
{
  mode.validate();
  check_region(rect);
  return rect_integrals(mode, rect, opt)[0];
}

int winding_number(const ModeProblem &mode, const Rect &rect, const RootOptions &opt)
{
  mode.validate();
  check_region(rect);
  return count_roots(mode, rect, opt).n;
}

std::vector<ComplexEigenpair> find_roots(const ModeProblem &mode, const Rect &region, const RootOptions &opt)
{
  mode.validate();
  check_region(region);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(1e-7, 1e-6);
  Rect r = region;
  Counted top{0, 0.0};
  for (int attempt = 0;; attempt++)
  {
    try
    {
      top = count_roots(mode, r, opt);
      break;
    }
    catch (const ContourThroughZero &)
    {
      if (attempt >= opt.contour_retries)
      {
        throw;
      }
      // Nudge every edge outward by a tiny relative amount.
      double sx = region.re1 - region.re0, sy = region.im1 - region.im0;
      r.re0 = region.re0 - u(rng) * sx;
      r.re1 = std::min(region.re1 + u(rng) * sx, 0.5 * region.re1);
      r.im0 = region.im0 - u(rng) * sy;
      r.im1 = region.conj_symmetric() ? -r.im0 : region.im1 + u(rng) * sy;
    }
  }

  RootSearch rs(mode, opt);
  rs.run(r, top.n, top.n ? top.moment / static_cast<double>(top.n) : 0.0, 0);
  std::vector<cplx> roots = rs.roots;

  if (region.conj_symmetric())
  {
    std::vector<cplx> extra;
    for (auto z : roots)
    {
      if (z.imag() == 0.0)
      {
        continue;
      }
      bool found = std::any_of(roots.begin(), roots.end(), [&](cplx q) {
        return std::abs(q - std::conj(z)) < 1e-8 * std::max(1.0, std::abs(z));
      });
      if (!found)
      {
        if (auto p = newton(mode, std::conj(z), opt))
        {
          extra.push_back(*p);
        }
      }
    }
    roots.insert(roots.end(), extra.begin(), extra.end());
  }

  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  std::vector<ComplexEigenpair> out;
  for (auto z : roots)
  {
    if (!(z.real() < 0.0))
    {
      throw NonConvergence("root with Re lambda >= 0 produced; this contradicts dissipativity");
    }
    ComplexEigenpair p;
    p.lambda = z;
    p.mode = mode;
    p.radial_profile = RadialProfile{mode.l, mode.pol, z, 1.0};
    if (opt.verify)
    {
      auto chk = verify_eigenpair(mode, z);
      p.pde_residual = chk.pde_residual;
      p.bc_residual = chk.bc_residual;
      p.divergence_residual = chk.divergence_residual;
      p.tail_ratio = chk.tail_ratio;
      p.decay_ok = chk.decay_ok;
    }
    out.push_back(p);
  }
  return out;
}

Eigen::Vector3cd mode_field_E(const ModeProblem &mode, cplx lambda, const Eigen::Vector3d &x)
{
  RadialProfile prof{mode.l, mode.pol, lambda, 1.0};
  const double r = x.norm();
  const double z = x[2] / r;
  auto [P, dP] = legendre(mode.l, z);
  Eigen::Vector3cd E;
  if (mode.pol == Polarization::TE)
  {
    cplx f = prof.u(r) * dP / (r * r);
    E << f * x[1], -f * x[0], 0.0;
  }
  else
  {
    const double L = mode.l * (mode.l + 1.0);
    cplx fr = -L * prof.u(r) / (lambda * r * r) * P / r;
    cplx ft = prof.du(r) / (lambda * r) * dP / (r * r);
    E << fr * x[0] + ft * x[0] * x[2], fr * x[1] + ft * x[1] * x[2],
        fr * x[2] - ft * (x[0] * x[0] + x[1] * x[1]);
  }
  return E;
}

namespace
{

constexpr std::array<double, 9> fd1 = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                       4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
constexpr std::array<double, 9> fd2 = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5,   -205.0 / 72,
                                       8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};

using V3 = Eigen::Vector3d;
using V3c = Eigen::Vector3cd;

// First derivatives J(k, i) = d E_k / d x_i.
Eigen::Matrix3cd jacobian(const ModeProblem &m, cplx lam, const V3 &x, double h)
{
  Eigen::Matrix3cd J = Eigen::Matrix3cd::Zero();
  for (int i = 0; i < 3; i++)
  {
    for (int p = 0; p < 9; p++)
    {
      if (fd1[p] == 0.0)
      {
        continue;
      }
      V3 y = x;
      y[i] += (p - 4) * h;
      J.col(i) += fd1[p] * mode_field_E(m, lam, y);
    }
  }
  return J / h;
}

}  // namespace

EigenpairCheck verify_eigenpair(const ModeProblem &mode, cplx lambda)
{
  mode.validate();
  if (!(lambda.real() < 0.0))
  {
    throw PreconditionError("verify_eigenpair requires Re lambda < 0");
  }
  EigenpairCheck out;
  const double a = mode.radius;
  const double h = 0.01 * a;
  auto dirs = fibonacci_sphere(10);

  // Interior: curl curl E + lambda^2 E and div E on log-spaced shells.
  const int nshell = 12;
  for (int sidx = 0; sidx < nshell; sidx++)
  {
    const double r = a * std::pow(10.0, static_cast<double>(sidx) / (nshell - 1));
    double res_max = 0.0, scale = 0.0, div_max = 0.0, div_scale = 0.0;
    for (const auto &w : dirs)
    {
      V3 x = r * V3(w[0], w[1], w[2]);
      V3c E = mode_field_E(mode, lambda, x);
      // Hessians H[i][j] = d_i d_j E (vector).
      V3c H[3][3];
      for (int i = 0; i < 3; i++)
      {
        V3c acc = V3c::Zero();
        for (int p = 0; p < 9; p++)
        {
          V3 y = x;
          y[i] += (p - 4) * h;
          acc += fd2[p] * mode_field_E(mode, lambda, y);
        }
        H[i][i] = acc / (h * h);
        for (int j = i + 1; j < 3; j++)
        {
          V3c m = V3c::Zero();
          for (int p = 0; p < 9; p++)
          {
            if (fd1[p] == 0.0)
            {
              continue;
            }
            for (int q = 0; q < 9; q++)
            {
              if (fd1[q] == 0.0)
              {
                continue;
              }
              V3 y = x;
              y[i] += (p - 4) * h;
              y[j] += (q - 4) * h;
              m += fd1[p] * fd1[q] * mode_field_E(mode, lambda, y);
            }
          }
          H[i][j] = H[j][i] = m / (h * h);
        }
      }
      V3c cc;
      for (int k = 0; k < 3; k++)
      {
        cplx gd = 0.0, lap = 0.0;
        for (int j = 0; j < 3; j++)
        {
          gd += H[k][j][j];
          lap += H[j][j][k];
        }
        cc[k] = gd - lap;
      }
      res_max = std::max(res_max, (cc + lambda * lambda * E).norm());
      scale = std::max(scale, cc.norm() + std::norm(lambda) * E.norm());

      Eigen::Matrix3cd J = jacobian(mode, lambda, x, h);
      div_max = std::max(div_max, std::abs(J.trace()));
      div_scale = std::max(div_scale, J.diagonal().cwiseAbs().sum() + J.norm());
    }
    if (scale > 0.0)
    {
      out.pde_residual = std::max(out.pde_residual, res_max / scale);
    }
    if (div_scale > 0.0)
    {
      out.divergence_residual = std::max(out.divergence_residual, div_max / div_scale);
    }
  }

  // Boundary: (1 + eps) E_tan - nu x B_tan with B = -curl E / lambda and
  // nu the unit radial vector (the orientation that makes the condition
  // dissipative).
  double bres = 0.0, bscale = 0.0;
  for (const auto &w : fibonacci_sphere(26))
  {
    V3 n(w[0], w[1], w[2]);
    V3 x = a * n;
    V3c E = mode_field_E(mode, lambda, x);
    Eigen::Matrix3cd J = jacobian(mode, lambda, x, h);
    V3c curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
    V3c B = -curl / lambda;
    V3c nc = n.cast<cplx>();
    V3c Et = E - nc * nc.dot(E);
    V3c nxB = nc.cross(B);
    bres = std::max(bres, ((1.0 + mode.epsilon) * Et - nxB).norm());
    bscale = std::max(bscale, (1.0 + mode.epsilon) * Et.norm() + nxB.norm());
  }
  out.bc_residual = bscale > 0.0 ? bres / bscale : 0.0;

  // Tail test of int |u|^2 + |w|^2 + |s|^2 dr over doubling shells.
  RadialProfile prof{mode.l, mode.pol, lambda, 1.0};
  std::vector<double> gx, gw;
  gauss_legendre(40, gx, gw);
  const double r_end = std::max(64.0 * a, a + 40.0 / std::abs(lambda.real()));
  double total = 0.0, last = 0.0, prev = 0.0;
  for (double r0 = a; r0 < r_end; r0 *= 2.0)
  {
    const double r1 = 2.0 * r0;
    double inc = 0.0;
    for (std::size_t q = 0; q < gx.size(); q++)
    {
      double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gx[q];
      inc += 0.5 * (r1 - r0) * gw[q] * (std::norm(prof.u(r)) + std::norm(prof.w(r)) + std::norm(prof.s(r)));
    }
    total += inc;
    prev = last;
    last = inc;
  }
  out.tail_ratio = total > 0.0 ? last / total : 0.0;
  out.decay_ok = std::isfinite(total) && last <= prev && out.tail_ratio < 1e-6;
  return out;
}

std::vector<double> scan_abs_dispersion(const ModeProblem &mode, const Rect &rect, int nx, int ny, Exec exec)
{
  mode.validate();
  std::vector<double> out(static_cast<std::size_t>(nx) * ny);
  const double dx = (rect.re1 - rect.re0) / nx, dy = (rect.im1 - rect.im0) / ny;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (int j = 0; j < ny; j++)
  {
    for (int i = 0; i < nx; i++)
    {
      cplx z(rect.re0 + (i + 0.5) * dx, rect.im0 + (j + 0.5) * dy);
      out[static_cast<std::size_t>(j) * nx + i] = std::abs(dispersion_residual(mode, z));
    }
  }
  return out;
}

}  // namespace adspec
