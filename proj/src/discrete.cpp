// SPDX-License-Identifier: Apache-2.0
#include "adspec/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "adspec/errors.hpp"

namespace adspec
{

void Problem::validate() const
{
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw PreconditionError("obstacle radius must be positive");
  }
  if (!(coefficient_scale > 0.0))
  {
    throw PreconditionError("coefficient scale must be positive");
  }
  if (epsilon.is_constant() && !(epsilon.constant > 0.0))
  {
    throw PreconditionError("epsilon must be positive for a dissipative boundary");
  }
  if (!std::isfinite(delta))
  {
    throw PreconditionError("delta must be finite");
  }
  for (const auto *f : {&epsilon, &shape})
  {
    for (const auto &t : f->terms)
    {
      if (t.l < 0 || std::abs(t.m) > t.l || !std::isfinite(t.c))
      {
        throw PreconditionError("invalid spherical-harmonic coefficient");
      }
    }
  }
}

void Resolution::validate(const Problem &p) const
{
  if (L_max < 1 || l_min < 1 || l_min > L_max)
  {
    throw ResolutionError("need 1 <= l_min <= L_max");
  }
  if (N_r < 16)
  {
    throw ResolutionError("N_r must be at least 16");
  }
  if (!(R_max > absorber.r_start) || !(absorber.r_start > p.radius))
  {
    throw ResolutionError("need R_max > R_abs > radius");
  }
  if (!te && !tm)
  {
    throw ResolutionError("at least one polarization is required");
  }
  if (clustering < 0.0 || !(absorber.power > 0.0))
  {
    throw ResolutionError("clustering must be >= 0 and the absorber power > 0");
  }
  if (p.delta != 0.0 && (!(cutoff_length > 0.0) || p.radius + cutoff_length >= absorber.r_start))
  {
    throw ResolutionError("shape cutoff must end before the absorber");
  }
}

std::string ModeIndex::label() const
{
  return "l" + std::to_string(l) + "m" + std::to_string(m) + to_string(pol);
}

namespace
{

// Angular parts of one mode at the quadrature points.
struct ModeAngular
{
  std::vector<double> Y;
  std::vector<Eigen::Vector3d> Psi, Phi;
};

std::vector<ModeAngular> tabulate(const std::vector<ModeIndex> &modes, const SphereQuadrature &q)
{
  std::vector<ModeAngular> out(modes.size());
  for (std::size_t k = 0; k < modes.size(); k++)
  {
    const double sq = std::sqrt(modes[k].l * (modes[k].l + 1.0));
    auto &a = out[k];
    a.Y.resize(q.size());
    a.Psi.resize(q.size());
    a.Phi.resize(q.size());
    for (std::size_t p = 0; p < q.size(); p++)
    {
      HarmonicSample h = real_harmonic(modes[k].l, modes[k].m, q.theta[p], q.phi[p]);
      a.Y[p] = h.Y;
      a.Psi[p] = h.grad / sq;
      a.Phi[p] = q.rhat[p].cross(a.Psi[p]);
    }
  }
  return out;
}

SphereQuadrature quadrature_for(int L, int extra)
{
  int nt = 2 * L + extra + 4;
  return SphereQuadrature::make(nt, 2 * nt + 2);
}

void drop_small(Mat &m, double tol)
{
  for (Eigen::Index i = 0; i < m.rows(); i++)
  {
    for (Eigen::Index j = 0; j < m.cols(); j++)
    {
      if (std::abs(m(i, j)) < tol)
      {
        m(i, j) = 0.0;
      }
    }
  }
}

struct UnionFind
{
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void join(int a, int b) { p[find(a)] = find(b); }
};

// Which field a component of a mode belongs to, and its angular vector.
// comp: 0 = u, 1 = w, 2 = s. Returns false for the E field, true for B.
bool is_magnetic(Polarization pol, int comp)
{
  if (pol == Polarization::TE)
  {
    return comp != 0;
  }
  return comp == 0;
}

Eigen::Vector3d angular_vector(const ModeAngular &a, Polarization pol, int comp, std::size_t p,
                               const Eigen::Vector3d &rhat)
{
  switch (comp)
  {
    case 0:
      return pol == Polarization::TE ? a.Phi[p] : Eigen::Vector3d(-a.Phi[p]);
    case 1:
      return a.Psi[p];
    default:
      return a.Y[p] * rhat;
  }
}

// C^2 cutoff: chi(0) = 1, chi(1) = 0, first and second derivatives vanish at both ends.
double chi(double t) { return t >= 1.0 ? 0.0 : (1 - t) * (1 - t) * (1 - t) * (1 + 3 * t + 6 * t * t); }
double dchi(double t) { return t >= 1.0 ? 0.0 : -30.0 * t * t * (1 - t) * (1 - t); }

}  // namespace

Mat boundary_coupling(const std::vector<ModeIndex> &modes, const SphericalField &epsilon)
{
  const int n = static_cast<int>(modes.size());
  Mat Kbc = Mat::Zero(n, n);
  if (epsilon.is_constant())
  {
    const double b = 1.0 + epsilon.constant;
    for (int k = 0; k < n; k++)
    {
      Kbc(k, k) = modes[k].pol == Polarization::TE ? b : 1.0 / b;
    }
    return Kbc;
  }
  int L = 0;
  for (const auto &m : modes)
  {
    L = std::max(L, m.l);
  }
  SphereQuadrature q = quadrature_for(L, epsilon.max_degree());
  auto ang = tabulate(modes, q);
  std::vector<double> onepe(q.size());
  for (std::size_t p = 0; p < q.size(); p++)
  {
    double e = eval_field(epsilon, q.theta[p], q.phi[p]);
    if (!(e > 0.0))
    {
      throw PreconditionError("epsilon must be positive on the whole boundary");
    }
    onepe[p] = 1.0 + e;
  }
  // Tangential E basis: Phi for TE modes, Psi for TM modes.
  std::vector<int> te, tm;
  for (int k = 0; k < n; k++)
  {
    (modes[k].pol == Polarization::TE ? te : tm).push_back(k);
  }
  Mat M(n, n);
  for (int j = 0; j < n; j++)
  {
    for (int k = 0; k <= j; k++)
    {
      double acc = 0.0;
      for (std::size_t p = 0; p < q.size(); p++)
      {
        const auto &ej = modes[j].pol == Polarization::TE ? ang[j].Phi[p] : ang[j].Psi[p];
        const auto &ek = modes[k].pol == Polarization::TE ? ang[k].Phi[p] : ang[k].Psi[p];
        acc += q.weight[p] * onepe[p] * ej.dot(ek);
      }
      M(j, k) = M(k, j) = acc;
    }
  }
  drop_small(M, 1e-13 * M.cwiseAbs().maxCoeff());

  const int a = static_cast<int>(te.size()), b = static_cast<int>(tm.size());
  Mat M11(a, a), M12(a, b), M22(b, b);
  for (int i = 0; i < a; i++)
  {
    for (int j = 0; j < a; j++) M11(i, j) = M(te[i], te[j]);
    for (int j = 0; j < b; j++) M12(i, j) = M(te[i], tm[j]);
  }
  for (int i = 0; i < b; i++)
  {
    for (int j = 0; j < b; j++) M22(i, j) = M(tm[i], tm[j]);
  }
  // (1+eps) E_tan = x_hat x B_tan in Galerkin form:
  //   w_TE = M11 u_TE + M12 w_TM,  u_TM = M21 u_TE + M22 w_TM.
  Mat M22inv = b > 0 ? Mat(M22.inverse()) : Mat(0, 0);
  Mat X = M12 * M22inv;
  Mat S = M11 - X * M12.transpose();
  for (int i = 0; i < a; i++)
  {
    for (int j = 0; j < a; j++) Kbc(te[i], te[j]) = S(i, j);
    for (int j = 0; j < b; j++) Kbc(te[i], tm[j]) = X(i, j);
  }
  for (int i = 0; i < b; i++)
  {
    for (int j = 0; j < a; j++) Kbc(tm[i], te[j]) = -X(j, i);
    for (int j = 0; j < b; j++) Kbc(tm[i], tm[j]) = M22inv(i, j);
  }
  drop_small(Kbc, 1e-13 * Kbc.cwiseAbs().maxCoeff());
  return Kbc;
}

DiscreteGenerator assemble(const Problem &problem, const Resolution &res)
{
  problem.validate();
  res.validate(problem);
  if (res.absorber.sigma_max < 0.0)
  {
    throw UnstableAbsorber("negative absorber strength produces growing modes");
  }

  DiscreteGenerator g;
  g.problem = problem;
  g.resolution = res;
  for (int l = res.l_min; l <= res.L_max; l++)
  {
    for (Polarization pol : {Polarization::TE, Polarization::TM})
    {
      if ((pol == Polarization::TE && !res.te) || (pol == Polarization::TM && !res.tm))
      {
        continue;
      }
      for (int m = res.all_m ? -l : 0; m <= (res.all_m ? l : 0); m++)
      {
        g.modes.push_back({l, m, pol});
      }
    }
  }
  const int nm = static_cast<int>(g.modes.size());
  g.grid = RadialGrid::make(res.N_r - 1, problem.radius, res.R_max, res.clustering);
  const RadialGrid &gr = g.grid;
  const int N = gr.N;
  const int n = g.size();

  auto sigma = [&](double r) {
    const Absorber &ab = res.absorber;
    return r > ab.r_start ? ab.sigma_max * std::pow((r - ab.r_start) / (res.R_max - ab.r_start), ab.power) : 0.0;
  };
  g.sigma_node.resize(N + 1);
  g.sigma_half.resize(N);
  for (int i = 0; i <= N; i++) g.sigma_node[i] = sigma(gr.r_node[i]);
  for (int j = 0; j < N; j++) g.sigma_half[j] = sigma(gr.r_half[j]);

  g.bc_coupling = problem.reflecting ? Mat(Mat::Zero(nm, nm)) : boundary_coupling(g.modes, problem.epsilon);

  const double cs = problem.coefficient_scale;
  std::vector<Eigen::Triplet<double>> ti, tb, ta, tw;
  for (int k = 0; k < nm; k++)
  {
    const double c = std::sqrt(g.modes[k].l * (g.modes[k].l + 1.0));
    // d_t u = w' - c s / r,  d_t w = u',  d_t s = c u / r
    for (int j = 0; j < N; j++)
    {
      ti.emplace_back(g.u(k, j), g.w(k, j), cs);
      ti.emplace_back(g.u(k, j + 1), g.w(k, j), -cs);
      ti.emplace_back(g.w(k, j), g.u(k, j + 1), cs);
      ti.emplace_back(g.w(k, j), g.u(k, j), -cs);
    }
    for (int i = 0; i <= N; i++)
    {
      double v = cs * c * gr.h_node[i] / gr.r_node[i];
      ti.emplace_back(g.u(k, i), g.s(k, i), -v);
      ti.emplace_back(g.s(k, i), g.u(k, i), v);
      if (g.sigma_node[i] != 0.0)
      {
        ta.emplace_back(g.u(k, i), g.u(k, i), -cs * g.sigma_node[i] * gr.h_node[i]);
      }
    }
    for (int j = 0; j < N; j++)
    {
      if (g.sigma_half[j] != 0.0)
      {
        ta.emplace_back(g.w(k, j), g.w(k, j), -cs * g.sigma_half[j] * gr.h_half[j]);
      }
    }
    for (int k2 = 0; k2 < nm; k2++)
    {
      if (g.bc_coupling(k, k2) != 0.0)
      {
        tb.emplace_back(g.u(k, 0), g.u(k2, 0), -cs * g.bc_coupling(k, k2));
      }
    }
    for (int i = 0; i <= N; i++)
    {
      tw.emplace_back(g.u(k, i), g.u(k, i), gr.h_node[i]);
      tw.emplace_back(g.s(k, i), g.s(k, i), gr.h_node[i]);
    }
    for (int j = 0; j < N; j++)
    {
      tw.emplace_back(g.w(k, j), g.w(k, j), gr.h_half[j]);
    }
  }

  UnionFind uf(nm);
  for (int k = 0; k < nm; k++)
  {
    for (int k2 = 0; k2 < nm; k2++)
    {
      if (g.bc_coupling(k, k2) != 0.0)
      {
        uf.join(k, k2);
      }
    }
  }

  // Shape perturbation: the map x = y (1 + delta s(y_hat) chi((|y| - a) / l_c))
  // flattens the boundary; to first order in delta the material becomes
  // eps' = mu' = I + delta S with
  //   S_tt = (chi + rho chi') s,  S_rr = (chi - rho chi') s,  S_rt = -chi grad_S s.
  // Skipped entirely at delta = 0 so the assembly is bit-identical.
  const double delta = problem.delta;
  if (delta != 0.0 && !(problem.shape.constant == 0.0 && problem.shape.terms.empty()))
  {
    SphereQuadrature q = quadrature_for(res.L_max, problem.shape.max_degree() + 2);
    auto ang = tabulate(g.modes, q);
    std::vector<double> sv(q.size());
    std::vector<Eigen::Vector3d> gs(q.size());
    for (std::size_t p = 0; p < q.size(); p++)
    {
      sv[p] = eval_field(problem.shape, q.theta[p], q.phi[p]);
      gs[p].setZero();
      for (const auto &t : problem.shape.terms)
      {
        gs[p] += t.c * real_harmonic(t.l, t.m, q.theta[p], q.phi[p]).grad;
      }
    }
    // Angular integrals over local index (mode, comp).
    const int nl = 3 * nm;
    Mat Att = Mat::Zero(nl, nl), Arr = Mat::Zero(nl, nl), Art = Mat::Zero(nl, nl);
    for (int A = 0; A < nl; A++)
    {
      for (int B = 0; B <= A; B++)
      {
        int ka = A / 3, ca = A % 3, kb = B / 3, cb = B % 3;
        if (is_magnetic(g.modes[ka].pol, ca) != is_magnetic(g.modes[kb].pol, cb))
        {
          continue;
        }
        double tt = 0, rr = 0, rt = 0;
        for (std::size_t p = 0; p < q.size(); p++)
        {
          const Eigen::Vector3d &rh = q.rhat[p];
          Eigen::Vector3d va = angular_vector(ang[ka], g.modes[ka].pol, ca, p, rh);
          Eigen::Vector3d vb = angular_vector(ang[kb], g.modes[kb].pol, cb, p, rh);
          double ra = va.dot(rh), rb = vb.dot(rh);
          Eigen::Vector3d ta_ = va - ra * rh, tb_ = vb - rb * rh;
          tt += q.weight[p] * sv[p] * ta_.dot(tb_);
          rr += q.weight[p] * sv[p] * ra * rb;
          rt += q.weight[p] * (ra * gs[p].dot(tb_) + rb * gs[p].dot(ta_));
        }
        Att(A, B) = Att(B, A) = tt;
        Arr(A, B) = Arr(B, A) = rr;
        Art(A, B) = Art(B, A) = rt;
      }
    }
    const double scale = std::max({Att.cwiseAbs().maxCoeff(), Arr.cwiseAbs().maxCoeff(), Art.cwiseAbs().maxCoeff(), 1e-300});
    drop_small(Att, 1e-13 * scale);
    drop_small(Arr, 1e-13 * scale);
    drop_small(Art, 1e-13 * scale);
    for (int A = 0; A < nl; A++)
    {
      for (int B = 0; B < nl; B++)
      {
        if (Att(A, B) != 0.0 || Arr(A, B) != 0.0 || Art(A, B) != 0.0)
        {
          uf.join(A / 3, B / 3);
        }
      }
    }
    // Node-local reading of (u, w, s): w averaged from the neighbouring half nodes.
    auto reads = [&](int k, int comp, int i, std::vector<std::pair<int, double>> &out) {
      out.clear();
      if (comp == 0)
      {
        out.emplace_back(g.u(k, i), 1.0);
      }
      else if (comp == 2)
      {
        out.emplace_back(g.s(k, i), 1.0);
      }
      else if (i == 0)
      {
        out.emplace_back(g.w(k, 0), 1.0);
      }
      else if (i == N)
      {
        out.emplace_back(g.w(k, N - 1), 1.0);
      }
      else
      {
        out.emplace_back(g.w(k, i - 1), 0.5);
        out.emplace_back(g.w(k, i), 0.5);
      }
    };
    std::vector<std::pair<int, double>> ra, rb;
    for (int i = 0; i <= N; i++)
    {
      const double rho = gr.r_node[i];
      const double t = (rho - problem.radius) / res.cutoff_length;
      if (t >= 1.0)
      {
        break;
      }
      const double ch = chi(t), dch = dchi(t) / res.cutoff_length;
      const double ctt = ch + rho * dch, crr = ch - rho * dch, crt = -ch;
      for (int A = 0; A < nl; A++)
      {
        for (int B = 0; B < nl; B++)
        {
          double v = ctt * Att(A, B) + crr * Arr(A, B) + crt * Art(A, B);
          if (v == 0.0)
          {
            continue;
          }
          v *= delta * gr.h_node[i];
          reads(A / 3, A % 3, i, ra);
          reads(B / 3, B % 3, i, rb);
          for (auto [da, wa] : ra)
          {
            for (auto [db, wb] : rb)
            {
              tw.emplace_back(da, db, v * wa * wb);
            }
          }
        }
      }
    }
    g.diagonal_mass = false;
  }

  g.K_int.resize(n, n);
  g.K_int.setFromTriplets(ti.begin(), ti.end());
  g.K_bnd.resize(n, n);
  g.K_bnd.setFromTriplets(tb.begin(), tb.end());
  g.K_abs.resize(n, n);
  g.K_abs.setFromTriplets(ta.begin(), ta.end());
  g.W.resize(n, n);
  g.W.setFromTriplets(tw.begin(), tw.end());
  g.K = g.K_int + g.K_bnd + g.K_abs;
  g.K.makeCompressed();
  g.W.makeCompressed();

  // The absorber alone must be passive: sym(K_abs) = K_abs is diagonal.
  for (int k = 0; k < g.K_abs.outerSize(); k++)
  {
    for (SpMat::InnerIterator it(g.K_abs, k); it; ++it)
    {
      if (it.value() > 1e-8 * g.W.coeff(it.row(), it.row()))
      {
        throw UnstableAbsorber("absorber injects energy");
      }
    }
  }

  if (g.diagonal_mass)
  {
    g.mass_diag_ = g.W.diagonal();
  }
  else
  {
    auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(g.W);
    if (ldlt->info() != Eigen::Success || ldlt->vectorD().minCoeff() <= 0.0)
    {
      throw PreconditionError("shape perturbation too large: energy inner product is not positive");
    }
    g.mass_solver_ = ldlt;
  }

  std::vector<std::vector<int>> comp;
  std::vector<int> root_id(nm, -1);
  for (int k = 0; k < nm; k++)
  {
    int r = uf.find(k);
    if (root_id[r] < 0)
    {
      root_id[r] = static_cast<int>(comp.size());
      comp.emplace_back();
    }
    comp[root_id[r]].push_back(k);
  }
  g.components = std::move(comp);

  std::uint64_t h = fnv1a(&n, sizeof(n));
  for (const SpMat *m : {&g.K, &g.W})
  {
    h = fnv1a(m->outerIndexPtr(), sizeof(int) * (m->outerSize() + 1), h);
    h = fnv1a(m->innerIndexPtr(), sizeof(int) * m->nonZeros(), h);
    h = fnv1a(m->valuePtr(), sizeof(double) * m->nonZeros(), h);
  }
  g.hash = h;
  return g;
}

int DiscreteGenerator::find_mode(int l, int m, Polarization pol) const
{
  for (std::size_t k = 0; k < modes.size(); k++)
  {
    if (modes[k].l == l && modes[k].m == m && modes[k].pol == pol)
    {
      return static_cast<int>(k);
    }
  }
  return -1;
}

std::vector<int> DiscreteGenerator::component_dofs(int c) const
{
  std::vector<int> d;
  for (int k : components.at(c))
  {
    for (int i = 0; i < block_size(); i++)
    {
      d.push_back(offset(k) + i);
    }
  }
  return d;
}

VecC DiscreteGenerator::solve_mass(const VecC &b) const
{
  if (diagonal_mass)
  {
    return b.cwiseQuotient(mass_diag_.cast<cplx>());
  }
  VecC x(b.size());
  // Solve into contiguous storage: the factorizations mis-handle strided targets.
  const Vec re = mass_solver_->solve(Vec(b.real())), im = mass_solver_->solve(Vec(b.imag()));
  x.real() = re;
  x.imag() = im;
  return x;
}

VecC DiscreteGenerator::apply(const VecC &x) const { return solve_mass(K * x); }

double DiscreteGenerator::energy(const VecC &x) const { return std::real(x.dot(W * x)); }

cplx DiscreteGenerator::inner(const VecC &x, const VecC &y) const { return x.dot(W * y); }

double DiscreteGenerator::boundary_flux(const VecC &x) const { return 2.0 * std::real(x.dot(K_bnd * x)); }

double DiscreteGenerator::absorber_loss(const VecC &x) const { return 2.0 * std::real(x.dot(K_abs * x)); }

double DiscreteGenerator::skew_defect() const
{
  SpMat s = SpMat(K_int.transpose()) + K_int;
  double m = 0.0;
  for (int k = 0; k < s.outerSize(); k++)
  {
    for (SpMat::InnerIterator it(s, k); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

double DiscreteGenerator::max_boundary_symmetric_eig() const
{
  Mat s = -0.5 * (bc_coupling + bc_coupling.transpose()) * problem.coefficient_scale;
  if (s.size() == 0)
  {
    return 0.0;
  }
  return Eigen::SelfAdjointEigenSolver<Mat>(s).eigenvalues().maxCoeff();
}

VecC sample_profile(const DiscreteGenerator &gen, const RadialProfile &prof, int m)
{
  int k = gen.find_mode(prof.l, m, prof.pol);
  if (k < 0)
  {
    throw PreconditionError("mode " + std::to_string(prof.l) + "/" + to_string(prof.pol) + " is not in the generator");
  }
  VecC x = VecC::Zero(gen.size());
  const RadialGrid &gr = gen.grid;
  for (int i = 0; i <= gr.N; i++)
  {
    x[gen.u(k, i)] = prof.u(gr.r_node[i]);
    x[gen.s(k, i)] = prof.s(gr.r_node[i]);
  }
  for (int j = 0; j < gr.N; j++)
  {
    x[gen.w(k, j)] = prof.w(gr.r_half[j]);
  }
  return x;
}

void write_coo(std::ostream &os, const SpMat &m)
{
  os.precision(17);
  for (int k = 0; k < m.outerSize(); k++)
  {
    for (SpMat::InnerIterator it(m, k); it; ++it)
    {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << " 0\n";
    }
  }
}

}  // namespace adspec
