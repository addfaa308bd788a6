// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "adspec/ads.hpp"
#include "adspec/grid.hpp"
#include "adspec/harmonics.hpp"
#include "adspec/types.hpp"

namespace adspec
{

// Damping layer sigma(r) = sigma_max ((r - r_start) / (R_max - r_start))^power.
struct Absorber
{
  double r_start = 20.0;
  double sigma_max = 2.0;
  double power = 2.0;
};

// Exterior of the obstacle |x| < radius (1 + delta s(theta, phi)) with the
// dissipative condition (1 + eps) E_tan = x_hat x B_tan. `reflecting`
// replaces it by E_tan = 0 (conservative). coefficient_scale multiplies the
// whole first-order operator.
struct Problem
{
  double radius = 1.0;
  SphericalField epsilon{1.0, {}};
  double delta = 0.0;
  SphericalField shape{0.0, {}};
  double coefficient_scale = 1.0;
  bool reflecting = false;

  void validate() const;
};

struct Resolution
{
  int L_max = 1;
  int N_r = 401;  // radial nodes
  double R_max = 30.0;
  Absorber absorber;
  double clustering = 4.0;
  double cutoff_length = 1.0;  // width of the shape-map cutoff
  int l_min = 1;
  bool te = true;
  bool tm = true;
  bool all_m = true;  // false keeps only m = 0

  void validate(const Problem &p) const;
};

struct ModeIndex
{
  int l = 1;
  int m = 0;
  Polarization pol = Polarization::TE;

  std::string label() const;
};

// Mode-reduced first-order system on the shell. Unknowns are ordered mode by
// mode, each block [u(0..N), w(0..N-1), s(0..N)]. The semi-discrete system is
//   W x' = K x,
// with W the (symmetric positive) discrete energy inner product, so the
// generator is G = W^{-1} K and Re <G x, x>_W = Re x^H K x.
class DiscreteGenerator
{
public:
  Problem problem;
  Resolution resolution;
  std::vector<ModeIndex> modes;
  RadialGrid grid;

  SpMat K;      // full operator
  SpMat K_int;  // interior (skew) part
  SpMat K_bnd;  // boundary part (-K_bc on the u(0) traces)
  SpMat K_abs;  // absorber part (diagonal, <= 0)
  SpMat W;      // mass
  Mat bc_coupling;  // K_bc over modes: w(a) = K_bc u(a)
  Vec sigma_node, sigma_half;
  bool diagonal_mass = true;
  // Mode indices grouped into independent (decoupled) components.
  std::vector<std::vector<int>> components;
  std::uint64_t hash = 0;

  int intervals() const { return grid.N; }
  int block_size() const { return 3 * grid.N + 2; }
  int size() const { return static_cast<int>(modes.size()) * block_size(); }
  int offset(int mode) const { return mode * block_size(); }
  int u(int mode, int i) const { return offset(mode) + i; }
  int w(int mode, int j) const { return offset(mode) + grid.N + 1 + j; }
  int s(int mode, int i) const { return offset(mode) + 2 * grid.N + 1 + i; }
  int find_mode(int l, int m, Polarization pol) const;
  bool coupled() const { return components.size() < modes.size(); }
  // Dof indices of the modes in one component, in increasing order.
  std::vector<int> component_dofs(int c) const;

  VecC apply(const VecC &x) const;           // G x
  VecC solve_mass(const VecC &b) const;      // W^{-1} b
  double energy(const VecC &x) const;         // x^H W x
  cplx inner(const VecC &x, const VecC &y) const;  // x^H W y
  double norm(const VecC &x) const { return std::sqrt(energy(x)); }
  // d/dt x^H W x = 2 Re x^H K x, split into boundary flux and absorber loss.
  double boundary_flux(const VecC &x) const;
  double absorber_loss(const VecC &x) const;

  // Symmetric parts (w.r.t. W) of the interior and boundary operators.
  double skew_defect() const;            // ||K_int + K_int^T||_max
  double max_boundary_symmetric_eig() const;  // largest eig of sym(K_bnd)

private:
  friend DiscreteGenerator assemble(const Problem &, const Resolution &);
  std::shared_ptr<const Eigen::SimplicialLDLT<SpMat>> mass_solver_;
  Vec mass_diag_;
};

DiscreteGenerator assemble(const Problem &problem, const Resolution &resolution);

// Samples a closed-form radial profile into the (l, m, pol) block.
VecC sample_profile(const DiscreteGenerator &gen, const RadialProfile &prof, int m = 0);

// Boundary condition matrix over the given modes for an angle-dependent eps.
Mat boundary_coupling(const std::vector<ModeIndex> &modes, const SphericalField &epsilon);

// Coordinate export: one "row col re im" line per stored entry.
void write_coo(std::ostream &os, const SpMat &m);

}  // namespace adspec
