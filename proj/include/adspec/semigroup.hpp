// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "adspec/ads.hpp"
#include "adspec/discrete.hpp"

namespace adspec
{

struct EvolveOptions
{
  double T = 5.0;
  double dt = 0.0;  // 0: h_min / (2 v_max)
  // W-inner products <v, x(t)> recorded every step.
  std::vector<VecC> overlaps;
  // Dofs whose values are recorded every step.
  std::vector<int> probe_dofs;
  double growth_tol = 1e-10;
  Exec exec = Exec::Parallel;
};

// Crank-Nicolson trajectory. energy[k] = ||x(t_k)||_W^2; boundary_flux[k]
// and absorber_loss[k] (k >= 1) are 2 Re xbar^H K xbar on the step ending at
// t_k, so that (energy[k] - energy[k-1]) / dt = flux + loss exactly.
struct EvolveTrace
{
  double dt = 0.0;
  int steps = 0;
  std::vector<double> t, energy, boundary_flux, absorber_loss;
  std::vector<std::vector<cplx>> overlaps;  // [step][vector]
  std::vector<std::vector<cplx>> probes;    // [step][dof]
  VecC final_state;
};

// Throws StepRejected if the energy grows by more than growth_tol.
EvolveTrace evolve(const DiscreteGenerator &gen, const VecC &f, const EvolveOptions &opt = {});

struct FluxAudit
{
  double max_identity_error = 0.0;  // |dE/dt - flux - loss| / max(E)
  double max_boundary_flux = 0.0;   // <= 0 for a dissipative boundary
  bool flux_nonpositive = true;
  double mean_flux_rate = 0.0;      // time average of flux / E
  double mean_total_rate = 0.0;     // time average of (flux + loss) / E
};

FluxAudit energy_flux_audit(const EvolveTrace &trace);

// Radial profile of the (l, pol) outgoing mode at lambda, sampled into the
// m = 0 block and scaled to unit energy.
VecC eigenmode_initial(const DiscreteGenerator &gen, const ModeProblem &mode, cplx lambda);

// Bump (1 - t^2)^degree on [r0, r1] in the u and w unknowns of one mode.
VecC shell_data(const DiscreteGenerator &gen, int mode, double r0, double r1, int degree = 8);

struct FiniteSpeedResult
{
  double arrival = -1.0;  // -1: never exceeded the threshold
  double bound = 0.0;     // (c - b) / v_max - 2 dt
  double dt = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

// First time the field at radius c exceeds 1e-8 ||f||_W. b is the outer edge
// of the support of f.
FiniteSpeedResult finite_speed_test(const DiscreteGenerator &gen, const VecC &f, double b, double c, double T,
                                    double dt = 0.0);

struct DecayReport
{
  std::vector<double> t, relative_energy;
  double kernel_overlap = 0.0;  // |<witness, f>| after orthogonalisation
};

// Boundary-localised data made W-orthogonal to gradient kernel witnesses,
// evolved for time T; the energy profile is reported, not asserted.
DecayReport decay_experiment(const DiscreteGenerator &gen, double T, int witnesses = 10, std::uint64_t seed = 3);

}  // namespace adspec
