// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adspec/discrete.hpp"

namespace adspec
{

// Discrete gradient in the (mode) block: B = grad(phi(r) Y_lm) for TE blocks,
// E = grad(phi(r) Y_lm) for TM blocks. Exactly annihilated by K whenever phi
// vanishes on the first and last half nodes.
VecC gradient_witness(const DiscreteGenerator &gen, int mode, const std::function<double(double)> &phi);

struct WitnessEntry
{
  std::string mode;
  double center = 0.0, half_width = 0.0;
  double ratio = 0.0;  // ||G psi||_W / ||psi||_W
};

struct KernelWitnessReport
{
  std::vector<WitnessEntry> interior;
  WitnessEntry boundary;  // bump overlapping the obstacle, reported only
  int gram_rank = 0;
  double max_ratio = 0.0;
  double threshold = 1e-6;
  bool passed = false;
};

KernelWitnessReport kernel_witness_check(const DiscreteGenerator &gen, int count = 10, std::uint64_t seed = 1,
                                         double threshold = 1e-6);

struct CoercivitySample
{
  cplx z;
  double sigma_min_complement = 0.0;
  double sigma_min_full = 0.0;
  double reference = 0.0;  // |z| (1 + 1 / |Re z|)
};

struct CoercivityReport
{
  CoercivitySample at;
  int kernel_dim = 0;
  double sigma_max = 0.0;
  std::vector<CoercivitySample> real_ray;  // z = -t
  std::vector<CoercivitySample> imag_ray;  // z = -0.1 + i t
};

struct CoercivityOptions
{
  double kernel_rel = 1e-7;
  std::vector<double> real_ray{0.01, 0.03, 0.1, 0.3, 1.0, 3.0};
  std::vector<double> imag_ray{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  int max_dim = 1500;
};

// Dense diagnostic for small generators: smallest singular value of G - z in
// the energy norm, on the whole space and on the orthogonal complement of
// the near-kernel (right singular vectors of G below kernel_rel * ||G||).
CoercivityReport coercivity_diagnostic(const DiscreteGenerator &gen, cplx z, const CoercivityOptions &opt = {});

}  // namespace adspec
