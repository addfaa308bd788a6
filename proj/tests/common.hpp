// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include "adspec/discrete.hpp"

namespace testing_support
{

using adspec::cplx;

// Small deterministic generators for property tests.
struct Gen
{
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  double normal() { return std::normal_distribution<double>()(rng); }
  cplx in_box(double re0, double re1, double im0, double im1) { return {uniform(re0, re1), uniform(im0, im1)}; }
  adspec::Vec unit(int n)
  {
    adspec::Vec v(n);
    for (int i = 0; i < n; i++) v[i] = normal();
    return v / v.norm();
  }
  adspec::VecC cvec(int n)
  {
    adspec::VecC v(n);
    for (int i = 0; i < n; i++) v[i] = cplx(normal(), normal());
    return v;
  }
  adspec::Mat orthogonal(int n)
  {
    adspec::Mat A(n, n);
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) A(i, j) = normal();
    Eigen::HouseholderQR<adspec::Mat> qr(A);
    return qr.householderQ() * adspec::Mat::Identity(n, n);
  }
};

// Unit sphere, constant eps, one harmonic degree.
inline adspec::DiscreteGenerator sphere(int nodes, int L_max = 1, double eps = 1.0, bool all_m = true)
{
  adspec::Problem p;
  p.epsilon = {eps, {}};
  adspec::Resolution r;
  r.N_r = nodes;
  r.L_max = L_max;
  r.all_m = all_m;
  return adspec::assemble(p, r);
}

}  // namespace testing_support
