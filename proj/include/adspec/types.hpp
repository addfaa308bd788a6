// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace adspec
{

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cplx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I1{0.0, 1.0};

// Execution policy for the data-parallel kernels. Serial is the reference
// path kept for testing; both must produce bitwise identical results.
enum class Exec
{
  Serial,
  Parallel
};

void set_num_threads(int n);
int max_threads();

// FNV-1a, used to fingerprint assembled operators.
inline std::uint64_t fnv1a(const void *data, std::size_t len, std::uint64_t h = 1469598103934665603ull)
{
  auto *p = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < len; i++)
  {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace adspec
