// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "adspec/types.hpp"

namespace adspec
{

// Sparse multivariate polynomial with integer exponents and real
// coefficients. Coefficients below drop_tol are pruned after products.
class Poly
{
public:
  using Exponent = std::vector<int>;

  static constexpr double drop_tol = 1e-12;

  explicit Poly(int nvars = 0) : nvars_(nvars) {}
  static Poly constant(int nvars, double c);
  static Poly variable(int nvars, int j, double c = 1.0);
  static Poly monomial(const Exponent &e, double c);

  int nvars() const { return nvars_; }
  const std::map<Exponent, double> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  double max_abs_coeff() const;
  double coeff(const Exponent &e) const;

  // Drop coefficients with |c| <= tol.
  void prune(double tol = drop_tol);
  void add_term(const Exponent &e, double c);

  double eval(const Vec &x) const;

  Poly &operator+=(const Poly &o);
  Poly &operator-=(const Poly &o);
  Poly &operator*=(double s);
  friend Poly operator+(Poly a, const Poly &b) { return a += b; }
  friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(double s, Poly a) { return a *= s; }
  // Product, pruned with drop_tol.
  friend Poly operator*(const Poly &a, const Poly &b);

private:
  int nvars_;
  std::map<Exponent, double> terms_;
};

// All exponent vectors of total degree exactly `degree` in `nvars` variables,
// in lexicographic order.
std::vector<Poly::Exponent> homogeneous_exponents(int nvars, int degree);

class PolyMatrix
{
public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols, int nvars);
  static PolyMatrix identity(int n, int nvars);
  // Linear matrix polynomial sum_j A_j x_j.
  static PolyMatrix linear(const std::vector<Mat> &A);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }
  Poly &operator()(int i, int j) { return e_[i * cols_ + j]; }
  const Poly &operator()(int i, int j) const { return e_[i * cols_ + j]; }

  int total_degree() const;
  double max_abs_coeff() const;
  Mat eval(const Vec &x) const;

  PolyMatrix &operator+=(const PolyMatrix &o);
  PolyMatrix &scale(const Poly &p);
  friend PolyMatrix operator*(const PolyMatrix &a, const PolyMatrix &b);

private:
  int rows_ = 0, cols_ = 0, nvars_ = 0;
  std::vector<Poly> e_;
};

}  // namespace adspec
