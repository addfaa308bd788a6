// SPDX-License-Identifier: Apache-2.0
#include "adspec/polynomial.hpp"

#include <cmath>

#include "adspec/errors.hpp"

namespace adspec
{

Poly Poly::constant(int nvars, double c)
{
  Poly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Poly Poly::variable(int nvars, int j, double c)
{
  Exponent e(nvars, 0);
  e[j] = 1;
  Poly p(nvars);
  p.add_term(e, c);
  return p;
}

Poly Poly::monomial(const Exponent &e, double c)
{
  Poly p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

int Poly::total_degree() const
{
  int d = 0;
  for (const auto &[e, c] : terms_)
  {
    int s = 0;
    for (int k : e)
    {
      s += k;
    }
    d = std::max(d, s);
  }
  return d;
}

double Poly::max_abs_coeff() const
{
  double m = 0.0;
  for (const auto &[e, c] : terms_)
  {
    m = std::max(m, std::abs(c));
  }
  return m;
}

double Poly::coeff(const Exponent &e) const
{
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Poly::prune(double tol)
{
  for (auto it = terms_.begin(); it != terms_.end();)
  {
    it = std::abs(it->second) <= tol ? terms_.erase(it) : std::next(it);
  }
}

void Poly::add_term(const Exponent &e, double c)
{
  if (static_cast<int>(e.size()) != nvars_)
  {
    throw DimensionMismatch("exponent length does not match the number of variables");
  }
  if (c == 0.0)
  {
    return;
  }
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted)
  {
    it->second += c;
    if (it->second == 0.0)
    {
      terms_.erase(it);
    }
  }
}

double Poly::eval(const Vec &x) const
{
  if (x.size() != nvars_)
  {
    throw DimensionMismatch("evaluation point has wrong dimension");
  }
  double s = 0.0;
  for (const auto &[e, c] : terms_)
  {
    double m = c;
    for (int k = 0; k < nvars_; k++)
    {
      for (int p = 0; p < e[k]; p++)
      {
        m *= x[k];
      }
    }
    s += m;
  }
  return s;
}

Poly &Poly::operator+=(const Poly &o)
{
  if (nvars_ != o.nvars_)
  {
    throw DimensionMismatch("polynomials in different numbers of variables");
  }
  for (const auto &[e, c] : o.terms_)
  {
    add_term(e, c);
  }
  return *this;
}

Poly &Poly::operator-=(const Poly &o)
{
  if (nvars_ != o.nvars_)
  {
    throw DimensionMismatch("polynomials in different numbers of variables");
  }
  for (const auto &[e, c] : o.terms_)
  {
    add_term(e, -c);
  }
  return *this;
}

Poly &Poly::operator*=(double s)
{
  if (s == 0.0)
  {
    terms_.clear();
    return *this;
  }
  for (auto &[e, c] : terms_)
  {
    c *= s;
  }
  return *this;
}

Poly operator*(const Poly &a, const Poly &b)
{
  if (a.nvars_ != b.nvars_)
  {
    throw DimensionMismatch("polynomials in different numbers of variables");
  }
  Poly r(a.nvars_);
  Poly::Exponent e(a.nvars_);
  for (const auto &[ea, ca] : a.terms_)
  {
    for (const auto &[eb, cb] : b.terms_)
    {
      for (int k = 0; k < a.nvars_; k++)
      {
        e[k] = ea[k] + eb[k];
      }
      r.add_term(e, ca * cb);
    }
  }
  r.prune();
  return r;
}

std::vector<Poly::Exponent> homogeneous_exponents(int nvars, int degree)
{
  std::vector<Poly::Exponent> out;
  Poly::Exponent e(nvars, 0);
  // Recursive fill of the first nvars-1 slots; the last takes the remainder.
  auto rec = [&](auto &&self, int k, int left) -> void {
    if (k == nvars - 1)
    {
      e[k] = left;
      out.push_back(e);
      return;
    }
    for (int p = left; p >= 0; p--)
    {
      e[k] = p;
      self(self, k + 1, left - p);
    }
  };
  if (nvars > 0)
  {
    rec(rec, 0, degree);
  }
  return out;
}

PolyMatrix::PolyMatrix(int rows, int cols, int nvars)
  : rows_(rows), cols_(cols), nvars_(nvars), e_(static_cast<std::size_t>(rows * cols), Poly(nvars))
{
}

PolyMatrix PolyMatrix::identity(int n, int nvars)
{
  PolyMatrix I(n, n, nvars);
  for (int i = 0; i < n; i++)
  {
    I(i, i) = Poly::constant(nvars, 1.0);
  }
  return I;
}

PolyMatrix PolyMatrix::linear(const std::vector<Mat> &A)
{
  const int n = static_cast<int>(A.size());
  if (n == 0)
  {
    throw DimensionMismatch("empty coefficient list");
  }
  PolyMatrix M(static_cast<int>(A[0].rows()), static_cast<int>(A[0].cols()), n);
  for (int j = 0; j < n; j++)
  {
    for (int r = 0; r < M.rows_; r++)
    {
      for (int c = 0; c < M.cols_; c++)
      {
        if (A[j](r, c) != 0.0)
        {
          M(r, c) += Poly::variable(n, j, A[j](r, c));
        }
      }
    }
  }
  return M;
}

int PolyMatrix::total_degree() const
{
  int d = 0;
  for (const auto &p : e_)
  {
    d = std::max(d, p.total_degree());
  }
  return d;
}

double PolyMatrix::max_abs_coeff() const
{
  double m = 0.0;
  for (const auto &p : e_)
  {
    m = std::max(m, p.max_abs_coeff());
  }
  return m;
}

Mat PolyMatrix::eval(const Vec &x) const
{
  Mat M(rows_, cols_);
  for (int i = 0; i < rows_; i++)
  {
    for (int j = 0; j < cols_; j++)
    {
      M(i, j) = (*this)(i, j).eval(x);
    }
  }
  return M;
}

PolyMatrix &PolyMatrix::operator+=(const PolyMatrix &o)
{
  if (rows_ != o.rows_ || cols_ != o.cols_)
  {
    throw DimensionMismatch("polynomial matrix shapes differ");
  }
  for (std::size_t k = 0; k < e_.size(); k++)
  {
    e_[k] += o.e_[k];
  }
  return *this;
}

PolyMatrix &PolyMatrix::scale(const Poly &p)
{
  for (auto &q : e_)
  {
    q = q * p;
  }
  return *this;
}

PolyMatrix operator*(const PolyMatrix &a, const PolyMatrix &b)
{
  if (a.cols_ != b.rows_)
  {
    throw DimensionMismatch("polynomial matrix product shapes differ");
  }
  PolyMatrix r(a.rows_, b.cols_, a.nvars_);
  for (int i = 0; i < a.rows_; i++)
  {
    for (int j = 0; j < b.cols_; j++)
    {
      Poly s(a.nvars_);
      for (int k = 0; k < a.cols_; k++)
      {
        if (!a(i, k).is_zero() && !b(k, j).is_zero())
        {
          s += a(i, k) * b(k, j);
        }
      }
      s.prune();
      r(i, j) = std::move(s);
    }
  }
  return r;
}

}  // namespace adspec
