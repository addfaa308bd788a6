// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "adspec/errors.hpp"
#include "adspec/special.hpp"
#include "common.hpp"
#include "oracles/bessel_oracle.hpp"

using namespace adspec;
using testing_support::Gen;

TEST(Hankel, ValueAtImaginaryUnit)
{
  const auto [h, dh] = hankel_elem(0, I1);
  EXPECT_NEAR(std::abs(h - cplx(-std::exp(-1.0), 0.0)), 0.0, 1e-15);
  (void)dh;
}

TEST(Hankel, OrderOneClosedForm)
{
  Gen g(1);
  for (int t = 0; t < 50; t++)
  {
    const cplx x = g.in_box(0.1, 5.0, -3.0, 3.0);
    const cplx expect = -std::exp(I1 * x) * (x + I1) / (x * x);
    EXPECT_LT(std::abs(hankel_elem(1, x).first - expect), 1e-13 * std::abs(expect));
  }
}

TEST(Hankel, ZeroArgumentIsRejected) { EXPECT_THROW(hankel_elem(1, 0.0), DomainError); }

// x^2 h'' + 2 x h' + (x^2 - l(l+1)) h = 0, with h'' by a central difference
// of the returned derivative.
TEST(HankelProperty, SatisfiesBesselEquation)
{
  Gen g(2);
  for (int t = 0; t < 100; t++)
  {
    const int l = g.integer(0, 6);
    const cplx x = g.in_box(0.5, 6.0, -2.0, 2.0);
    const double step = 1e-5;
    const auto [h, dh] = hankel_elem(l, x);
    const cplx d2 = (hankel_elem(l, x + step).second - hankel_elem(l, x - step).second) / (2 * step);
    const cplx res = x * x * d2 + 2.0 * x * dh + (x * x - double(l * (l + 1))) * h;
    const double scale = std::abs(x * x * d2) + std::abs(2.0 * x * dh) + std::abs((x * x) * h) + l * (l + 1) * std::abs(h);
    EXPECT_LT(std::abs(res), 1e-7 * scale) << "l=" << l << " x=" << x;
  }
}

TEST(HankelProperty, MatchesRecurrenceOracle)
{
  Gen g(3);
  for (int t = 0; t < 200; t++)
  {
    const int l = g.integer(0, 8);
    const cplx x = g.in_box(0.5, 8.0, -4.0, 4.0);
    const auto [h, dh] = hankel_elem(l, x);
    EXPECT_LT(std::abs(h - oracle::hankel_recurrence(l, x)), 1e-11 * std::abs(h));
    EXPECT_LT(std::abs(dh - oracle::hankel_recurrence_deriv(l, x)), 1e-11 * std::abs(dh));
  }
}

TEST(Legendre, LowOrders)
{
  for (double x : {-0.9, -0.3, 0.0, 0.4, 1.0})
  {
    EXPECT_NEAR(legendre(0, x).first, 1.0, 1e-15);
    EXPECT_NEAR(legendre(2, x).first, 0.5 * (3 * x * x - 1), 1e-15);
    EXPECT_NEAR(legendre(3, x).second, 0.5 * (15 * x * x - 3), 1e-13);
  }
}

TEST(GaussLegendre, ExactForPolynomials)
{
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  ASSERT_EQ(x.size(), 6u);
  for (int k = 0; k < 12; k++)
  {
    double s = 0;
    for (int i = 0; i < 6; i++) s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14);
  }
}
