#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gibc/bessel.hpp"
#include "gibc/errors.hpp"
#include "gibc/oracle.hpp"

using namespace gibc;
using cplx = std::complex<double>;

TEST_CASE("Neumann circle")
{
  const double a = 0.3, k = 6.0;
  const ModeCoefficients m = circle_modes(a, 0.0, 0.0, k);
  for (int n = -5; n <= 5; ++n)
  {
    const cplx expect = -cplx(-bessel_j(n + 1, k * a) + n / (k * a) * bessel_j(n, k * a)) /
                        (-hankel1(n + 1, k * a) + n / (k * a) * hankel1(n, k * a));
    CHECK(std::abs(m(n) - expect) < 1e-12);
  }
}

TEST_CASE("large mu behaves like Dirichlet per mode")
{
  const double a = 0.3, k = 6.0;
  const ModeCoefficients m = circle_modes(a, 0.5, 1e6, k, 10);
  for (int n = 1; n <= 6; ++n)
  {
    const cplx dir = -bessel_j(n, k * a) / hankel1(n, k * a);
    CHECK(std::abs(m(n) - dir) < 1e-4);
    CHECK(std::abs(m(-n) - dir) < 1e-4);
  }
}

TEST_CASE("lossless impedances give unitary modes and the optical theorem")
{
  const ModeCoefficients m = circle_modes(0.3, 0.5 * 6.0, 2.0 / 6.0, 6.0);
  cplx sum = 0.0;
  double sq = 0.0;
  for (int n = -m.nmax; n <= m.nmax; ++n)
  {
    CHECK(std::abs(std::abs(1.0 + 2.0 * m(n)) - 1.0) < 1e-9);
    CHECK(std::abs(m(n)) <= 1.0 + 1e-9);
    sum += m(n);
    sq += std::norm(m(n));
  }
  CHECK(std::abs(sq + sum.real()) < 1e-12);
  CHECK(std::abs(m(m.nmax)) < 1e-14);

  // Far-field form: ||u_inf||^2 = -sqrt(8 pi / k) Re(e^{i pi/4} u_inf(d)).
  const Eigen::VectorXcd ff = circle_farfield(m, 0.0, 128);
  const double lhs = l2_norm(ff) * l2_norm(ff);
  const double rhs = -std::sqrt(8.0 * std::numbers::pi / 6.0) *
                     std::real(std::polar(1.0, std::numbers::pi / 4.0) * ff[0]);
  CHECK(std::abs(lhs - rhs) < 1e-12 * lhs);
}

TEST_CASE("absorbing impedances lose energy")
{
  const ModeCoefficients m = circle_modes(0.3, cplx(0.0, 3.0), 2.0 / 6.0, 6.0);
  for (int n = -m.nmax; n <= m.nmax; ++n)
  {
    CHECK(std::abs(1.0 + 2.0 * m(n)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("rotating the incident direction permutes the samples")
{
  const ModeCoefficients m = circle_modes(0.3, cplx(0.0, 3.0), 1.0 / 3.0, 6.0);
  const std::size_t M = 48;
  const Eigen::VectorXcd a = circle_farfield(m, 0.0, M);
  const Eigen::VectorXcd b = circle_farfield(m, 2.0 * std::numbers::pi * 5.0 / 48.0, M);
  for (std::size_t j = 0; j < M; ++j)
  {
    CHECK(std::abs(b[static_cast<Eigen::Index>((j + 5) % M)] - a[static_cast<Eigen::Index>(j)]) <
          1e-12);
  }
}

TEST_CASE("near field tends to the far field")
{
  const ModeCoefficients m = circle_modes(0.3, cplx(0.0, 3.0), 1.0 / 3.0, 6.0);
  const Eigen::VectorXcd ff = circle_farfield(m, 0.0, 8);
  const double r = 400.0, th = 2.0 * std::numbers::pi / 8.0;
  const cplx us = circle_scattered(m, 0.0, {r * std::cos(th), r * std::sin(th)});
  const cplx approx = std::polar(1.0, 6.0 * r) / std::sqrt(r) * ff[1];
  CHECK(std::abs(us - approx) / std::abs(approx) < 1e-3);
}

TEST_CASE("resonant denominator is reported")
{
  const double k = 6.0, a = 0.3;
  const cplx lam = -k * hankel1_prime(0, k * a) / hankel1(0, k * a);
  CHECK_THROWS_AS(circle_modes(a, lam, 0.0, k), ModeResonance);
}

TEST_CASE("compare")
{
  const double ang[] = {0.0, 1.0};
  const FarField f = circle_series(0.3, cplx(0.0, 0.5), 2.0, 6.0, true, ang, 32);
  CHECK(oracle_farfield_compare(f, f) == 0.0);
  FarField g = f;
  for (auto &s : g.samples)
  {
    s *= 1.0 + 1e-3;
  }
  CHECK(std::abs(oracle_farfield_compare(g, f) - 1e-3) < 1e-12);
}
