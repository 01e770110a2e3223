#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "doctest.h"
#include "gibc/bessel.hpp"

using namespace gibc;

TEST_CASE("published table values at x = 1")
{
  // Abramowitz and Stegun, Table 9.1.
  CHECK(std::abs(bessel_j(0, 1.0) - 0.7651976865579666) < 1e-15);
  CHECK(std::abs(bessel_j(1, 1.0) - 0.4400505857449335) < 1e-15);
  CHECK(std::abs(bessel_y(0, 1.0) - 0.08825696421567696) < 1e-15);
  CHECK(std::abs(bessel_y(1, 1.0) - (-0.7812128213002887)) < 1e-15);
}

TEST_CASE("agreement with Boost.Math over orders and arguments")
{
  for (double x : {0.1, 0.5, 1.8, 6.0, 17.3, 60.0, 200.0})
  {
    const int nmax = static_cast<int>(x) + 30;
    BesselTable t = bessel_table(nmax, x);
    for (int n = 0; n <= nmax; ++n)
    {
      const double jb = boost::math::cyl_bessel_j(n, x);
      const double jscale = std::max(std::abs(jb), 1e-300);
      // Relative accuracy, or absolute near the oscillatory zeros.
      CHECK(std::abs(t.jn(n) - jb) <= 1e-12 * std::max(jscale, n < x ? 1.0 / std::sqrt(x) : 0.0));
      if (std::abs(boost::math::cyl_neumann(n, x)) < 1e250)
      {
        const double yb = boost::math::cyl_neumann(n, x);
        CHECK(std::abs(t.yn(n) - yb) <= 1e-11 * std::max(std::abs(yb), n < x ? 1.0 / std::sqrt(x) : 0.0));
      }
    }
    CHECK(std::abs(t.jn_prime(2, x) - boost::math::cyl_bessel_j_prime(2, x)) < 1e-12);
    CHECK(std::abs(t.yn_prime(2, x) - boost::math::cyl_neumann_prime(2, x)) <
          1e-11 * std::max(1.0, std::abs(boost::math::cyl_neumann_prime(2, x))));
  }
}

TEST_CASE("negative orders")
{
  BesselTable t = bessel_table(5, 2.3);
  for (int n = 1; n <= 5; ++n)
  {
    const double s = (n % 2 == 0) ? 1.0 : -1.0;
    CHECK(t.jn(-n) == s * t.jn(n));
    CHECK(t.yn(-n) == s * t.yn(n));
  }
}

TEST_CASE("Wronskian")
{
  for (double x : {0.3, 4.0, 25.0})
  {
    BesselTable t = bessel_table(20, x);
    for (int n = 0; n < 20; ++n)
    {
      const double w = t.jn(n + 1) * t.yn(n) - t.jn(n) * t.yn(n + 1);
      CHECK(std::abs(w - 2.0 / (std::numbers::pi * x)) < 1e-12 * std::max(1.0, std::abs(t.yn(n + 1))));
    }
  }
}

TEST_CASE("logarithmic derivative of the Hankel function")
{
  for (double x : {0.1, 1.0, 6.0, 200.0})
  {
    auto ld = hankel1_log_derivative(200, x);
    for (int n = 0; n <= 200; ++n)
    {
      CHECK(std::isfinite(ld[static_cast<std::size_t>(n)].real()));
      CHECK(std::isfinite(ld[static_cast<std::size_t>(n)].imag()));
    }
    for (int n = 0; n <= std::min(40, static_cast<int>(x) + 20); ++n)
    {
      std::complex<double> h(boost::math::cyl_bessel_j(n, x), boost::math::cyl_neumann(n, x));
      std::complex<double> hp(boost::math::cyl_bessel_j_prime(n, x),
                              boost::math::cyl_neumann_prime(n, x));
      if (!std::isfinite(std::abs(h)) || !std::isfinite(std::abs(hp)))
      {
        continue;
      }
      CHECK(std::abs(ld[static_cast<std::size_t>(n)] - hp / h) < 1e-10 * std::abs(hp / h));
    }
  }
}
