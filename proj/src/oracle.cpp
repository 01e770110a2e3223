#include "gibc/oracle.hpp"

#include <cmath>
#include <numbers>

#include "gibc/bessel.hpp"
#include "gibc/errors.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

}  // namespace

ModeCoefficients circle_modes(double radius, cplx lambda, cplx mu, double k, int nmax)
{
  if (nmax <= 0)
  {
    nmax = static_cast<int>(std::ceil(k * radius)) + 24;
  }
  ModeCoefficients out{radius, k, nmax, std::vector<cplx>(static_cast<std::size_t>(2 * nmax + 1))};
  const double x = k * radius;
  const BesselTable tab = bessel_table(nmax + 1, x);
  for (int n = -nmax; n <= nmax; ++n)
  {
    const cplx z = lambda - mu * static_cast<double>(n * n) / (radius * radius);
    const cplx num = k * tab.jn_prime(n, x) + z * tab.jn(n);
    const cplx den = k * tab.hn_prime(n, x) + z * tab.hn(n);
    if (std::abs(den) < 1e-12)
    {
      throw ModeResonance("circle_modes: vanishing denominator at mode " + std::to_string(n));
    }
    out.a[static_cast<std::size_t>(n + nmax)] = -num / den;
  }
  return out;
}

Eigen::VectorXcd circle_farfield(const ModeCoefficients &modes, double incident_angle,
                                 std::size_t m)
{
  const cplx c = std::sqrt(2.0 / (pi * modes.k)) * std::polar(1.0, -pi / 4.0);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j)
  {
    const double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
    cplx sum = 0.0;
    for (int n = -modes.nmax; n <= modes.nmax; ++n)
    {
      sum += modes(n) * std::polar(1.0, static_cast<double>(n) * (theta - incident_angle));
    }
    out[static_cast<Eigen::Index>(j)] = c * sum;
  }
  return out;
}

cplx circle_scattered(const ModeCoefficients &modes, double incident_angle, const Vec2 &x)
{
  const double r = norm(x);
  if (r < modes.radius)
  {
    throw ConfigError("circle_scattered: point inside the obstacle");
  }
  const double theta = std::atan2(x.y, x.x);
  const BesselTable tab = bessel_table(modes.nmax, modes.k * r);
  cplx sum = 0.0;
  for (int n = -modes.nmax; n <= modes.nmax; ++n)
  {
    // i^n for integer n.
    const cplx in = std::polar(1.0, pi / 2.0 * static_cast<double>(n));
    sum += in * modes(n) * tab.hn(n) *
           std::polar(1.0, static_cast<double>(n) * (theta - incident_angle));
  }
  return sum;
}

FarField circle_series(double radius, cplx lambda, cplx mu, double k, bool dimensionless,
                       std::span<const double> incident_angles, std::size_t m)
{
  if (dimensionless)
  {
    lambda *= k;
    mu /= k;
  }
  const ModeCoefficients modes = circle_modes(radius, lambda, mu, k);
  FarField ff;
  ff.k = k;
  ff.incident_angles.assign(incident_angles.begin(), incident_angles.end());
  for (double ang : incident_angles)
  {
    ff.samples.push_back(circle_farfield(modes, ang, m));
  }
  return ff;
}

double oracle_farfield_compare(const FarField &fem, const FarField &oracle)
{
  return relative_l2_error(fem, oracle);
}

}  // namespace gibc
