#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gibc/farfield.hpp"
#include "gibc/geometry.hpp"

namespace gibc
{

// Scattering coefficients a_n, n = -nmax..nmax, of a centered circle of radius a with
// constant impedances in the boundary condition d_r u + mu u_ss + lambda u = 0.
struct ModeCoefficients
{
  double radius = 0.0;
  double k = 0.0;
  int nmax = 0;
  std::vector<std::complex<double>> a;

  std::complex<double> operator()(int n) const { return a[static_cast<std::size_t>(n + nmax)]; }
};

// Default cutoff ceil(ka) + 24. Throws ModeResonance when a denominator falls below 1e-12.
ModeCoefficients circle_modes(double radius, std::complex<double> lambda,
                              std::complex<double> mu, double k, int nmax = 0);

// Far field for the plane wave along incident_angle at M observation angles.
Eigen::VectorXcd circle_farfield(const ModeCoefficients &modes, double incident_angle,
                                 std::size_t m);

// Scattered field at a point outside the circle.
std::complex<double> circle_scattered(const ModeCoefficients &modes, double incident_angle,
                                      const Vec2 &x);

// Far fields for several incident angles. lambda, mu are user values: with
// dimensionless set they enter the boundary condition as k lambda and mu / k.
FarField circle_series(double radius, std::complex<double> lambda, std::complex<double> mu,
                       double k, bool dimensionless, std::span<const double> incident_angles,
                       std::size_t m);

double oracle_farfield_compare(const FarField &fem, const FarField &oracle);

}  // namespace gibc
