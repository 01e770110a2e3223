#pragma once

#include <complex>
#include <vector>

namespace gibc
{

// J_n(x) and Y_n(x) for n = 0..nmax at a single argument x > 0.
struct BesselTable
{
  std::vector<double> j;
  std::vector<double> y;

  double jn(int n) const;  // any sign of n
  double yn(int n) const;
  std::complex<double> hn(int n) const { return {jn(n), yn(n)}; }
  // Derivatives with respect to the argument.
  double jn_prime(int n, double x) const;
  double yn_prime(int n, double x) const;
  std::complex<double> hn_prime(int n, double x) const { return {jn_prime(n, x), yn_prime(n, x)}; }
};

// Miller backward recurrence for J, Neumann series for Y_0 and Y_1, forward recurrence for
// higher Y orders.
BesselTable bessel_table(int nmax, double x);

double bessel_j(int n, double x);
double bessel_y(int n, double x);
std::complex<double> hankel1(int n, double x);
std::complex<double> hankel1_prime(int n, double x);

// H'_n(x)/H_n(x) for n = 0..nmax through the ratio recurrence, free of overflow for large
// orders.
std::vector<std::complex<double>> hankel1_log_derivative(int nmax, double x);

}  // namespace gibc
