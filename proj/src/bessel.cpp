#include "gibc/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gibc/errors.hpp"

namespace gibc
{

namespace
{

constexpr double euler_gamma = 0.57721566490153286061;

// J_0..J_m by Miller's algorithm, m >= 2.
std::vector<double> miller_j(int m, double x)
{
  const int big = std::max(m, static_cast<int>(x)) + 32 +
                  static_cast<int>(std::sqrt(40.0 * std::max(m, static_cast<int>(x) + 1)));
  const int start = big + (big % 2);
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start) + 1] = 0.0;
  j[static_cast<std::size_t>(start)] = 1e-300;
  for (int k = start; k >= 1; --k)
  {
    const auto ku = static_cast<std::size_t>(k);
    j[ku - 1] = (2.0 * k / x) * j[ku] - j[ku + 1];
    if (std::abs(j[ku - 1]) > 1e250)
    {
      for (std::size_t q = ku - 1; q <= static_cast<std::size_t>(start); ++q)
      {
        j[q] *= 1e-250;
      }
    }
  }
  // Normalization J_0 + 2 sum J_2k = 1.
  double sum = j[0];
  for (int k = 2; k <= start; k += 2)
  {
    sum += 2.0 * j[static_cast<std::size_t>(k)];
  }
  j.resize(static_cast<std::size_t>(m) + 1);
  for (auto &v : j)
  {
    v /= sum;
  }
  return j;
}

}  // namespace

BesselTable bessel_table(int nmax, double x)
{
  if (!(x > 0.0) || nmax < 0)
  {
    throw std::invalid_argument("bessel_table: need x > 0 and nmax >= 0");
  }
  const int big = std::max(nmax, static_cast<int>(x) + 2) + 2;
  // The Neumann series needs J up to orders well beyond x to converge.
  std::vector<double> jj = miller_j(big + 40 + static_cast<int>(x), x);
  constexpr double pi = std::numbers::pi;
  const double lg = std::log(0.5 * x) + euler_gamma;
  double s0 = 0.0, s1 = 0.0;
  const int kmax = static_cast<int>(jj.size() - 2) / 2;
  for (int k = 1; k <= kmax; ++k)
  {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const auto k2 = static_cast<std::size_t>(2 * k);
    s0 += sign * jj[k2] / k;
    s1 += sign * (jj[k2 - 1] - jj[k2 + 1]) / k;
  }
  BesselTable t;
  t.j.assign(jj.begin(), jj.begin() + nmax + 1);
  t.y.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  const double y0 = (2.0 / pi) * (lg * jj[0] - 2.0 * s0);
  const double y1 = -(2.0 / pi) * jj[0] / x + (2.0 / pi) * lg * jj[1] + (2.0 / pi) * s1;
  t.y[0] = y0;
  if (nmax >= 1)
  {
    t.y[1] = y1;
  }
  for (int n = 1; n < nmax; ++n)
  {
    const auto nu = static_cast<std::size_t>(n);
    t.y[nu + 1] = (2.0 * n / x) * t.y[nu] - t.y[nu - 1];
  }
  return t;
}

double BesselTable::jn(int n) const
{
  const int m = std::abs(n);
  const double v = j.at(static_cast<std::size_t>(m));
  return (n < 0 && m % 2 == 1) ? -v : v;
}

double BesselTable::yn(int n) const
{
  const int m = std::abs(n);
  const double v = y.at(static_cast<std::size_t>(m));
  return (n < 0 && m % 2 == 1) ? -v : v;
}

double BesselTable::jn_prime(int n, double x) const
{
  if (n == 0)
  {
    return -jn(1);
  }
  return jn(n - 1) - (n / x) * jn(n);
}

double BesselTable::yn_prime(int n, double x) const
{
  if (n == 0)
  {
    return -yn(1);
  }
  return yn(n - 1) - (n / x) * yn(n);
}

double bessel_j(int n, double x)
{
  return bessel_table(std::abs(n) + 1, x).jn(n);
}

double bessel_y(int n, double x)
{
  return bessel_table(std::abs(n) + 1, x).yn(n);
}

std::complex<double> hankel1(int n, double x)
{
  return bessel_table(std::abs(n) + 1, x).hn(n);
}

std::complex<double> hankel1_prime(int n, double x)
{
  return bessel_table(std::abs(n) + 1, x).hn_prime(n, x);
}

std::vector<std::complex<double>> hankel1_log_derivative(int nmax, double x)
{
  const BesselTable t = bessel_table(1, x);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(nmax) + 1);
  const std::complex<double> h0 = t.hn(0), h1 = t.hn(1);
  out[0] = -h1 / h0;
  // rho_n = H_n / H_{n-1}; H'_n / H_n = 1/rho_n - n/x.
  std::complex<double> rho = h1 / h0;
  for (int n = 1; n <= nmax; ++n)
  {
    out[static_cast<std::size_t>(n)] = 1.0 / rho - static_cast<double>(n) / x;
    rho = 2.0 * n / x - 1.0 / rho;
  }
  return out;
}

}  // namespace gibc
