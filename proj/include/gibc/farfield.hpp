#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace gibc
{

// Far field patterns for a set of incident fields, sampled at M observation angles
// 2 pi m / M, m = 0..M-1.
struct FarField
{
  double k = 0.0;
  double radius = 0.0;
  std::vector<double> incident_angles;   // one per incident field
  std::vector<Eigen::VectorXcd> samples;  // one vector of M samples per incident field

  std::size_t num_incident() const { return samples.size(); }
  std::size_t num_obs() const { return samples.empty() ? 0 : static_cast<std::size_t>(samples[0].size()); }
  double obs_angle(std::size_t m) const;
};

// gamma = e^{i pi/4} / sqrt(8 pi k), the far field of the fundamental solution at the origin.
std::complex<double> farfield_gamma(double k);

// Trapezoid L2(S^1) norm.
double l2_norm(const Eigen::VectorXcd &samples);
double relative_l2_error(const Eigen::VectorXcd &value, const Eigen::VectorXcd &reference);
// Over all incident fields jointly.
double relative_l2_error(const FarField &value, const FarField &reference);

// c_n = (1/M) sum_m u_m e^{-i n theta_m} for n = -M/2 .. M/2-1 (index n + M/2).
Eigen::VectorXcd fourier_coefficients(const Eigen::VectorXcd &samples);
Eigen::VectorXcd samples_from_fourier(const Eigen::VectorXcd &coefficients);

void write_farfield_csv(std::ostream &os, const FarField &ff);
FarField read_farfield_csv(std::istream &is);

}  // namespace gibc
