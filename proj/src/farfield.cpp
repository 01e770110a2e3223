#include "gibc/farfield.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "gibc/csv.hpp"
#include "gibc/errors.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

}  // namespace

double FarField::obs_angle(std::size_t m) const
{
  return 2.0 * pi * static_cast<double>(m) / static_cast<double>(num_obs());
}

std::complex<double> farfield_gamma(double k)
{
  return std::polar(1.0, pi / 4.0) / std::sqrt(8.0 * pi * k);
}

double l2_norm(const Eigen::VectorXcd &samples)
{
  return std::sqrt(2.0 * pi / static_cast<double>(samples.size()) * samples.squaredNorm());
}

double relative_l2_error(const Eigen::VectorXcd &value, const Eigen::VectorXcd &reference)
{
  if (value.size() != reference.size())
  {
    throw MeshMismatch("relative_l2_error: sample counts differ");
  }
  return (value - reference).norm() / reference.norm();
}

double relative_l2_error(const FarField &value, const FarField &reference)
{
  if (value.num_incident() != reference.num_incident())
  {
    throw MeshMismatch("relative_l2_error: incident counts differ");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < value.num_incident(); ++j)
  {
    if (value.samples[j].size() != reference.samples[j].size())
    {
      throw MeshMismatch("relative_l2_error: sample counts differ");
    }
    num += (value.samples[j] - reference.samples[j]).squaredNorm();
    den += reference.samples[j].squaredNorm();
  }
  return std::sqrt(num / den);
}

Eigen::VectorXcd fourier_coefficients(const Eigen::VectorXcd &samples)
{
  const auto m = samples.size();
  Eigen::VectorXcd c(m);
  for (Eigen::Index q = 0; q < m; ++q)
  {
    const Eigen::Index n = q - m / 2;
    cplx sum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
    {
      const double ang = -2.0 * pi * static_cast<double>((n * j) % m) / static_cast<double>(m);
      sum += samples[j] * std::polar(1.0, ang);
    }
    c[q] = sum / static_cast<double>(m);
  }
  return c;
}

Eigen::VectorXcd samples_from_fourier(const Eigen::VectorXcd &coefficients)
{
  const auto m = coefficients.size();
  Eigen::VectorXcd u(m);
  for (Eigen::Index j = 0; j < m; ++j)
  {
    cplx sum = 0.0;
    for (Eigen::Index q = 0; q < m; ++q)
    {
      const Eigen::Index n = q - m / 2;
      const double ang = 2.0 * pi * static_cast<double>((n * j) % m) / static_cast<double>(m);
      sum += coefficients[q] * std::polar(1.0, ang);
    }
    u[j] = sum;
  }
  return u;
}

void write_farfield_csv(std::ostream &os, const FarField &ff)
{
  os << "# farfield v1\n";
  os << "# k=" << csv::format(ff.k) << " R=" << csv::format(ff.radius) << " M=" << ff.num_obs()
     << " N=" << ff.num_incident() << '\n';
  os << "# incident_angles=";
  for (std::size_t j = 0; j < ff.incident_angles.size(); ++j)
  {
    os << (j ? ";" : "") << csv::format(ff.incident_angles[j]);
  }
  os << '\n';
  os << "incident_index,obs_angle,re,im\n";
  for (std::size_t j = 0; j < ff.num_incident(); ++j)
  {
    for (std::size_t m = 0; m < ff.num_obs(); ++m)
    {
      const cplx v = ff.samples[j][static_cast<Eigen::Index>(m)];
      os << j << ',' << csv::format(ff.obs_angle(m)) << ',' << csv::format(v.real()) << ','
         << csv::format(v.imag()) << '\n';
    }
  }
}

FarField read_farfield_csv(std::istream &is)
{
  FarField ff;
  std::string line;
  bool header = false;
  std::size_t m_expected = 0, n_expected = 0;
  std::vector<std::vector<cplx>> rows;
  while (std::getline(is, line))
  {
    auto t = csv::trim(line);
    if (t.empty())
    {
      continue;
    }
    if (t.front() == '#')
    {
      if (t.find("farfield v1") != std::string_view::npos)
      {
        header = true;
        continue;
      }
      std::istringstream ss{std::string(t.substr(1))};
      std::string tok;
      while (ss >> tok)
      {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
        {
          continue;
        }
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "k")
        {
          ff.k = csv::parse_double(val);
        }
        else if (key == "R")
        {
          ff.radius = csv::parse_double(val);
        }
        else if (key == "M")
        {
          m_expected = static_cast<std::size_t>(csv::parse_double(val));
        }
        else if (key == "N")
        {
          n_expected = static_cast<std::size_t>(csv::parse_double(val));
        }
        else if (key == "incident_angles" && !val.empty())
        {
          for (auto part : csv::split(val, ';'))
          {
            ff.incident_angles.push_back(csv::parse_double(part));
          }
        }
      }
      continue;
    }
    if (t.starts_with("incident_index"))
    {
      continue;
    }
    auto cols = csv::split(t);
    if (cols.size() != 4)
    {
      throw ConfigError("farfield csv: expected incident_index,obs_angle,re,im");
    }
    const auto j = static_cast<std::size_t>(csv::parse_double(cols[0]));
    if (j >= rows.size())
    {
      rows.resize(j + 1);
    }
    rows[j].emplace_back(csv::parse_double(cols[2]), csv::parse_double(cols[3]));
  }
  if (!header)
  {
    throw ConfigError("farfield csv: missing '# farfield v1' header");
  }
  if (rows.size() != n_expected)
  {
    throw ConfigError("farfield csv: incident count does not match header");
  }
  for (const auto &r : rows)
  {
    if (r.size() != m_expected)
    {
      throw ConfigError("farfield csv: sample count does not match header");
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(r.size()));
    for (std::size_t m = 0; m < r.size(); ++m)
    {
      v[static_cast<Eigen::Index>(m)] = r[m];
    }
    ff.samples.push_back(std::move(v));
  }
  return ff;
}

}  // namespace gibc
