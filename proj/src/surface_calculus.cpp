#include "gibc/surface_calculus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/SparseCholesky>

#include "gibc/csv.hpp"

namespace gibc
{

namespace
{

using cplx = std::complex<double>;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_size(const BoundaryCurve &curve, const BoundaryField &f, const char *what)
{
  if (static_cast<std::size_t>(f.size()) != curve.size())
  {
    throw MeshMismatch(std::string(what) + ": field size does not match curve");
  }
}

}  // namespace

BoundaryField d_ds(const BoundaryCurve &curve, const BoundaryField &f)
{
  check_size(curve, f, "d_ds");
  const std::size_t n = curve.size();
  BoundaryField out(idx(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    const std::size_t ip = curve.next(i), im = curve.prev(i);
    const double hm = curve.edge_length(im), hp = curve.edge_length(i);
    const cplx dp = f[idx(ip)] - f[idx(i)];
    const cplx dm = f[idx(i)] - f[idx(im)];
    out[idx(i)] = (hm * hm * dp + hp * hp * dm) / (hm * hp * (hm + hp));
  }
  return out;
}

BoundaryField apply_L(const BoundaryCurve &curve, const ImpedanceField &imp,
                      const BoundaryField &u)
{
  check_size(curve, u, "apply_L");
  check_size(curve, imp.lambda, "apply_L");
  check_size(curve, imp.mu, "apply_L");
  const std::size_t n = curve.size();
  // Flux on edge i between nodes i and i+1.
  BoundaryField flux(idx(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    const std::size_t ip = curve.next(i);
    const cplx mu_edge = 0.5 * (imp.mu[idx(i)] + imp.mu[idx(ip)]);
    flux[idx(i)] = mu_edge * (u[idx(ip)] - u[idx(i)]) / curve.edge_length(i);
  }
  BoundaryField out(idx(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    const std::size_t im = curve.prev(i);
    const double dual = 0.5 * (curve.edge_length(im) + curve.edge_length(i));
    out[idx(i)] = (flux[idx(i)] - flux[idx(im)]) / dual + imp.lambda[idx(i)] * u[idx(i)];
  }
  return out;
}

std::complex<double> weak_L_pairing(const BoundaryCurve &curve, const ImpedanceField &imp,
                                    const BoundaryField &u, const BoundaryField &v)
{
  check_size(curve, u, "weak_L_pairing");
  check_size(curve, v, "weak_L_pairing");
  const std::size_t n = curve.size();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    const std::size_t ip = curve.next(i), im = curve.prev(i);
    const double len = curve.edge_length(i);
    const cplx mu_edge = 0.5 * (imp.mu[idx(i)] + imp.mu[idx(ip)]);
    sum -= mu_edge * ((u[idx(ip)] - u[idx(i)]) * (v[idx(ip)] - v[idx(i)])) / len;
    const double dual = 0.5 * (curve.edge_length(im) + len);
    sum += dual * imp.lambda[idx(i)] * (u[idx(i)] * v[idx(i)]);
  }
  return sum;
}

Eigen::SparseMatrix<double> boundary_stiffness(const BoundaryCurve &curve)
{
  const std::size_t n = curve.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * n);
  for (std::size_t e = 0; e < n; ++e)
  {
    const auto a = idx(e), b = idx(curve.next(e));
    const double w = 1.0 / curve.edge_length(e);
    trip.emplace_back(a, a, w);
    trip.emplace_back(b, b, w);
    trip.emplace_back(a, b, -w);
    trip.emplace_back(b, a, -w);
  }
  Eigen::SparseMatrix<double> k(idx(n), idx(n));
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

Eigen::SparseMatrix<double> boundary_mass(const BoundaryCurve &curve)
{
  const std::size_t n = curve.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * n);
  for (std::size_t e = 0; e < n; ++e)
  {
    const auto a = idx(e), b = idx(curve.next(e));
    const double len = curve.edge_length(e);
    trip.emplace_back(a, a, len / 3.0);
    trip.emplace_back(b, b, len / 3.0);
    trip.emplace_back(a, b, len / 6.0);
    trip.emplace_back(b, a, len / 6.0);
  }
  Eigen::SparseMatrix<double> m(idx(n), idx(n));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::VectorXd h1_smooth(const BoundaryCurve &curve, double eta, const Eigen::VectorXd &rhs)
{
  if (!(eta > 0.0))
  {
    throw ConfigError("h1_smooth: eta must be positive");
  }
  if (static_cast<std::size_t>(rhs.size()) != curve.size())
  {
    throw MeshMismatch("h1_smooth: load size does not match curve");
  }
  Eigen::SparseMatrix<double> a = eta * boundary_stiffness(curve) + boundary_mass(curve);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success)
  {
    throw SolveFailure("h1_smooth: factorization failed");
  }
  return solver.solve(rhs);
}

ImpedanceField project_admissible(const ImpedanceField &imp, double mu_floor)
{
  ImpedanceField out = imp;
  for (Eigen::Index i = 0; i < out.lambda.size(); ++i)
  {
    const cplx l = out.lambda[i];
    out.lambda[i] = cplx(l.real(), std::max(l.imag(), 0.0));
    const cplx m = out.mu[i];
    out.mu[i] = cplx(std::max(m.real(), mu_floor), std::min(m.imag(), 0.0));
  }
  return out;
}

bool is_admissible(const ImpedanceField &imp, double mu_floor)
{
  for (Eigen::Index i = 0; i < imp.lambda.size(); ++i)
  {
    if (imp.lambda[i].imag() < 0.0 || imp.mu[i].imag() > 0.0 || imp.mu[i].real() < mu_floor)
    {
      return false;
    }
  }
  return true;
}

void write_boundary_field_csv(std::ostream &os, const BoundaryField &f)
{
  os << "node,re,im\n";
  for (Eigen::Index i = 0; i < f.size(); ++i)
  {
    os << i << ',' << csv::format(f[i].real()) << ',' << csv::format(f[i].imag()) << '\n';
  }
}

BoundaryField read_boundary_field_csv(std::istream &is)
{
  std::string line;
  std::vector<cplx> values;
  while (std::getline(is, line))
  {
    auto t = csv::trim(line);
    if (t.empty() || t.front() == '#' || t.starts_with("node"))
    {
      continue;
    }
    auto cols = csv::split(t);
    if (cols.size() != 3)
    {
      throw ConfigError("boundary field csv: expected node,re,im");
    }
    auto node = static_cast<std::size_t>(csv::parse_double(cols[0]));
    if (node != values.size())
    {
      throw ConfigError("boundary field csv: nodes out of order");
    }
    values.emplace_back(csv::parse_double(cols[1]), csv::parse_double(cols[2]));
  }
  BoundaryField f(idx(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    f[idx(i)] = values[i];
  }
  return f;
}

void write_impedance_csv(std::ostream &os, const ImpedanceField &imp)
{
  os << "node,re_lambda,im_lambda,re_mu,im_mu\n";
  for (Eigen::Index i = 0; i < imp.lambda.size(); ++i)
  {
    os << i << ',' << csv::format(imp.lambda[i].real()) << ',' << csv::format(imp.lambda[i].imag())
       << ',' << csv::format(imp.mu[i].real()) << ',' << csv::format(imp.mu[i].imag()) << '\n';
  }
}

ImpedanceField read_impedance_csv(std::istream &is)
{
  std::string line;
  std::vector<cplx> lam, mu;
  while (std::getline(is, line))
  {
    auto t = csv::trim(line);
    if (t.empty() || t.front() == '#' || t.starts_with("node"))
    {
      continue;
    }
    auto cols = csv::split(t);
    if (cols.size() != 5)
    {
      throw ConfigError("impedance csv: expected node,re_lambda,im_lambda,re_mu,im_mu");
    }
    if (static_cast<std::size_t>(csv::parse_double(cols[0])) != lam.size())
    {
      throw ConfigError("impedance csv: nodes out of order");
    }
    lam.emplace_back(csv::parse_double(cols[1]), csv::parse_double(cols[2]));
    mu.emplace_back(csv::parse_double(cols[3]), csv::parse_double(cols[4]));
  }
  ImpedanceField imp;
  imp.lambda.resize(idx(lam.size()));
  imp.mu.resize(idx(mu.size()));
  for (std::size_t i = 0; i < lam.size(); ++i)
  {
    imp.lambda[idx(i)] = lam[i];
    imp.mu[idx(i)] = mu[i];
  }
  return imp;
}

}  // namespace gibc
