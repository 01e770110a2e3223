#pragma once

#include <complex>
#include <iosfwd>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gibc/geometry.hpp"

namespace gibc
{

// Complex value per curve node, periodic in the node index.
using BoundaryField = Eigen::VectorXcd;

struct ActiveSet
{
  bool re_lambda = false;
  bool im_lambda = false;
  bool re_mu = false;
  bool im_mu = false;

  bool any() const { return re_lambda || im_lambda || re_mu || im_mu; }
};

struct ImpedanceField
{
  BoundaryField lambda;
  BoundaryField mu;
  ActiveSet active;

  static ImpedanceField constant(std::size_t n, std::complex<double> lambda,
                                 std::complex<double> mu)
  {
    const auto m = static_cast<Eigen::Index>(n);
    return {BoundaryField::Constant(m, lambda), BoundaryField::Constant(m, mu), {}};
  }
  std::size_t size() const { return static_cast<std::size_t>(lambda.size()); }
};

// Lower bound c in Re mu >= c.
inline constexpr double default_mu_floor = 1e-3;

// Tangential derivative by second order central differences on the (possibly
// non-uniform) arclength grid.
BoundaryField d_ds(const BoundaryCurve &curve, const BoundaryField &f);

// Conservative flux form of d/ds(mu d/ds u) + lambda u with mu averaged onto edges.
BoundaryField apply_L(const BoundaryCurve &curve, const ImpedanceField &imp,
                      const BoundaryField &u);

// Sum over edges of -mu (du/ds)(dv/ds) plus the nodal lambda u v term, no conjugation.
// Equals the dual-length weighted sum of apply_L(u) v exactly.
std::complex<double> weak_L_pairing(const BoundaryCurve &curve, const ImpedanceField &imp,
                                    const BoundaryField &u, const BoundaryField &v);

// Piecewise linear periodic stiffness and consistent mass matrices on the curve.
Eigen::SparseMatrix<double> boundary_stiffness(const BoundaryCurve &curve);
Eigen::SparseMatrix<double> boundary_mass(const BoundaryCurve &curve);

// Solves eta K e + M e = rhs for the hat-function load vector rhs.
Eigen::VectorXd h1_smooth(const BoundaryCurve &curve, double eta, const Eigen::VectorXd &rhs);

// Nodewise clipping onto Im lambda >= 0, Im mu <= 0, Re mu >= mu_floor.
ImpedanceField project_admissible(const ImpedanceField &imp, double mu_floor = default_mu_floor);
bool is_admissible(const ImpedanceField &imp, double mu_floor = default_mu_floor);

void write_boundary_field_csv(std::ostream &os, const BoundaryField &f);
BoundaryField read_boundary_field_csv(std::istream &is);

// Columns node, re_lambda, im_lambda, re_mu, im_mu. The active set is not stored.
void write_impedance_csv(std::ostream &os, const ImpedanceField &imp);
ImpedanceField read_impedance_csv(std::istream &is);

}  // namespace gibc
