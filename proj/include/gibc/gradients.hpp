#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gibc/forward.hpp"
#include "gibc/geometry.hpp"
#include "gibc/surface_calculus.hpp"

namespace gibc
{

// Load vectors in the boundary hat basis for the four real impedance components, in the
// user parameterization (the dimensionless scaling is chain-ruled out).
struct ImpedanceGradient
{
  Eigen::VectorXd re_lambda;
  Eigen::VectorXd im_lambda;
  Eigen::VectorXd re_mu;
  Eigen::VectorXd im_mu;
};

// Load vectors g_nu, g_tau with F'(eps) = sum_i g_nu[i] eps_nu[i] + g_tau[i] eps_tau[i].
struct ShapeGradient
{
  Eigen::VectorXd normal;
  Eigen::VectorXd tangential;
};

// G^i(y) = gamma sum_m (2 pi / M) conj(r_m) exp(-i k y . xhat_m) for residual samples r_m.
IncidentField adjoint_incident(const Eigen::VectorXcd &residual, double k);

// Sum over incident fields j of the pairings with states u_j and adjoints G_j.
ImpedanceGradient impedance_gradient(const ScatterSolver &solver,
                                     std::span<const ScatterSolution> states,
                                     std::span<const ScatterSolution> adjoints);
ShapeGradient shape_gradient(const ScatterSolver &solver, std::span<const ScatterSolution> states,
                             std::span<const ScatterSolution> adjoints);

// Shape gradient from edge traces; imp holds the impedances entering the boundary condition.
ShapeGradient shape_gradient(const BoundaryCurve &curve, const ImpedanceField &imp, double k,
                             std::span<const EdgeTrace> states,
                             std::span<const EdgeTrace> adjoints);

// Strong form of the shape operator B_eps u at the curve nodes by finite differences.
BoundaryField apply_B_eps(const BoundaryCurve &curve, const CurveFields &fields,
                          const ImpedanceField &imp, double k, const BoundaryField &u,
                          const Eigen::VectorXd &eps_tau, const Eigen::VectorXd &eps_nu);

double directional_derivative(const ShapeGradient &g, const Perturbation &eps);
double directional_derivative(const ImpedanceGradient &g, const BoundaryField &d_lambda,
                              const BoundaryField &d_mu);

// Columns node, g_nu, g_tau, re_lambda, im_lambda, re_mu, im_mu.
void write_gradient_csv(std::ostream &os, const ShapeGradient &shape,
                        const ImpedanceGradient &imp);

}  // namespace gibc
