#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gibc/farfield.hpp"
#include "gibc/geometry.hpp"
#include "gibc/meshing.hpp"
#include "gibc/surface_calculus.hpp"

namespace gibc
{

using cplx = std::complex<double>;

struct ScatterConfig
{
  double k = 6.0;
  double radius = 1.0;
  double h = 0.04;
  int fe_order = 2;
  int n_dtn = 0;  // 0 selects ceil(kR) + 16
  bool dimensionless = true;
  std::uint64_t mesh_seed = 0;
  unsigned threads = 1;

  int dtn_modes() const;
  // Throws ConfigError when an invariant fails.
  void validate() const;
};

struct PlaneWave
{
  double angle = 0.0;  // direction d = (cos, sin)
};

struct PointSource
{
  Vec2 z;
};

// Sum over m of weights[m] exp(i k directions[m] . x).
struct Herglotz
{
  std::vector<Vec2> directions;
  std::vector<cplx> weights;
};

struct IncidentField
{
  std::variant<PlaneWave, PointSource, Herglotz> kind;

  cplx value(double k, const Vec2 &x) const;
  // Value and gradient together.
  cplx value(double k, const Vec2 &x, cplx &dx, cplx &dy) const;
};

IncidentField plane_wave(double angle);
IncidentField point_source(const Vec2 &z);

// A field and its tangential derivative at the EdgeRule points of the obstacle polygon,
// index e * EdgeRule::size + q for edge e (node e to node e+1).
struct EdgeTrace
{
  std::vector<cplx> value;
  std::vector<cplx> ds;
};

// Total field data on the obstacle boundary.
struct ScatterSolution
{
  IncidentField incident;
  Eigen::VectorXcd scattered;  // finite element coefficients of the scattered field
  BoundaryField trace;         // total field at the curve nodes
  BoundaryField trace_ds;      // mean of the one-sided edge derivatives at the curve nodes
  EdgeTrace edge;
  double residual = 0.0;  // relative algebraic residual
};

// k H'_n(kR) / H_n(kR).
cplx dtn_symbol(int n, double k, double radius);

//
// Finite element solver for the scattered field in the annulus between the obstacle and
// the artificial circle, with the generalized impedance condition on the obstacle and the
// truncated Dirichlet-to-Neumann map on the circle. The system matrix does not depend on
// the incident field and is factorized once.
//
class ScatterSolver
{
public:
  ScatterSolver(const ScatterConfig &cfg, const AnnulusMesh &mesh, const ImpedanceField &imp);
  ~ScatterSolver();
  ScatterSolver(ScatterSolver &&) noexcept;
  ScatterSolver &operator=(ScatterSolver &&) noexcept;

  ScatterSolution solve(const IncidentField &inc) const;
  std::vector<ScatterSolution> solve(std::span<const IncidentField> inc) const;

  // Far field samples at M equally spaced observation angles.
  Eigen::VectorXcd far_field(const ScatterSolution &sol, std::size_t m) const;
  FarField far_field(std::span<const ScatterSolution> sols, std::size_t m) const;
  cplx far_field_at(const ScatterSolution &sol, double angle) const;

  // Scattered field at a point of the computational annulus. Throws MeshMismatch outside.
  cplx scattered_at(const ScatterSolution &sol, const Vec2 &x) const;

  const ScatterConfig &config() const;
  const AnnulusMesh &mesh() const;
  const BoundaryCurve &curve() const;
  // Impedances entering the boundary condition (scaled by k when dimensionless).
  const ImpedanceField &effective_impedance() const;
  std::size_t num_dofs() const;
  const Eigen::SparseMatrix<cplx> &matrix() const;

private:
  Eigen::VectorXcd far_field_samples(const ScatterSolution &sol,
                                     std::span<const double> angles) const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Impedances as they enter the boundary condition: (k lambda, mu / k) when dimensionless.
ImpedanceField effective_impedance(const ScatterConfig &cfg, const ImpedanceField &imp);

// |w_inf(-xhat, z) - gamma u^s(z, xhat)| / |gamma u^s(z, xhat)| with w the field scattered
// from a point source at z and u^s the field scattered from the plane wave along xhat.
double mixed_reciprocity_residual(const ScatterSolver &solver, double xhat_angle, const Vec2 &z);

}  // namespace gibc
