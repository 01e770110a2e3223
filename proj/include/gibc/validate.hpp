#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gibc/farfield.hpp"
#include "gibc/forward.hpp"
#include "gibc/geometry.hpp"
#include "gibc/meshing.hpp"
#include "gibc/surface_calculus.hpp"

namespace gibc
{

// A scattering problem with data that the model does not fit, so the cost and its
// gradients are nonzero.
struct FdProblem
{
  ScatterConfig cfg;
  BoundaryCurve curve;
  ImpedanceField imp;
  AnnulusMesh mesh;
  FarField data;
};

// "circle": radius 0.3; "trefoil": r = 0.3 + 0.08 cos 3 theta. Impedances
// lambda = 0.5 (1 + sin^2) i, mu = 0.5 (1 + cos^2), or the constants (0.5i, 2) when
// constant_impedance is set. Data from a circle of radius 0.33 with (i, 1.5).
FdProblem make_fd_problem(const std::string &shape, const ScatterConfig &cfg,
                          bool constant_impedance = false);

double fd_cost(const FdProblem &p, const AnnulusMesh &mesh, const ImpedanceField &imp);

// Remainders |F(x + t d) - F(x) - t F'(x) d| for each step t along smooth random directions,
// with the least squares slope of log remainder against log t.
struct FdResult
{
  std::vector<double> steps;
  std::vector<std::vector<double>> remainders;  // [direction][step]
  std::vector<double> slopes;
  std::vector<double> derivatives;
  // Shape only: |F'd - central difference at the smallest step| / |central difference|.
  std::vector<double> central_errors;
};

FdResult impedance_fd(const FdProblem &p, int directions, const std::vector<double> &steps,
                      std::uint64_t seed);
// Normal shape perturbations; the mesh moves with fixed connectivity. Tangential node motion
// changes the polygon only at O(h^2) and is covered by the weak/strong and invariance checks.
FdResult shape_fd(const FdProblem &p, int directions, const std::vector<double> &steps,
                  std::uint64_t seed);

// ||g_tau|| / ||g_nu|| of the shape gradient.
double tangential_ratio(const FdProblem &p);

// |weak - strong| for the shape derivative pairing of two plane waves on a trefoil of n nodes
// with variable impedances.
double weak_strong_difference(std::size_t n, double k);

struct CheckResult
{
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

void print_check(std::ostream &os, const CheckResult &c);

// Gradient remainder slopes, tangential structure, weak/strong consistency and reciprocity.
std::vector<CheckResult> run_validation(const ScatterConfig &cfg, int directions,
                                        const std::vector<double> &shape_steps, double fd_h,
                                        std::uint64_t seed);

}  // namespace gibc
