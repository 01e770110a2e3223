#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibc/farfield.hpp"
#include "gibc/forward.hpp"
#include "gibc/geometry.hpp"
#include "gibc/gradients.hpp"
#include "gibc/meshing.hpp"
#include "gibc/surface_calculus.hpp"

namespace gibc
{

struct CostValue
{
  double F = 0.0;
  double error = 0.0;
};

// F = 1/2 sum_j ||T_j - d_j||^2 and Error = (1/N) sum_j ||T_j - d_j|| / ||d_j||.
CostValue cost(const FarField &computed, const FarField &data);

// Forward solves for every incident direction of the data, with residuals kept for the
// adjoint problems.
struct Evaluation
{
  CostValue cost;
  FarField computed;
  std::vector<ScatterSolution> states;
  std::vector<Eigen::VectorXcd> residuals;
};

Evaluation evaluate(const ScatterSolver &solver, const FarField &data);

struct Gradients
{
  ShapeGradient shape;
  ImpedanceGradient impedance;
};

Gradients compute_gradients(const ScatterSolver &solver, const Evaluation &eval);

enum class Schedule
{
  ShapeOnly,
  ImpedanceOnly,
  Alternating
};

struct InversionConfig
{
  Schedule schedule = Schedule::Alternating;
  bool constant_impedance = false;  // optimize one scalar per active component
  double rho_up = 1.5;
  double rho_down = 2.0;
  double rho_eta = 1.2;
  double alpha_min_factor = 1e-6;
  int max_iterations = 300;
  // Zero selects the automatic choices: a first shape step of shape_step_fraction times the
  // effective radius, a first impedance step of impedance_step_fraction times the impedance
  // scale, and smoothing weights whose half-attenuation mode is n = 8.
  double alpha_shape = 0.0;
  double alpha_impedance = 0.0;
  double eta_shape = 0.0;
  double eta_impedance = 0.0;
  // Accepted steps never lower a smoothing weight below this; zero selects h^2, which damps
  // node-scale oscillations of the boundary.
  double eta_floor = 0.0;
  double shape_step_fraction = 0.05;
  double impedance_step_fraction = 0.1;
  // Resample the curve (impedances carried over by position) when adjacent edges differ more.
  double max_edge_ratio = 2.5;
  double mu_floor = default_mu_floor;
  bool write_gradients = false;
};

struct DescentState
{
  BoundaryCurve curve;
  ImpedanceField imp;
  AnnulusMesh mesh;
  double alpha_shape = 0.0;
  double alpha_impedance = 0.0;
  double eta_tau = 0.0;
  double eta_nu = 0.0;
  double eta_impedance = 0.0;
  CostValue cost;
  int iteration = 0;
};

struct HistoryEntry
{
  int iteration = 0;
  char sweep = 's';  // 's' shape, 'i' impedance
  CostValue cost;    // of the trial
  double alpha = 0.0;
  double eta_tau = 0.0;
  double eta_nu = 0.0;
  bool accepted = false;
};

struct InversionHistory
{
  std::vector<HistoryEntry> entries;
  DescentState final_state;
  CostValue initial_cost;
  int accepted = 0;
  std::string stop_reason;
};

// H1-smoothed descent perturbation for the shape: eta K e + M e = -alpha g.
Perturbation shape_step(const BoundaryCurve &curve, const ShapeGradient &g, double alpha,
                        double eta_tau, double eta_nu);

// Smoothed impedance increment on the active components followed by the admissibility
// projection. In constant mode each active component moves by the mean of its gradient.
ImpedanceField impedance_step(const BoundaryCurve &curve, const ImpedanceField &imp,
                              const ImpedanceGradient &g, double alpha, double eta,
                              bool constant, double mu_floor = default_mu_floor);

// Step rule: accepted -> alpha * rho_up, etas / rho_eta; rejected -> alpha / rho_down,
// etas * rho_eta.
void update_step(double &alpha, double &eta_a, double &eta_b, bool accepted,
                 const InversionConfig &cfg);

// Directory receiving per-iteration curve, impedance and gradient snapshots.
struct RunOutput
{
  std::filesystem::path directory;
};

InversionHistory run_inversion(const ScatterConfig &scfg, const InversionConfig &icfg,
                               const FarField &data, const BoundaryCurve &initial_curve,
                               const ImpedanceField &initial_imp,
                               const std::optional<RunOutput> &out = std::nullopt);

// Columns iter, F, Error, alpha, eta_tau, eta_nu, accepted, sweep.
void write_history_csv(std::ostream &os, const InversionHistory &h);

}  // namespace gibc
