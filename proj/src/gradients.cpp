#include "gibc/gradients.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/SparseCholesky>

#include "gibc/csv.hpp"
#include "gibc/errors.hpp"
#include "gibc/quadrature.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;

void check_pairs(std::size_t a, std::size_t b)
{
  if (a != b)
  {
    throw MeshMismatch("state and adjoint counts differ");
  }
}

std::vector<EdgeTrace> edge_traces(std::span<const ScatterSolution> sols)
{
  std::vector<EdgeTrace> out;
  out.reserve(sols.size());
  for (const auto &s : sols)
  {
    out.push_back(s.edge);
  }
  return out;
}

cplx lerp(const BoundaryField &f, std::size_t e, std::size_t e1, double t)
{
  return (1.0 - t) * f[static_cast<Eigen::Index>(e)] + t * f[static_cast<Eigen::Index>(e1)];
}

// P1 L2 projection of the weak surface operator: M x = f with
// f_i = integral of -mu u' phi_i' + lambda u phi_i.
BoundaryField project_L(const BoundaryCurve &curve, const ImpedanceField &imp,
                        const EdgeTrace &u,
                        const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> &mass)
{
  const std::size_t n = curve.size();
  BoundaryField f = BoundaryField::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < n; ++e)
  {
    const std::size_t e1 = curve.next(e);
    const double len = curve.edge_length(e);
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
      const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * len;
      const std::size_t idx = e * EdgeRule::size + static_cast<std::size_t>(q);
      const cplx lam = lerp(imp.lambda, e, e1, t), mu = lerp(imp.mu, e, e1, t);
      const cplx a = -mu * u.ds[idx] / len;  // times d(phi)/dt = -1, +1
      const cplx b = lam * u.value[idx];
      f[static_cast<Eigen::Index>(e)] += w * (-a + b * (1.0 - t));
      f[static_cast<Eigen::Index>(e1)] += w * (a + b * t);
    }
  }
  const Eigen::VectorXd re = mass.solve(f.real().eval());
  const Eigen::VectorXd im = mass.solve(f.imag().eval());
  return re.cast<cplx>() + cplx(0.0, 1.0) * im.cast<cplx>();
}

}  // namespace

IncidentField adjoint_incident(const Eigen::VectorXcd &residual, double k)
{
  Herglotz hg;
  const auto m = static_cast<std::size_t>(residual.size());
  const cplx scale = farfield_gamma(k) * (2.0 * pi / static_cast<double>(m));
  for (std::size_t j = 0; j < m; ++j)
  {
    const cplx r = residual[static_cast<Eigen::Index>(j)];
    if (r == cplx(0.0))
    {
      continue;
    }
    const double th = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
    hg.directions.push_back({-std::cos(th), -std::sin(th)});
    hg.weights.push_back(scale * std::conj(r));
  }
  return {hg};
}

ImpedanceGradient impedance_gradient(const ScatterSolver &solver,
                                     std::span<const ScatterSolution> states,
                                     std::span<const ScatterSolution> adjoints)
{
  check_pairs(states.size(), adjoints.size());
  const BoundaryCurve &curve = solver.curve();
  const std::size_t n = curve.size();
  const auto nn = static_cast<Eigen::Index>(n);
  BoundaryField lam_load = BoundaryField::Zero(nn), mu_load = BoundaryField::Zero(nn);
  for (std::size_t j = 0; j < states.size(); ++j)
  {
    const EdgeTrace &u = states[j].edge;
    const EdgeTrace &g = adjoints[j].edge;
    for (std::size_t e = 0; e < n; ++e)
    {
      const std::size_t e1 = curve.next(e);
      const double len = curve.edge_length(e);
      for (int q = 0; q < EdgeRule::size; ++q)
      {
        const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
        const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * len;
        const std::size_t idx = e * EdgeRule::size + static_cast<std::size_t>(q);
        const cplx ug = w * u.value[idx] * g.value[idx];
        const cplx dug = -w * u.ds[idx] * g.ds[idx];
        lam_load[static_cast<Eigen::Index>(e)] += (1.0 - t) * ug;
        lam_load[static_cast<Eigen::Index>(e1)] += t * ug;
        mu_load[static_cast<Eigen::Index>(e)] += (1.0 - t) * dug;
        mu_load[static_cast<Eigen::Index>(e1)] += t * dug;
      }
    }
  }
  // dF = Re sum_i (d lambda_i Lambda_i + d mu_i M_i); an imaginary increment i s gives
  // -s Im. The boundary condition sees k lambda and mu / k in dimensionless mode.
  const ScatterConfig &cfg = solver.config();
  const double sl = cfg.dimensionless ? cfg.k : 1.0;
  const double sm = cfg.dimensionless ? 1.0 / cfg.k : 1.0;
  ImpedanceGradient out;
  out.re_lambda = sl * lam_load.real();
  out.im_lambda = -sl * lam_load.imag();
  out.re_mu = sm * mu_load.real();
  out.im_mu = -sm * mu_load.imag();
  return out;
}

ShapeGradient shape_gradient(const ScatterSolver &solver, std::span<const ScatterSolution> states,
                             std::span<const ScatterSolution> adjoints)
{
  check_pairs(states.size(), adjoints.size());
  const auto u = edge_traces(states);
  const auto g = edge_traces(adjoints);
  return shape_gradient(solver.curve(), solver.effective_impedance(), solver.config().k, u, g);
}

ShapeGradient shape_gradient(const BoundaryCurve &curve, const ImpedanceField &imp, double k,
                             std::span<const EdgeTrace> states,
                             std::span<const EdgeTrace> adjoints)
{
  check_pairs(states.size(), adjoints.size());
  const std::size_t n = curve.size();
  const auto nn = static_cast<Eigen::Index>(n);
  const CurveFields fields = curve_fields(curve);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass(boundary_mass(curve));
  if (mass.info() != Eigen::Success)
  {
    throw SolveFailure("boundary mass factorization failed");
  }
  const double k2 = k * k;
  Eigen::VectorXd gn = Eigen::VectorXd::Zero(nn), gt = Eigen::VectorXd::Zero(nn);
  for (std::size_t j = 0; j < states.size(); ++j)
  {
    const EdgeTrace &u = states[j];
    const EdgeTrace &g = adjoints[j];
    const BoundaryField lu = project_L(curve, imp, u, mass);
    const BoundaryField lg = project_L(curve, imp, g, mass);
    for (std::size_t e = 0; e < n; ++e)
    {
      const std::size_t e1 = curve.next(e);
      const double len = curve.edge_length(e);
      const cplx dlam = (imp.lambda[static_cast<Eigen::Index>(e1)] -
                         imp.lambda[static_cast<Eigen::Index>(e)]) /
                        len;
      const cplx dmu =
          (imp.mu[static_cast<Eigen::Index>(e1)] - imp.mu[static_cast<Eigen::Index>(e)]) / len;
      for (int q = 0; q < EdgeRule::size; ++q)
      {
        const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
        const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * len;
        const std::size_t idx = e * EdgeRule::size + static_cast<std::size_t>(q);
        const cplx lam = lerp(imp.lambda, e, e1, t), mu = lerp(imp.mu, e, e1, t);
        const double kappa = (1.0 - t) * fields.curvature[e] + t * fields.curvature[e1];
        const cplx ug = u.value[idx] * g.value[idx];
        const cplx dudg = u.ds[idx] * g.ds[idx];
        const cplx lul = lerp(lu, e, e1, t) * lerp(lg, e, e1, t);
        const double dn = -w * std::real((k2 - kappa * lam) * ug - (1.0 + mu * kappa) * dudg + lul);
        const double dt = -w * std::real(dlam * ug - dmu * dudg);
        gn[static_cast<Eigen::Index>(e)] += (1.0 - t) * dn;
        gn[static_cast<Eigen::Index>(e1)] += t * dn;
        gt[static_cast<Eigen::Index>(e)] += (1.0 - t) * dt;
        gt[static_cast<Eigen::Index>(e1)] += t * dt;
      }
    }
  }
  return {gn, gt};
}

BoundaryField apply_B_eps(const BoundaryCurve &curve, const CurveFields &fields,
                          const ImpedanceField &imp, double k, const BoundaryField &u,
                          const Eigen::VectorXd &eps_tau, const Eigen::VectorXd &eps_nu)
{
  const auto n = static_cast<Eigen::Index>(curve.size());
  Eigen::VectorXd kappa(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    kappa[i] = fields.curvature[static_cast<std::size_t>(i)];
  }
  const BoundaryField en = eps_nu.cast<cplx>(), et = eps_tau.cast<cplx>();
  const BoundaryField us = d_ds(curve, u);
  const BoundaryField lu = apply_L(curve, imp, u);
  const BoundaryField kap = kappa.cast<cplx>();

  // eps_nu (k^2 - kappa lambda) u + d_s((1 + mu kappa) eps_nu u_s) + L(eps_nu L u)
  //   + (d_s lambda) eps_tau u + d_s((d_s mu) eps_tau u_s)
  BoundaryField out = en.cwiseProduct((k * k - kap.cwiseProduct(imp.lambda).array()).matrix())
                          .cwiseProduct(u);
  const BoundaryField flux =
      ((1.0 + imp.mu.cwiseProduct(kap).array()).matrix()).cwiseProduct(en).cwiseProduct(us);
  out += d_ds(curve, flux);
  out += apply_L(curve, imp, en.cwiseProduct(lu));
  out += d_ds(curve, imp.lambda).cwiseProduct(et).cwiseProduct(u);
  out += d_ds(curve, d_ds(curve, imp.mu).cwiseProduct(et).cwiseProduct(us));
  return out;
}

double directional_derivative(const ShapeGradient &g, const Perturbation &eps)
{
  return g.normal.dot(eps.normal) + g.tangential.dot(eps.tangential);
}

double directional_derivative(const ImpedanceGradient &g, const BoundaryField &d_lambda,
                              const BoundaryField &d_mu)
{
  return g.re_lambda.dot(d_lambda.real()) + g.im_lambda.dot(d_lambda.imag()) +
         g.re_mu.dot(d_mu.real()) + g.im_mu.dot(d_mu.imag());
}

void write_gradient_csv(std::ostream &os, const ShapeGradient &shape,
                        const ImpedanceGradient &imp)
{
  os << "node,g_nu,g_tau,re_lambda,im_lambda,re_mu,im_mu\n";
  for (Eigen::Index i = 0; i < shape.normal.size(); ++i)
  {
    os << i << ',' << csv::format(shape.normal[i]) << ',' << csv::format(shape.tangential[i])
       << ',' << csv::format(imp.re_lambda[i]) << ',' << csv::format(imp.im_lambda[i]) << ','
       << csv::format(imp.re_mu[i]) << ',' << csv::format(imp.im_mu[i]) << '\n';
  }
}

}  // namespace gibc
