#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gibc/bessel.hpp"
#include "gibc/gradients.hpp"
#include "gibc/inversion.hpp"
#include "gibc/oracle.hpp"
#include "gibc/validate.hpp"

using namespace gibc;

namespace
{

constexpr double pi = std::numbers::pi;
const std::vector<double> angles = {0.0, 2.0, 4.0};

struct CircleCase
{
  ScatterConfig cfg;
  BoundaryCurve curve;
  ScatterSolver solver;
  FarField data;
};

CircleCase circle_case(double h, cplx lam, cplx mu)
{
  ScatterConfig cfg;
  cfg.h = h;
  const BoundaryCurve c = make_circle(0.3, static_cast<std::size_t>(std::ceil(2.0 * pi * 0.3 / h)));
  ScatterSolver s(cfg, triangulate(c, cfg.radius, h), ImpedanceField::constant(c.size(), lam, mu));
  return {cfg, c, std::move(s), circle_series(0.33, {0.0, 1.0}, 1.5, cfg.k, true, angles, 64)};
}

double oracle_cost(double a, cplx lam, cplx mu, const FarField &data)
{
  return cost(circle_series(a, lam, mu, 6.0, true, angles, 64), data).F;
}

}  // namespace

TEST_CASE("adjoint incident field")
{
  const double k = 6.0;
  const std::size_t m = 64;
  SUBCASE("zero residual gives a zero field")
  {
    const IncidentField g = adjoint_incident(Eigen::VectorXcd::Zero(m), k);
    CHECK(g.value(k, {0.1, 0.2}) == cplx(0.0));
  }
  SUBCASE("constant residual at the origin")
  {
    const IncidentField g = adjoint_incident(Eigen::VectorXcd::Constant(m, 0.7), k);
    const cplx ref = farfield_gamma(k) * 2.0 * pi * 0.7;
    CHECK(std::abs(g.value(k, {0.0, 0.0}) - ref) < 1e-13);
  }
  SUBCASE("single Fourier mode gives a single Bessel mode")
  {
    const int n = 3;
    Eigen::VectorXcd r(m);
    for (std::size_t j = 0; j < m; ++j)
    {
      r[static_cast<Eigen::Index>(j)] = std::polar(1.0, n * 2.0 * pi * static_cast<double>(j) / m);
    }
    const IncidentField g = adjoint_incident(r, k);
    const cplx mi(0.0, -1.0);
    for (double rho : {0.1, 0.3, 0.5})
    {
      for (double phi : {0.0, 1.0, 2.5})
      {
        const cplx ref = farfield_gamma(k) * 2.0 * pi * std::pow(mi, n) * bessel_j(n, k * rho) *
                         std::polar(1.0, -n * phi);
        const cplx v = g.value(k, {rho * std::cos(phi), rho * std::sin(phi)});
        CHECK(std::abs(v - ref) < 1e-12);
      }
    }
  }
}

TEST_CASE("zero directions give zero derivatives")
{
  const CircleCase c = circle_case(0.04, {0.0, 0.5}, 2.0);
  const Gradients g = compute_gradients(c.solver, evaluate(c.solver, c.data));
  const std::size_t n = c.curve.size();
  const BoundaryField z = BoundaryField::Zero(static_cast<Eigen::Index>(n));
  CHECK(directional_derivative(g.impedance, z, z) == 0.0);
  CHECK(directional_derivative(g.shape, Perturbation::zero(n)) == 0.0);
}

TEST_CASE("constant impedances have no tangential shape gradient")
{
  const CircleCase c = circle_case(0.04, {0.0, 0.5}, 2.0);
  const Gradients g = compute_gradients(c.solver, evaluate(c.solver, c.data));
  CHECK(g.shape.normal.norm() > 0.0);
  CHECK(g.shape.tangential.norm() <= 1e-3 * g.shape.normal.norm());
}

TEST_CASE("gradients converge to derivatives of the series cost")
{
  const cplx lam(0.0, 0.5), mu(2.0, 0.0);
  const FarField data = circle_case(0.04, lam, mu).data;
  const double t = 1e-4;
  const double d_re_mu =
      (oracle_cost(0.3, lam, mu + t, data) - oracle_cost(0.3, lam, mu - t, data)) / (2.0 * t);
  const double d_im_lam = (oracle_cost(0.3, lam + cplx(0.0, t), mu, data) -
                           oracle_cost(0.3, lam - cplx(0.0, t), mu, data)) /
                          (2.0 * t);
  const double d_a =
      (oracle_cost(0.3 + t, lam, mu, data) - oracle_cost(0.3 - t, lam, mu, data)) / (2.0 * t);
  double err[2][3];
  for (int r = 0; r < 2; ++r)
  {
    const CircleCase c = circle_case(0.04 / (r + 1), lam, mu);
    const Gradients g = compute_gradients(c.solver, evaluate(c.solver, c.data));
    err[r][0] = std::abs(g.impedance.re_mu.sum() - d_re_mu) / std::abs(d_re_mu);
    err[r][1] = std::abs(g.impedance.im_lambda.sum() - d_im_lam) / std::abs(d_im_lam);
    err[r][2] = std::abs(g.shape.normal.sum() - d_a) / std::abs(d_a);
  }
  // Uniform normal motion is the radius derivative; all three errors are discretization errors.
  CHECK(err[1][0] < 2.5e-2);
  CHECK(err[1][1] < 1e-3);
  CHECK(err[1][2] < 2e-3);
  for (int i = 0; i < 3; ++i)
  {
    CHECK(std::log2(err[0][i] / err[1][i]) > 1.6);
  }
}

TEST_CASE("impedance finite difference remainders are quadratic")
{
  ScatterConfig cfg;
  for (const char *shape : {"circle", "trefoil"})
  {
    const FdProblem p = make_fd_problem(shape, cfg);
    const FdResult r = impedance_fd(p, 2, {1e-2, 1e-3, 1e-4}, 11);
    for (double s : r.slopes)
    {
      CHECK(s == doctest::Approx(2.0).epsilon(0.1));
    }
  }
}

TEST_CASE("shape directional derivative agrees with finite differences")
{
  ScatterConfig cfg;
  const std::vector<double> steps = {8e-3, 4e-3, 2e-3, 1e-3};
  const FdResult circle = shape_fd(make_fd_problem("circle", cfg), 2, steps, 12);
  for (double s : circle.slopes)
  {
    CHECK(s == doctest::Approx(2.0).epsilon(0.1));
  }
  const FdResult trefoil = shape_fd(make_fd_problem("trefoil", cfg), 2, steps, 12);
  for (double e : trefoil.central_errors)
  {
    CHECK(e < 5e-2);
  }
}

TEST_CASE("strong shape operator")
{
  const std::size_t n = 256;
  const BoundaryCurve c = make_polar([](double t) { return 0.3 + 0.08 * std::cos(3.0 * t); }, n);
  const CurveFields f = curve_fields(c);
  const auto theta = polar_angles(c);
  const double k = 6.0;
  ImpedanceField imp = ImpedanceField::constant(n, 0.0, 0.0);
  BoundaryField u(static_cast<Eigen::Index>(n));
  Eigen::VectorXd et(static_cast<Eigen::Index>(n)), en(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto ii = static_cast<Eigen::Index>(i);
    imp.lambda[ii] = {1.0 + 0.2 * std::cos(theta[i]), 2.0};
    u[ii] = plane_wave(0.7).value(k, c[i]);
    et[ii] = std::sin(2.0 * theta[i]);
    en[ii] = 0.4 + std::cos(theta[i]);
  }
  SUBCASE("zero perturbation")
  {
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    CHECK(apply_B_eps(c, f, imp, k, u, z, z).norm() == 0.0);
  }
  SUBCASE("without mu only the impedance-case terms remain")
  {
    Eigen::VectorXd kappa(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
    {
      kappa[static_cast<Eigen::Index>(i)] = f.curvature[i];
    }
    const BoundaryField enc = en.cast<cplx>(), etc = et.cast<cplx>();
    const BoundaryField us = d_ds(c, u);
    BoundaryField ref = enc.cwiseProduct(
        (k * k - kappa.cast<cplx>().cwiseProduct(imp.lambda).array()).matrix()).cwiseProduct(u);
    ref += d_ds(c, enc.cwiseProduct(us));
    ref += enc.cwiseProduct(imp.lambda).cwiseProduct(imp.lambda).cwiseProduct(u);
    ref += d_ds(c, imp.lambda).cwiseProduct(etc).cwiseProduct(u);
    const BoundaryField b = apply_B_eps(c, f, imp, k, u, et, en);
    CHECK((b - ref).norm() < 1e-10 * ref.norm());
  }
  SUBCASE("weak and strong forms agree to second order")
  {
    const double d1 = weak_strong_difference(128, k), d2 = weak_strong_difference(256, k);
    const double d3 = weak_strong_difference(512, k);
    CHECK(std::log2(d1 / d2) > 1.8);
    CHECK(std::log2(d2 / d3) > 1.8);
  }
}
