#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gibc/bessel.hpp"
#include "gibc/forward.hpp"
#include "gibc/oracle.hpp"

using namespace gibc;

namespace
{

constexpr double pi = std::numbers::pi;

BoundaryCurve circle_for(double a, double h)
{
  return make_circle(a, static_cast<std::size_t>(std::ceil(2.0 * pi * a / h)));
}

BoundaryCurve trefoil(double h)
{
  auto r = [](double t) { return 0.3 + 0.08 * std::cos(3.0 * t); };
  return make_polar(r, static_cast<std::size_t>(std::ceil(2.3 / h)));
}

ScatterSolver make_solver(const BoundaryCurve &c, double h, cplx lam, cplx mu,
                          ScatterConfig cfg = {})
{
  cfg.h = h;
  return ScatterSolver(cfg, triangulate(c, cfg.radius, h),
                       ImpedanceField::constant(c.size(), lam, mu));
}

}  // namespace

TEST_CASE("dtn symbol")
{
  for (double kr : {1.0, 5.0, 20.0})
  {
    for (int n = -64; n <= 64; ++n)
    {
      const cplx s = dtn_symbol(n, kr, 1.0);
      CHECK(std::isfinite(s.real()));
      CHECK(s.imag() > 0.0);
      CHECK(s == dtn_symbol(-n, kr, 1.0));
    }
  }
  for (int n = 0; n <= 10; ++n)
  {
    const double x = 3.0;
    const cplx ref = 2.0 * hankel1_prime(n, x) / hankel1(n, x);
    CHECK(std::abs(dtn_symbol(n, 2.0, 1.5) - ref) < 1e-12 * std::abs(ref));
  }
  // Radiation limit: k H'_0(kR)/H_0(kR) = ik - 1/(2R) + O(1/(kR^2)).
  const cplx s = dtn_symbol(0, 200.0, 1.0);
  CHECK(std::abs(s - cplx(-0.5, 200.0)) < 1e-2);
  for (double kr : {0.1, 200.0})
  {
    for (int n : {0, 50, 200})
    {
      const cplx v = dtn_symbol(n, kr, 1.0);
      CHECK(std::isfinite(v.real()));
      CHECK(std::isfinite(v.imag()));
    }
  }
}

TEST_CASE("circle matches the series solution")
{
  const double h = 0.04;
  const BoundaryCurve c = circle_for(0.3, h);
  const double ang[] = {0.0, 2.0};
  for (int order : {1, 2})
  {
    ScatterConfig cfg;
    cfg.fe_order = order;
    ScatterSolver s = make_solver(c, h, cplx(0.0, 0.5), 2.0, cfg);
    const std::vector<IncidentField> inc = {plane_wave(ang[0]), plane_wave(ang[1])};
    const auto sols = s.solve(inc);
    CHECK(sols[0].residual < 1e-10);
    const FarField fem = s.far_field(sols, 64);
    const FarField ref = circle_series(0.3, cplx(0.0, 0.5), 2.0, 6.0, true, ang, 64);
    CHECK(oracle_farfield_compare(fem, ref) < 1e-2);

    // Coefficient by coefficient over the resolved modes.
    const Eigen::VectorXcd cf = fourier_coefficients(fem.samples[0]);
    const Eigen::VectorXcd cr = fourier_coefficients(ref.samples[0]);
    for (Eigen::Index q = 32 - 8; q <= 32 + 8; ++q)
    {
      CHECK(std::abs(cf[q] - cr[q]) < 1e-2 * cr.cwiseAbs().maxCoeff());
    }

    // Near field inside the annulus.
    const ModeCoefficients modes = circle_modes(0.3, cplx(0.0, 3.0), 1.0 / 3.0, 6.0);
    const Vec2 x{0.6 * std::cos(0.7), 0.6 * std::sin(0.7)};
    const cplx us = circle_scattered(modes, ang[0], x);
    CHECK(std::abs(s.scattered_at(sols[0], x) - us) < 1e-2 * std::abs(us));
  }
}

TEST_CASE("Neumann circle")
{
  const double h = 0.04;
  ScatterSolver s = make_solver(circle_for(0.3, h), h, 0.0, 0.0);
  const double ang[] = {0.5};
  const auto sol = s.solve(plane_wave(ang[0]));
  const FarField fem = s.far_field(std::span(&sol, 1), 64);
  CHECK(oracle_farfield_compare(fem, circle_series(0.3, 0.0, 0.0, 6.0, true, ang, 64)) < 1e-2);
}

TEST_CASE("small obstacles scatter weakly")
{
  double previous = 1e300;
  for (double a : {0.08, 0.04, 0.02})
  {
    const double h = 0.04;
    const BoundaryCurve c = make_circle(a, 16);
    ScatterConfig cfg;
    cfg.h = h;
    ScatterSolver s(cfg, triangulate(c, 1.0, h), ImpedanceField::constant(16, cplx(0.0, 0.5), 2.0));
    const Eigen::VectorXcd ff = s.far_field(s.solve(plane_wave(0.0)), 64);
    const double norm_ff = l2_norm(ff);
    CHECK(norm_ff < previous);
    previous = norm_ff;
    const ModeCoefficients modes = circle_modes(a, cplx(0.0, 3.0), 1.0 / 3.0, 6.0);
    CHECK(relative_l2_error(ff, circle_farfield(modes, 0.0, 64)) < 5e-2);
  }
}

TEST_CASE("far field is linear in the incident field")
{
  const double h = 0.05;
  ScatterSolver s = make_solver(trefoil(h), h, cplx(0.0, 0.5), 2.0);
  Herglotz hg;
  hg.directions = {{1.0, 0.0}, {std::cos(1.0), std::sin(1.0)}};
  hg.weights = {cplx(1.0, 0.0), cplx(0.3, -2.0)};
  const std::vector<IncidentField> inc = {plane_wave(0.0), plane_wave(1.0), IncidentField{hg}};
  const auto sols = s.solve(inc);
  const Eigen::VectorXcd sum =
      s.far_field(sols[0], 48) + hg.weights[1] * s.far_field(sols[1], 48);
  CHECK((s.far_field(sols[2], 48) - sum).norm() < 1e-10 * sum.norm());

  const auto zero = s.solve(IncidentField{Herglotz{}});
  CHECK(s.far_field(zero, 16).norm() == 0.0);
}

TEST_CASE("DtN truncation converges spectrally")
{
  const double h = 0.05;
  const BoundaryCurve c = circle_for(0.3, h);
  const AnnulusMesh mesh = triangulate(c, 1.0, h);
  const ImpedanceField imp = ImpedanceField::constant(c.size(), cplx(0.0, 0.5), 2.0);
  ScatterConfig lo, hi;
  lo.n_dtn = 6 + 8;
  hi.n_dtn = 6 + 24;
  const Eigen::VectorXcd a = ScatterSolver(lo, mesh, imp).far_field(
      ScatterSolver(lo, mesh, imp).solve(plane_wave(0.0)), 64);
  ScatterSolver shi(hi, mesh, imp);
  const Eigen::VectorXcd b = shi.far_field(shi.solve(plane_wave(0.0)), 64);
  CHECK((a - b).norm() < 1e-6 * b.norm());
}

TEST_CASE("mixed reciprocity")
{
  const double h = 0.04;
  const Vec2 z{0.7 * std::cos(1.1), 0.7 * std::sin(1.1)};
  ScatterSolver circle = make_solver(circle_for(0.3, h), h, cplx(0.0, 0.5), 2.0);
  ScatterSolver tre = make_solver(trefoil(h), h, cplx(0.0, 0.5), 2.0);
  CHECK(mixed_reciprocity_residual(circle, 0.3, z) < 2e-2);
  CHECK(mixed_reciprocity_residual(tre, 0.3, z) < 5e-2);
}

TEST_CASE("determinism across thread counts")
{
  const double h = 0.05;
  const BoundaryCurve c = trefoil(h);
  ScatterConfig one, two;
  two.threads = 2;
  const std::vector<IncidentField> inc = {plane_wave(0.0), plane_wave(1.0), plane_wave(2.0)};
  ScatterSolver a = make_solver(c, h, cplx(0.0, 0.5), 2.0, one);
  ScatterSolver b = make_solver(c, h, cplx(0.0, 0.5), 2.0, two);
  const FarField fa = a.far_field(a.solve(inc), 32);
  const FarField fb = b.far_field(b.solve(inc), 32);
  for (std::size_t j = 0; j < inc.size(); ++j)
  {
    CHECK(fa.samples[j] == fb.samples[j]);
  }
}

TEST_CASE("configuration errors")
{
  const double h = 0.05;
  const BoundaryCurve c = circle_for(0.3, h);
  const AnnulusMesh mesh = triangulate(c, 1.0, h);
  ScatterConfig bad;
  bad.fe_order = 3;
  CHECK_THROWS_AS(ScatterSolver(bad, mesh, ImpedanceField::constant(c.size(), 0.0, 1.0)),
                  ConfigError);
  bad = {};
  bad.n_dtn = 4;
  CHECK_THROWS_AS(ScatterSolver(bad, mesh, ImpedanceField::constant(c.size(), 0.0, 1.0)),
                  ConfigError);
  CHECK_THROWS_AS(ScatterSolver({}, mesh, ImpedanceField::constant(c.size() + 1, 0.0, 1.0)),
                  MeshMismatch);
  ScatterSolver s({}, mesh, ImpedanceField::constant(c.size(), 0.0, 1.0));
  const auto sol = s.solve(plane_wave(0.0));
  CHECK_THROWS_AS(s.scattered_at(sol, {0.0, 0.0}), MeshMismatch);
}
