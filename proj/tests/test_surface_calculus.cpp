#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gibc/surface_calculus.hpp"

using namespace gibc;
using cplx = std::complex<double>;

namespace
{

constexpr double pi = std::numbers::pi;

BoundaryField mode_on_circle(const BoundaryCurve &c, int n)
{
  BoundaryField f(static_cast<Eigen::Index>(c.size()));
  auto th = polar_angles(c);
  for (std::size_t i = 0; i < c.size(); ++i)
  {
    f[static_cast<Eigen::Index>(i)] = std::polar(1.0, n * th[i]);
  }
  return f;
}

double max_abs(const BoundaryField &f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("d_ds")
{
  BoundaryCurve c = make_circle(0.3, 128);
  CHECK(max_abs(d_ds(c, BoundaryField::Constant(128, cplx(2.0, -1.0)))) < 1e-12);

  // Periodic sine in arclength on a trefoil, against the analytic derivative.
  BoundaryCurve t = make_polar([](double th) { return 0.3 + 0.08 * std::cos(3 * th); }, 256);
  CurveFields f = curve_fields(t);
  const double p = t.perimeter();
  BoundaryField s(256), exact(256);
  for (Eigen::Index i = 0; i < 256; ++i)
  {
    const double arg = 2 * pi * f.arclength[static_cast<std::size_t>(i)] / p;
    s[i] = std::sin(arg);
    exact[i] = 2 * pi / p * std::cos(arg);
  }
  CHECK(max_abs(d_ds(t, s) - exact) < 1e-3 * 2 * pi / p);

  // Mode on a circle: d/ds e^{in theta} = (in/a) e^{in theta}.
  const int n = 3;
  BoundaryField m = mode_on_circle(c, n);
  BoundaryField expect = cplx(0.0, n / 0.3) * m;
  CHECK(max_abs(d_ds(c, m) - expect) < 0.01 * n / 0.3);
}

TEST_CASE("apply_L")
{
  BoundaryCurve c = make_circle(0.3, 128);
  BoundaryField u = mode_on_circle(c, 2) + 0.3 * mode_on_circle(c, -5);

  auto imp = ImpedanceField::constant(128, 1.0, 0.0);
  CHECK(max_abs(apply_L(c, imp, u) - u) < 1e-14);

  const cplx lambda(0.4, 0.7);
  imp = ImpedanceField::constant(128, lambda, 1.0);
  BoundaryField m = mode_on_circle(c, 4);
  BoundaryField expect = (lambda - 16.0 / 0.09) * m;
  CHECK(max_abs(apply_L(c, imp, m) - expect) < 0.01 * max_abs(expect));

  BoundaryField one = BoundaryField::Constant(128, 1.5);
  CHECK(max_abs(apply_L(c, imp, one) - lambda * one) < 1e-12);
}

TEST_CASE("weak pairing")
{
  BoundaryCurve t = make_polar([](double th) { return 0.3 + 0.08 * std::cos(3 * th); }, 200);
  const auto n = static_cast<Eigen::Index>(t.size());
  auto th = polar_angles(t);
  ImpedanceField imp;
  imp.lambda.resize(n);
  imp.mu.resize(n);
  BoundaryField u(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const double a = th[static_cast<std::size_t>(i)];
    imp.lambda[i] = {0.0, 0.5 * (1 + std::sin(a) * std::sin(a))};
    imp.mu[i] = 0.5 * (1 + std::cos(a) * std::cos(a));
    u[i] = std::polar(1.0, 2 * a) + std::cos(a);
    v[i] = std::polar(1.0, -3 * a);
  }

  auto zero_lambda = imp;
  zero_lambda.lambda.setZero();
  CHECK(std::abs(weak_L_pairing(t, zero_lambda, BoundaryField::Constant(n, 1.0), v)) < 1e-12);
  CHECK(std::abs(weak_L_pairing(t, zero_lambda, u, BoundaryField::Constant(n, 1.0))) < 1e-12);

  CHECK(weak_L_pairing(t, imp, u, v) == weak_L_pairing(t, imp, v, u));

  // Strong form integrated with the dual lengths matches the weak form.
  CurveFields f = curve_fields(t);
  BoundaryField lu = apply_L(t, imp, u);
  cplx strong = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    strong += f.dual_length[static_cast<std::size_t>(i)] * lu[i] * v[i];
  }
  CHECK(std::abs(strong - weak_L_pairing(t, imp, u, v)) < 1e-10 * std::abs(strong));
}

TEST_CASE("h1_smooth")
{
  BoundaryCurve c = make_circle(0.3, 128);
  auto mass = boundary_mass(c);
  Eigen::VectorXd ones = Eigen::VectorXd::Constant(128, 2.5);
  Eigen::VectorXd e = h1_smooth(c, 0.7, mass * ones);
  CHECK((e - ones).cwiseAbs().maxCoeff() < 1e-12);

  // Zero mean load: the solution shrinks as eta grows.
  Eigen::VectorXd load(128);
  auto th = polar_angles(c);
  for (int i = 0; i < 128; ++i)
  {
    load[i] = std::cos(3 * th[static_cast<std::size_t>(i)]);
  }
  load = mass * load;
  double prev = 1e300;
  for (double eta : {1e-3, 1e-2, 1e-1, 1.0})
  {
    double nrm = h1_smooth(c, eta, load).norm();
    CHECK(nrm < prev);
    prev = nrm;
  }

  // Fourier symbol 1 / (1 + eta n^2 / a^2).
  c = make_circle(0.3, 256);
  mass = boundary_mass(c);
  th = polar_angles(c);
  const double eta = 0.002;
  for (int n : {1, 4, 9})
  {
    Eigen::VectorXd f(256);
    for (int i = 0; i < 256; ++i)
    {
      f[i] = std::cos(n * th[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd sol = h1_smooth(c, eta, mass * f);
    const double symbol = 1.0 / (1.0 + eta * n * n / 0.09);
    CHECK((sol - symbol * f).cwiseAbs().maxCoeff() < 0.01 * symbol);
  }

  CHECK_THROWS_AS(h1_smooth(c, 0.0, load), ConfigError);
}

TEST_CASE("h1_smooth is self-adjoint")
{
  BoundaryCurve t = make_polar([](double th) { return 0.3 + 0.08 * std::cos(3 * th); }, 64);
  Eigen::MatrixXd s(64, 64);
  for (int j = 0; j < 64; ++j)
  {
    s.col(j) = h1_smooth(t, 0.01, Eigen::VectorXd::Unit(64, j));
  }
  CHECK((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-12 * s.cwiseAbs().maxCoeff());
}

TEST_CASE("admissibility projection")
{
  ImpedanceField imp;
  imp.lambda.resize(3);
  imp.mu.resize(3);
  imp.lambda << cplx(1, -1), cplx(0.2, 0.5), cplx(-1, 0);
  imp.mu << cplx(-1, 1), cplx(2, -0.5), cplx(0, 0);
  CHECK_FALSE(is_admissible(imp));
  auto p = project_admissible(imp);
  CHECK(is_admissible(p));
  CHECK(p.lambda[0] == cplx(1, 0));
  CHECK(p.mu[0] == cplx(default_mu_floor, 0));
  CHECK(p.mu[1] == cplx(2, -0.5));
  auto pp = project_admissible(p);
  CHECK(pp.lambda == p.lambda);
  CHECK(pp.mu == p.mu);
}

TEST_CASE("boundary field csv round trip")
{
  BoundaryField f(3);
  f << cplx(0.1, 1.0 / 3.0), cplx(-2e-17, 5), cplx(1e300, -0.0);
  std::stringstream ss;
  write_boundary_field_csv(ss, f);
  CHECK(read_boundary_field_csv(ss) == f);
}
