#include "gibc/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "gibc/gradients.hpp"
#include "gibc/inversion.hpp"
#include "gibc/quadrature.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;

BoundaryCurve fd_curve(const std::string &shape, std::size_t n)
{
  if (shape == "circle")
  {
    return make_circle(0.3, n);
  }
  if (shape == "trefoil")
  {
    return make_polar([](double t) { return 0.3 + 0.08 * std::cos(3.0 * t); }, n);
  }
  throw ConfigError("fd problem shape must be circle or trefoil");
}

std::size_t nodes_for(const std::string &shape, double h)
{
  const double perimeter = fd_curve(shape, 512).perimeter();
  return static_cast<std::size_t>(std::ceil(perimeter / h));
}

// Low order trigonometric polynomial with normal random coefficients, scaled to max |v| = 1.
Eigen::VectorXd random_profile(const std::vector<double> &theta, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal;
  double a[4], b[4];
  for (int m = 0; m < 4; ++m)
  {
    a[m] = normal(rng);
    b[m] = normal(rng);
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t i = 0; i < theta.size(); ++i)
  {
    double s = a[0];
    for (int m = 1; m < 4; ++m)
    {
      s += a[m] * std::cos(m * theta[i]) + b[m] * std::sin(m * theta[i]);
    }
    v[static_cast<Eigen::Index>(i)] = s;
  }
  return v / v.cwiseAbs().maxCoeff();
}

double ls_slope(const std::vector<double> &t, const std::vector<double> &r)
{
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
  {
    const double x = std::log(t[i]), y = std::log(r[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Gradients gradients_at(const FdProblem &p)
{
  const ScatterSolver s(p.cfg, p.mesh, p.imp);
  return compute_gradients(s, evaluate(s, p.data));
}

}  // namespace

FdProblem make_fd_problem(const std::string &shape, const ScatterConfig &cfg,
                          bool constant_impedance)
{
  FdProblem p;
  p.cfg = cfg;
  p.curve = fd_curve(shape, nodes_for(shape, cfg.h));
  const std::size_t n = p.curve.size();
  if (constant_impedance)
  {
    p.imp = ImpedanceField::constant(n, {0.0, 0.5}, 2.0);
  }
  else
  {
    p.imp = ImpedanceField::constant(n, 0.0, 0.0);
    const auto theta = polar_angles(p.curve);
    for (std::size_t i = 0; i < n; ++i)
    {
      const double s = std::sin(theta[i]), c = std::cos(theta[i]);
      p.imp.lambda[static_cast<Eigen::Index>(i)] = {0.0, 0.5 * (1.0 + s * s)};
      p.imp.mu[static_cast<Eigen::Index>(i)] = 0.5 * (1.0 + c * c);
    }
  }
  p.mesh = triangulate(p.curve, cfg.radius, cfg.h, cfg.mesh_seed);

  const BoundaryCurve other = make_circle(0.33, n);
  const ScatterSolver s(cfg, triangulate(other, cfg.radius, cfg.h, cfg.mesh_seed),
                        ImpedanceField::constant(n, {0.0, 1.0}, 1.5));
  const std::vector<IncidentField> inc = {plane_wave(0.0), plane_wave(2.0), plane_wave(4.0)};
  p.data = s.far_field(s.solve(inc), 64);
  return p;
}

double fd_cost(const FdProblem &p, const AnnulusMesh &mesh, const ImpedanceField &imp)
{
  const ScatterSolver s(p.cfg, mesh, imp);
  return evaluate(s, p.data).cost.F;
}

FdResult impedance_fd(const FdProblem &p, int directions, const std::vector<double> &steps,
                      std::uint64_t seed)
{
  const Gradients g = gradients_at(p);
  const double f0 = fd_cost(p, p.mesh, p.imp);
  const auto theta = polar_angles(p.curve);
  std::mt19937_64 rng(seed);
  FdResult out;
  out.steps = steps;
  for (int d = 0; d < directions; ++d)
  {
    const cplx I{0.0, 1.0};
    const BoundaryField dl = random_profile(theta, rng).cast<cplx>() +
                             I * random_profile(theta, rng).cast<cplx>();
    const BoundaryField dm = random_profile(theta, rng).cast<cplx>() +
                             I * random_profile(theta, rng).cast<cplx>();
    const double dd = directional_derivative(g.impedance, dl, dm);
    std::vector<double> rem;
    for (double t : steps)
    {
      ImpedanceField imp = p.imp;
      imp.lambda += t * dl;
      imp.mu += t * dm;
      rem.push_back(std::abs(fd_cost(p, p.mesh, imp) - f0 - t * dd));
    }
    out.slopes.push_back(ls_slope(steps, rem));
    out.remainders.push_back(std::move(rem));
    out.derivatives.push_back(dd);
  }
  return out;
}

FdResult shape_fd(const FdProblem &p, int directions, const std::vector<double> &steps,
                  std::uint64_t seed)
{
  const Gradients g = gradients_at(p);
  const double f0 = fd_cost(p, p.mesh, p.imp);
  const auto theta = polar_angles(p.curve);
  const CurveFields fields = curve_fields(p.curve);
  std::mt19937_64 rng(seed);
  FdResult out;
  out.steps = steps;
  for (int d = 0; d < directions; ++d)
  {
    Perturbation eps = Perturbation::zero(p.curve.size());
    eps.normal = random_profile(theta, rng);
    const double dd = directional_derivative(g.shape, eps);
    auto moved_cost = [&](double t) {
      const Perturbation e{t * eps.tangential, t * eps.normal};
      return fd_cost(p, deform_mesh(p.mesh, apply_perturbation(p.curve, fields, e)), p.imp);
    };
    std::vector<double> rem;
    for (double t : steps)
    {
      rem.push_back(std::abs(moved_cost(t) - f0 - t * dd));
    }
    const double t = *std::min_element(steps.begin(), steps.end());
    const double central = (moved_cost(t) - moved_cost(-t)) / (2.0 * t);
    out.central_errors.push_back(std::abs(dd - central) / std::abs(central));
    out.slopes.push_back(ls_slope(steps, rem));
    out.remainders.push_back(std::move(rem));
    out.derivatives.push_back(dd);
  }
  return out;
}

double tangential_ratio(const FdProblem &p)
{
  const Gradients g = gradients_at(p);
  return g.shape.tangential.norm() / g.shape.normal.norm();
}

double weak_strong_difference(std::size_t n, double k)
{
  const BoundaryCurve c = fd_curve("trefoil", n);
  const auto theta = polar_angles(c);
  ImpedanceField imp = ImpedanceField::constant(n, 0.0, 0.0);
  Perturbation eps = Perturbation::zero(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto ii = static_cast<Eigen::Index>(i);
    const double s = std::sin(theta[i]), co = std::cos(theta[i]);
    imp.lambda[ii] = {1.0, 3.0 * (1.0 + s * s)};
    imp.mu[ii] = {(1.0 + co * co) / 12.0, -0.01};
    eps.normal[ii] = std::cos(2.0 * theta[i]) + 0.3;
    eps.tangential[ii] = std::sin(theta[i]);
  }
  const Vec2 d1{0.6, 0.8}, d2{-1.0, 0.0};
  const IncidentField w1 = plane_wave(std::atan2(d1.y, d1.x));
  const IncidentField w2 = plane_wave(std::atan2(d2.y, d2.x));

  EdgeTrace u, g;
  u.value.resize(n * EdgeRule::size);
  u.ds.resize(n * EdgeRule::size);
  g = u;
  for (std::size_t e = 0; e < n; ++e)
  {
    const Vec2 p0 = c[e], dd = c[c.next(e)] - c[e], tau = normalized(dd);
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      const std::size_t idx = e * EdgeRule::size + static_cast<std::size_t>(q);
      const Vec2 y = p0 + EdgeRule::nodes[static_cast<std::size_t>(q)] * dd;
      cplx dx, dy;
      u.value[idx] = w1.value(k, y, dx, dy);
      u.ds[idx] = dx * tau.x + dy * tau.y;
      g.value[idx] = w2.value(k, y, dx, dy);
      g.ds[idx] = dx * tau.x + dy * tau.y;
    }
  }
  const ShapeGradient sg = shape_gradient(c, imp, k, std::span<const EdgeTrace>(&u, 1),
                                          std::span<const EdgeTrace>(&g, 1));
  const double weak = directional_derivative(sg, eps);

  const CurveFields f = curve_fields(c);
  BoundaryField un(static_cast<Eigen::Index>(n)), gn(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    un[static_cast<Eigen::Index>(i)] = w1.value(k, c[i]);
    gn[static_cast<Eigen::Index>(i)] = w2.value(k, c[i]);
  }
  const BoundaryField b = apply_B_eps(c, f, imp, k, un, eps.tangential, eps.normal);
  cplx s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    s += f.dual_length[i] * gn[static_cast<Eigen::Index>(i)] * b[static_cast<Eigen::Index>(i)];
  }
  return std::abs(weak + s.real());
}

void print_check(std::ostream &os, const CheckResult &c)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %s value=%.4g tol=%.4g", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.value, c.tolerance);
  os << buf << '\n';
}

std::vector<CheckResult> run_validation(const ScatterConfig &cfg, int directions,
                                        const std::vector<double> &shape_steps, double fd_h,
                                        std::uint64_t seed)
{
  std::vector<CheckResult> out;
  const std::vector<double> imp_steps = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};
  ScatterConfig fd_cfg = cfg;
  fd_cfg.h = fd_h;
  for (const char *shape : {"circle", "trefoil"})
  {
    const FdProblem p = make_fd_problem(shape, fd_cfg);
    const FdResult ri = impedance_fd(p, directions, imp_steps, seed);
    const FdResult rs = shape_fd(p, directions, shape_steps, seed + 1);
    for (std::size_t d = 0; d < ri.slopes.size(); ++d)
    {
      out.push_back({std::string("impedance_fd_slope_") + shape + "_dir" + std::to_string(d),
                     ri.slopes[d], 0.2, std::abs(ri.slopes[d] - 2.0) <= 0.2});
    }
    for (std::size_t d = 0; d < rs.slopes.size(); ++d)
    {
      out.push_back({std::string("shape_fd_slope_") + shape + "_dir" + std::to_string(d),
                     rs.slopes[d], 0.2, std::abs(rs.slopes[d] - 2.0) <= 0.2});
    }
    for (std::size_t d = 0; d < rs.central_errors.size(); ++d)
    {
      out.push_back({std::string("shape_fd_central_error_") + shape + "_dir" + std::to_string(d),
                     rs.central_errors[d], 5e-2, rs.central_errors[d] < 5e-2});
    }
    const double ratio = tangential_ratio(make_fd_problem(shape, cfg, true));
    out.push_back({std::string("tangential_ratio_constant_") + shape, ratio, 1e-3, ratio <= 1e-3});
  }

  const double d1 = weak_strong_difference(128, cfg.k), d2 = weak_strong_difference(256, cfg.k);
  const double order = std::log2(d1 / d2);
  out.push_back({"weak_strong_order", order, 1.8, order >= 1.8});

  const Vec2 z{0.7 * std::cos(1.1), 0.7 * std::sin(1.1)};
  for (const char *shape : {"circle", "trefoil"})
  {
    const double tol = std::string(shape) == "circle" ? 2e-2 : 5e-2;
    double res[2];
    for (int r = 0; r < 2; ++r)
    {
      ScatterConfig c = cfg;
      c.h = cfg.h / (r + 1);
      const BoundaryCurve curve = fd_curve(shape, nodes_for(shape, c.h));
      const ScatterSolver s(c, triangulate(curve, c.radius, c.h, c.mesh_seed),
                            ImpedanceField::constant(curve.size(), {0.0, 0.5}, 2.0));
      res[r] = mixed_reciprocity_residual(s, 0.3, z);
    }
    out.push_back({std::string("reciprocity_") + shape, res[0], tol, res[0] < tol});
    out.push_back({std::string("reciprocity_refinement_ratio_") + shape, res[1] / res[0], 1.0,
                   res[1] < res[0]});
  }
  return out;
}

}  // namespace gibc
