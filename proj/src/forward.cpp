#include "gibc/forward.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>

#include "gibc/bessel.hpp"
#include "gibc/errors.hpp"
#include "gibc/parallel.hpp"
#include "gibc/quadrature.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

using SpMat = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

// Lagrange basis on [0, 1] restricted to an edge: endpoints first, then the midpoint.
void edge_basis(int order, double t, std::array<double, 3> &phi, std::array<double, 3> &dphi)
{
  if (order == 1)
  {
    phi = {1.0 - t, t, 0.0};
    dphi = {-1.0, 1.0, 0.0};
    return;
  }
  phi = {(1.0 - t) * (1.0 - 2.0 * t), t * (2.0 * t - 1.0), 4.0 * t * (1.0 - t)};
  dphi = {4.0 * t - 3.0, 4.0 * t - 1.0, 4.0 - 8.0 * t};
}

// Lagrange basis on a triangle in barycentric coordinates, ordered
// [v0, v1, v2, e01, e12, e20]; gradients from the constant barycentric gradients g.
void triangle_basis(int order, const std::array<double, 3> &l, const std::array<Vec2, 3> &g,
                    std::array<double, 6> &phi, std::array<Vec2, 6> &grad)
{
  if (order == 1)
  {
    for (int i = 0; i < 3; ++i)
    {
      phi[i] = l[i];
      grad[i] = g[i];
    }
    return;
  }
  for (int i = 0; i < 3; ++i)
  {
    phi[i] = l[i] * (2.0 * l[i] - 1.0);
    grad[i] = (4.0 * l[i] - 1.0) * g[i];
    const int j = (i + 1) % 3;
    phi[3 + i] = 4.0 * l[i] * l[j];
    grad[3 + i] = 4.0 * (l[i] * g[j] + l[j] * g[i]);
  }
}

std::uint64_t edge_key(int a, int b)
{
  if (a > b)
  {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct EdgeGeom
{
  Vec2 p0;
  Vec2 d;  // p1 - p0
  Vec2 tau;
  Vec2 nu;
  double length = 0.0;
};

}  // namespace

int ScatterConfig::dtn_modes() const
{
  return n_dtn > 0 ? n_dtn : static_cast<int>(std::ceil(k * radius)) + 16;
}

void ScatterConfig::validate() const
{
  if (!(k > 0.0) || !std::isfinite(k))
  {
    throw ConfigError("ScatterConfig: k must be positive");
  }
  if (!(radius > 0.0) || !(h > 0.0))
  {
    throw ConfigError("ScatterConfig: radius and h must be positive");
  }
  if (fe_order != 1 && fe_order != 2)
  {
    throw ConfigError("ScatterConfig: fe_order must be 1 or 2");
  }
  if (n_dtn != 0 && n_dtn < static_cast<int>(std::ceil(k * radius)) + 8)
  {
    throw ConfigError("ScatterConfig: n_dtn must be at least ceil(kR) + 8");
  }
}

cplx IncidentField::value(double k, const Vec2 &x) const
{
  cplx dx, dy;
  return value(k, x, dx, dy);
}

cplx IncidentField::value(double k, const Vec2 &x, cplx &dx, cplx &dy) const
{
  if (const auto *pw = std::get_if<PlaneWave>(&kind))
  {
    const Vec2 d{std::cos(pw->angle), std::sin(pw->angle)};
    const cplx u = std::polar(1.0, k * dot(d, x));
    dx = I * k * d.x * u;
    dy = I * k * d.y * u;
    return u;
  }
  if (const auto *ps = std::get_if<PointSource>(&kind))
  {
    const Vec2 r = x - ps->z;
    const double rho = norm(r);
    const cplx h0 = hankel1(0, k * rho), h1 = hankel1(1, k * rho);
    // grad (i/4) H0(k rho) = -(i k / 4) H1(k rho) r / rho
    const cplx g = -I * k / 4.0 * h1 / rho;
    dx = g * r.x;
    dy = g * r.y;
    return I / 4.0 * h0;
  }
  const auto &hg = std::get<Herglotz>(kind);
  cplx u = 0.0;
  dx = dy = 0.0;
  for (std::size_t m = 0; m < hg.directions.size(); ++m)
  {
    const Vec2 &d = hg.directions[m];
    const cplx e = hg.weights[m] * std::polar(1.0, k * dot(d, x));
    u += e;
    dx += I * k * d.x * e;
    dy += I * k * d.y * e;
  }
  return u;
}

IncidentField plane_wave(double angle) { return {PlaneWave{angle}}; }
IncidentField point_source(const Vec2 &z) { return {PointSource{z}}; }

cplx dtn_symbol(int n, double k, double radius)
{
  const int m = std::abs(n);
  return k * hankel1_log_derivative(m, k * radius)[static_cast<std::size_t>(m)];
}

ImpedanceField effective_impedance(const ScatterConfig &cfg, const ImpedanceField &imp)
{
  ImpedanceField out = imp;
  if (cfg.dimensionless)
  {
    out.lambda *= cfg.k;
    out.mu /= cfg.k;
  }
  return out;
}

struct ScatterSolver::Impl
{
  ScatterConfig cfg;
  AnnulusMesh mesh;
  BoundaryCurve curve;
  ImpedanceField imp;
  int order = 2;
  std::size_t ndof = 0;
  std::vector<std::array<int, 6>> tri_dofs;
  std::vector<std::array<int, 3>> obstacle_dofs;  // per obstacle edge: start, end, midpoint
  std::vector<EdgeGeom> obstacle_geom;
  SpMat matrix;
  Eigen::UmfPackLU<SpMat> lu;

  int local_count() const { return order == 1 ? 3 : 6; }
  int edge_count() const { return order == 1 ? 2 : 3; }

  void number_dofs();
  void assemble();
  Eigen::VectorXcd rhs(const IncidentField &inc) const;
  ScatterSolution postprocess(const IncidentField &inc, Eigen::VectorXcd x, double residual) const;
};

void ScatterSolver::Impl::number_dofs()
{
  const int nv = static_cast<int>(mesh.vertices.size());
  std::unordered_map<std::uint64_t, int> edge_dof;
  int next = nv;
  tri_dofs.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    auto &d = tri_dofs[t];
    d.fill(-1);
    for (int i = 0; i < 3; ++i)
    {
      d[i] = tri[i];
    }
    if (order == 2)
    {
      for (int i = 0; i < 3; ++i)
      {
        auto [it, inserted] = edge_dof.try_emplace(edge_key(tri[i], tri[(i + 1) % 3]), next);
        if (inserted)
        {
          ++next;
        }
        d[3 + i] = it->second;
      }
    }
  }
  ndof = static_cast<std::size_t>(next);

  auto edge_dofs = [&](int a, int b) {
    std::array<int, 3> d{a, b, -1};
    if (order == 2)
    {
      auto it = edge_dof.find(edge_key(a, b));
      if (it == edge_dof.end())
      {
        throw MeshMismatch("boundary edge missing from the triangulation");
      }
      d[2] = it->second;
    }
    return d;
  };

  const std::size_t n = mesh.num_obstacle;
  obstacle_dofs.resize(n);
  obstacle_geom.resize(n);
  for (std::size_t e = 0; e < n; ++e)
  {
    const int a = static_cast<int>(e), b = static_cast<int>((e + 1) % n);
    obstacle_dofs[e] = edge_dofs(a, b);
    EdgeGeom &g = obstacle_geom[e];
    g.p0 = mesh.vertices[static_cast<std::size_t>(a)];
    g.d = mesh.vertices[static_cast<std::size_t>(b)] - g.p0;
    g.length = norm(g.d);
    g.tau = (1.0 / g.length) * g.d;
    g.nu = rotate_cw(g.tau);
  }
}

void ScatterSolver::Impl::assemble()
{
  const double k2 = cfg.k * cfg.k;
  const int nl = local_count();
  std::vector<Triplet> trip;
  trip.reserve(mesh.triangles.size() * static_cast<std::size_t>(nl * nl));

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    const std::array<Vec2, 3> p = {mesh.vertices[static_cast<std::size_t>(tri[0])],
                                   mesh.vertices[static_cast<std::size_t>(tri[1])],
                                   mesh.vertices[static_cast<std::size_t>(tri[2])]};
    const double area2 = cross(p[1] - p[0], p[2] - p[0]);
    std::array<Vec2, 3> g;
    for (int i = 0; i < 3; ++i)
    {
      const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
      g[i] = Vec2{-e.y, e.x} * (1.0 / area2);
    }
    std::array<std::array<double, 6>, 6> local{};
    for (int q = 0; q < TriangleRule::size; ++q)
    {
      std::array<double, 6> phi{};
      std::array<Vec2, 6> grad{};
      triangle_basis(order, TriangleRule::points[static_cast<std::size_t>(q)], g, phi, grad);
      const double w = TriangleRule::weights[static_cast<std::size_t>(q)] * 0.5 * area2;
      for (int a = 0; a < nl; ++a)
      {
        for (int b = 0; b < nl; ++b)
        {
          local[a][b] += w * (dot(grad[a], grad[b]) - k2 * phi[a] * phi[b]);
        }
      }
    }
    const auto &d = tri_dofs[t];
    for (int a = 0; a < nl; ++a)
    {
      for (int b = 0; b < nl; ++b)
      {
        trip.emplace_back(d[a], d[b], local[a][b]);
      }
    }
  }

  // Impedance terms: integral of mu u' v' - lambda u v over the obstacle boundary.
  const int ne = edge_count();
  const std::size_t n = mesh.num_obstacle;
  for (std::size_t e = 0; e < n; ++e)
  {
    const EdgeGeom &geo = obstacle_geom[e];
    const std::size_t e1 = (e + 1) % n;
    std::array<std::array<cplx, 3>, 3> local{};
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
      const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * geo.length;
      const cplx lam = (1.0 - t) * imp.lambda[static_cast<Eigen::Index>(e)] +
                       t * imp.lambda[static_cast<Eigen::Index>(e1)];
      const cplx mu = (1.0 - t) * imp.mu[static_cast<Eigen::Index>(e)] +
                      t * imp.mu[static_cast<Eigen::Index>(e1)];
      std::array<double, 3> phi, dphi;
      edge_basis(order, t, phi, dphi);
      for (int a = 0; a < ne; ++a)
      {
        for (int b = 0; b < ne; ++b)
        {
          local[a][b] += w * (mu * (dphi[a] * dphi[b] / (geo.length * geo.length)) -
                              lam * (phi[a] * phi[b]));
        }
      }
    }
    for (int a = 0; a < ne; ++a)
    {
      for (int b = 0; b < ne; ++b)
      {
        trip.emplace_back(obstacle_dofs[e][a], obstacle_dofs[e][b], local[a][b]);
      }
    }
  }

  // Dirichlet-to-Neumann term. With c_n(phi) the Fourier integral of phi over the angle,
  // <S_R u, v> = R/(2 pi) sum_n s_n c_n(u) c_{-n}(v).
  const std::size_t m = mesh.num_outer;
  const int nd = cfg.dtn_modes();
  std::vector<int> outer_dofs;
  std::unordered_map<int, int> outer_index;
  auto outer_slot = [&](int dof) {
    auto [it, inserted] = outer_index.try_emplace(dof, static_cast<int>(outer_dofs.size()));
    if (inserted)
    {
      outer_dofs.push_back(dof);
    }
    return it->second;
  };
  std::unordered_map<std::uint64_t, int> mid;
  if (order == 2)
  {
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    {
      for (int i = 0; i < 3; ++i)
      {
        mid.emplace(edge_key(mesh.triangles[t][i], mesh.triangles[t][(i + 1) % 3]),
                    tri_dofs[t][3 + i]);
      }
    }
  }
  std::vector<std::array<int, 3>> edge_slots(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    const int a = mesh.outer_vertex(j), b = mesh.outer_vertex((j + 1) % m);
    edge_slots[j][0] = outer_slot(a);
    edge_slots[j][1] = outer_slot(b);
    if (order == 2)
    {
      auto it = mid.find(edge_key(a, b));
      if (it == mid.end())
      {
        throw MeshMismatch("outer edge missing from the triangulation");
      }
      edge_slots[j][2] = outer_slot(it->second);
    }
  }
  const auto nb = static_cast<Eigen::Index>(outer_dofs.size());
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(nb, 2 * nd + 1);
  const double dtheta = 2.0 * pi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
      const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * dtheta;
      const double theta = (static_cast<double>(j) + t) * dtheta;
      std::array<double, 3> phi, dphi;
      edge_basis(order, t, phi, dphi);
      for (int n = -nd; n <= nd; ++n)
      {
        const cplx e = w * std::polar(1.0, -static_cast<double>(n) * theta);
        for (int a = 0; a < ne; ++a)
        {
          c(edge_slots[j][a], n + nd) += phi[a] * e;
        }
      }
    }
  }
  const auto log_der = hankel1_log_derivative(nd, cfg.k * cfg.radius);
  Eigen::VectorXcd s(2 * nd + 1);
  for (int n = -nd; n <= nd; ++n)
  {
    s[n + nd] = cfg.k * log_der[static_cast<std::size_t>(std::abs(n))];
  }
  const Eigen::MatrixXcd dtn =
      (cfg.radius / (2.0 * pi)) * (c.conjugate() * s.asDiagonal() * c.transpose());
  for (Eigen::Index a = 0; a < nb; ++a)
  {
    for (Eigen::Index b = 0; b < nb; ++b)
    {
      trip.emplace_back(outer_dofs[static_cast<std::size_t>(a)],
                        outer_dofs[static_cast<std::size_t>(b)], -dtn(a, b));
    }
  }

  matrix.resize(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(ndof));
  matrix.setFromTriplets(trip.begin(), trip.end());
  matrix.makeCompressed();
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() != Eigen::Success)
  {
    throw SolveFailure("sparse LU factorization failed");
  }
}

Eigen::VectorXcd ScatterSolver::Impl::rhs(const IncidentField &inc) const
{
  // Scattered field load: integral of d_nu u^i v - mu (u^i)' v' + lambda u^i v.
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ndof));
  const int ne = edge_count();
  const std::size_t n = mesh.num_obstacle;
  for (std::size_t e = 0; e < n; ++e)
  {
    const EdgeGeom &geo = obstacle_geom[e];
    const std::size_t e1 = (e + 1) % n;
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
      const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * geo.length;
      const cplx lam = (1.0 - t) * imp.lambda[static_cast<Eigen::Index>(e)] +
                       t * imp.lambda[static_cast<Eigen::Index>(e1)];
      const cplx mu = (1.0 - t) * imp.mu[static_cast<Eigen::Index>(e)] +
                      t * imp.mu[static_cast<Eigen::Index>(e1)];
      cplx dx, dy;
      const cplx ui = inc.value(cfg.k, geo.p0 + t * geo.d, dx, dy);
      const cplx dn = dx * geo.nu.x + dy * geo.nu.y;
      const cplx ds = dx * geo.tau.x + dy * geo.tau.y;
      std::array<double, 3> phi, dphi;
      edge_basis(order, t, phi, dphi);
      for (int a = 0; a < ne; ++a)
      {
        b[obstacle_dofs[e][a]] +=
            w * (dn * phi[a] - mu * ds * (dphi[a] / geo.length) + lam * ui * phi[a]);
      }
    }
  }
  return b;
}

ScatterSolution ScatterSolver::Impl::postprocess(const IncidentField &inc, Eigen::VectorXcd x,
                                                 double residual) const
{
  ScatterSolution sol;
  sol.incident = inc;
  sol.scattered = std::move(x);
  sol.residual = residual;
  const std::size_t n = mesh.num_obstacle;
  const auto nn = static_cast<Eigen::Index>(n);
  const int ne = edge_count();
  sol.trace.resize(nn);
  sol.trace_ds = BoundaryField::Zero(nn);
  sol.edge.value.resize(n * EdgeRule::size);
  sol.edge.ds.resize(n * EdgeRule::size);
  for (std::size_t i = 0; i < n; ++i)
  {
    sol.trace[static_cast<Eigen::Index>(i)] =
        sol.scattered[static_cast<Eigen::Index>(i)] + inc.value(cfg.k, mesh.vertices[i]);
  }
  auto local = [&](std::size_t e, double t, cplx &du) {
    std::array<double, 3> phi, dphi;
    edge_basis(order, t, phi, dphi);
    const EdgeGeom &geo = obstacle_geom[e];
    cplx u = 0.0;
    du = 0.0;
    for (int a = 0; a < ne; ++a)
    {
      const cplx c = sol.scattered[obstacle_dofs[e][a]];
      u += phi[a] * c;
      du += (dphi[a] / geo.length) * c;
    }
    cplx dx, dy;
    u += inc.value(cfg.k, geo.p0 + t * geo.d, dx, dy);
    du += dx * geo.tau.x + dy * geo.tau.y;
    return u;
  };
  for (std::size_t e = 0; e < n; ++e)
  {
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      cplx du;
      const std::size_t idx = e * EdgeRule::size + static_cast<std::size_t>(q);
      sol.edge.value[idx] = local(e, EdgeRule::nodes[static_cast<std::size_t>(q)], du);
      sol.edge.ds[idx] = du;
    }
    cplx d0, d1;
    local(e, 0.0, d0);
    local(e, 1.0, d1);
    sol.trace_ds[static_cast<Eigen::Index>(e)] += 0.5 * d0;
    sol.trace_ds[static_cast<Eigen::Index>((e + 1) % n)] += 0.5 * d1;
  }
  return sol;
}

ScatterSolver::ScatterSolver(const ScatterConfig &cfg, const AnnulusMesh &mesh,
                             const ImpedanceField &imp)
    : impl_(std::make_unique<Impl>())
{
  cfg.validate();
  if (imp.size() != mesh.num_obstacle || static_cast<std::size_t>(imp.mu.size()) != imp.size())
  {
    throw MeshMismatch("impedance field size differs from the obstacle node count");
  }
  if (std::abs(mesh.radius - cfg.radius) > 1e-12 * cfg.radius)
  {
    throw MeshMismatch("mesh radius differs from the configured radius");
  }
  impl_->cfg = cfg;
  impl_->mesh = mesh;
  impl_->curve = BoundaryCurve(std::vector<Vec2>(mesh.vertices.begin(),
                                                 mesh.vertices.begin() +
                                                     static_cast<std::ptrdiff_t>(mesh.num_obstacle)));
  impl_->imp = gibc::effective_impedance(cfg, imp);
  impl_->order = cfg.fe_order;
  impl_->number_dofs();
  impl_->assemble();
}

ScatterSolver::~ScatterSolver() = default;
ScatterSolver::ScatterSolver(ScatterSolver &&) noexcept = default;
ScatterSolver &ScatterSolver::operator=(ScatterSolver &&) noexcept = default;

ScatterSolution ScatterSolver::solve(const IncidentField &inc) const
{
  return std::move(solve(std::span<const IncidentField>(&inc, 1))[0]);
}

std::vector<ScatterSolution> ScatterSolver::solve(std::span<const IncidentField> inc) const
{
  const auto nrhs = static_cast<Eigen::Index>(inc.size());
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(impl_->ndof), nrhs);
  parallel_for(inc.size(), impl_->cfg.threads,
               [&](std::size_t j) { b.col(static_cast<Eigen::Index>(j)) = impl_->rhs(inc[j]); });
  Eigen::MatrixXcd x = impl_->lu.solve(b);
  std::vector<ScatterSolution> out(inc.size());
  parallel_for(inc.size(), impl_->cfg.threads, [&](std::size_t j) {
    const auto c = static_cast<Eigen::Index>(j);
    const double bn = b.col(c).norm();
    const double res =
        bn > 0.0 ? (impl_->matrix * x.col(c) - b.col(c)).norm() / bn : x.col(c).norm();
    if (!(res < 1e-10))
    {
      throw SolveFailure("relative residual " + std::to_string(res) + " exceeds 1e-10");
    }
    out[j] = impl_->postprocess(inc[j], x.col(c), res);
  });
  return out;
}

cplx ScatterSolver::far_field_at(const ScatterSolution &sol, double angle) const
{
  return far_field_samples(sol, std::span<const double>(&angle, 1))[0];
}

Eigen::VectorXcd ScatterSolver::far_field(const ScatterSolution &sol, std::size_t m) const
{
  std::vector<double> angles(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    angles[j] = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
  }
  return far_field_samples(sol, angles);
}

Eigen::VectorXcd ScatterSolver::far_field_samples(const ScatterSolution &sol,
                                                  std::span<const double> angles) const
{
  // u_inf(xhat) = integral of u^s d_nu Phi + (-mu u' Phi' + lambda u Phi) + d_nu u^i Phi
  // with Phi(y) = gamma exp(-i k xhat . y) and u the total field.
  const auto &im = *impl_;
  const std::size_t n = im.mesh.num_obstacle;
  const double k = im.cfg.k;
  const std::size_t np = n * EdgeRule::size;
  std::vector<Vec2> y(np), nu(np), tau(np);
  std::vector<cplx> alpha(np), beta(np), c0(np);
  for (std::size_t e = 0; e < n; ++e)
  {
    const EdgeGeom &geo = im.obstacle_geom[e];
    const std::size_t e1 = (e + 1) % n;
    for (int q = 0; q < EdgeRule::size; ++q)
    {
      const std::size_t idx = e * EdgeRule::size + static_cast<std::size_t>(q);
      const double t = EdgeRule::nodes[static_cast<std::size_t>(q)];
      const double w = EdgeRule::weights[static_cast<std::size_t>(q)] * geo.length;
      const cplx lam = (1.0 - t) * im.imp.lambda[static_cast<Eigen::Index>(e)] +
                       t * im.imp.lambda[static_cast<Eigen::Index>(e1)];
      const cplx mu = (1.0 - t) * im.imp.mu[static_cast<Eigen::Index>(e)] +
                      t * im.imp.mu[static_cast<Eigen::Index>(e1)];
      y[idx] = geo.p0 + t * geo.d;
      nu[idx] = geo.nu;
      tau[idx] = geo.tau;
      cplx dx, dy;
      const cplx ui = sol.incident.value(k, y[idx], dx, dy);
      alpha[idx] = w * (sol.edge.value[idx] - ui);
      beta[idx] = -w * mu * sol.edge.ds[idx];
      c0[idx] = w * (lam * sol.edge.value[idx] + dx * geo.nu.x + dy * geo.nu.y);
    }
  }
  const cplx gamma = farfield_gamma(k);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(angles.size()));
  for (std::size_t j = 0; j < angles.size(); ++j)
  {
    const Vec2 xh{std::cos(angles[j]), std::sin(angles[j])};
    cplx sum = 0.0;
    for (std::size_t p = 0; p < np; ++p)
    {
      const cplx phi = std::polar(1.0, -k * dot(xh, y[p]));
      sum += phi * (alpha[p] * (-I * k * dot(xh, nu[p])) + beta[p] * (-I * k * dot(xh, tau[p])) +
                    c0[p]);
    }
    out[static_cast<Eigen::Index>(j)] = gamma * sum;
  }
  return out;
}

FarField ScatterSolver::far_field(std::span<const ScatterSolution> sols, std::size_t m) const
{
  FarField ff;
  ff.k = impl_->cfg.k;
  ff.radius = impl_->cfg.radius;
  ff.samples.resize(sols.size());
  ff.incident_angles.resize(sols.size());
  parallel_for(sols.size(), impl_->cfg.threads,
               [&](std::size_t j) { ff.samples[j] = far_field(sols[j], m); });
  for (std::size_t j = 0; j < sols.size(); ++j)
  {
    const auto *pw = std::get_if<PlaneWave>(&sols[j].incident.kind);
    ff.incident_angles[j] = pw ? pw->angle : std::numeric_limits<double>::quiet_NaN();
  }
  return ff;
}

cplx ScatterSolver::scattered_at(const ScatterSolution &sol, const Vec2 &x) const
{
  const auto &im = *impl_;
  for (std::size_t t = 0; t < im.mesh.triangles.size(); ++t)
  {
    const auto &tri = im.mesh.triangles[t];
    const std::array<Vec2, 3> p = {im.mesh.vertices[static_cast<std::size_t>(tri[0])],
                                   im.mesh.vertices[static_cast<std::size_t>(tri[1])],
                                   im.mesh.vertices[static_cast<std::size_t>(tri[2])]};
    const double area2 = cross(p[1] - p[0], p[2] - p[0]);
    std::array<double, 3> l;
    for (int i = 0; i < 3; ++i)
    {
      l[i] = cross(p[(i + 2) % 3] - p[(i + 1) % 3], x - p[(i + 1) % 3]) / area2;
    }
    if (l[0] < -1e-12 || l[1] < -1e-12 || l[2] < -1e-12)
    {
      continue;
    }
    std::array<Vec2, 3> g{};
    std::array<double, 6> phi{};
    std::array<Vec2, 6> grad{};
    triangle_basis(im.order, l, g, phi, grad);
    cplx u = 0.0;
    for (int a = 0; a < im.local_count(); ++a)
    {
      u += phi[a] * sol.scattered[im.tri_dofs[t][a]];
    }
    return u;
  }
  throw MeshMismatch("point outside the computational annulus");
}

const ScatterConfig &ScatterSolver::config() const { return impl_->cfg; }
const AnnulusMesh &ScatterSolver::mesh() const { return impl_->mesh; }
const BoundaryCurve &ScatterSolver::curve() const { return impl_->curve; }
const ImpedanceField &ScatterSolver::effective_impedance() const { return impl_->imp; }
std::size_t ScatterSolver::num_dofs() const { return impl_->ndof; }
const Eigen::SparseMatrix<cplx> &ScatterSolver::matrix() const { return impl_->matrix; }

double mixed_reciprocity_residual(const ScatterSolver &solver, double xhat_angle, const Vec2 &z)
{
  const ScatterSolution w = solver.solve(point_source(z));
  const ScatterSolution u = solver.solve(plane_wave(xhat_angle));
  const cplx lhs = solver.far_field_at(w, xhat_angle + pi);
  const cplx rhs = farfield_gamma(solver.config().k) * solver.scattered_at(u, z);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace gibc
