#include "gibc/meshing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "cdt.hpp"
#include "gibc/csv.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;
constexpr double min_angle_target = 25.0;
constexpr double min_angle_accept = 20.0;

std::vector<Vec2> outer_polygon(double radius, std::size_t m)
{
  std::vector<Vec2> pts(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    const double t = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
    pts[j] = {radius * std::cos(t), radius * std::sin(t)};
  }
  return pts;
}

// Distance from p to the outer polygon, using only the edges near p's polar angle.
double distance_to_outer(const Vec2 &p, const std::vector<Vec2> &outer)
{
  const std::size_t m = outer.size();
  double ang = std::atan2(p.y, p.x);
  if (ang < 0.0)
  {
    ang += 2.0 * pi;
  }
  const auto j = static_cast<std::size_t>(ang / (2.0 * pi) * static_cast<double>(m)) % m;
  double d = 1e300;
  for (std::size_t k : {j + m - 1, j, j + 1})
  {
    const std::size_t e = k % m;
    d = std::min(d, distance_to_segment(p, outer[e], outer[(e + 1) % m]));
  }
  return d;
}

double signed_area(const Vec2 &a, const Vec2 &b, const Vec2 &c) { return 0.5 * cross(b - a, c - a); }

void check_quality(const AnnulusMesh &mesh)
{
  MeshQuality q = mesh_quality(mesh);
  if (!q.conforming || q.min_area <= 0.0)
  {
    throw QualityFailure("mesh: triangulation is not conforming");
  }
  if (q.min_angle_deg < min_angle_accept)
  {
    throw QualityFailure("mesh: minimum angle " + std::to_string(q.min_angle_deg) +
                         " below 20 degrees");
  }
}

}  // namespace

std::size_t outer_segment_count(double radius, double h)
{
  return static_cast<std::size_t>(std::ceil(2.0 * pi * radius / h - 1e-9));
}

AnnulusMesh triangulate(const BoundaryCurve &curve, double radius, double h, std::uint64_t seed)
{
  if (!(h > 0.0) || !(radius > 0.0))
  {
    throw ConfigError("triangulate: radius and h must be positive");
  }
  if (radius - curve.max_radius() < 2.0 * h)
  {
    throw ClearanceViolation("obstacle closer than 2h to the outer circle");
  }
  const std::size_t n = curve.size();
  const std::size_t m = outer_segment_count(radius, h);
  const std::vector<Vec2> outer = outer_polygon(radius, m);

  detail::Cdt cdt(radius * 1.1);
  for (std::size_t i = 0; i < n; ++i)
  {
    if (cdt.insert(curve[i]) != static_cast<int>(i))
    {
      throw InvalidCurve("triangulate: duplicate obstacle node");
    }
  }
  for (std::size_t j = 0; j < m; ++j)
  {
    if (cdt.insert(outer[j]) != static_cast<int>(n + j))
    {
      throw QualityFailure("triangulate: outer polygon overlaps the obstacle");
    }
  }

  // Jittered hexagonal lattice, kept clear of both boundaries.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto &p : curve.nodes())
  {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double clear = 0.6 * h;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1 * h, 0.1 * h);
  const double dy = 0.5 * std::sqrt(3.0) * h;
  const auto rows = static_cast<long>(std::ceil(radius / dy));
  const auto cols = static_cast<long>(std::ceil(radius / h)) + 1;
  for (long r = -rows; r <= rows; ++r)
  {
    const double shift = (r % 2 == 0) ? 0.0 : 0.5 * h;
    for (long c = -cols; c <= cols; ++c)
    {
      const double jx = jitter(rng), jy = jitter(rng);
      Vec2 p{static_cast<double>(c) * h + shift + jx, static_cast<double>(r) * dy + jy};
      if (norm(p) >= radius || distance_to_outer(p, outer) < clear)
      {
        continue;
      }
      if (p.x > xmin - clear && p.x < xmax + clear && p.y > ymin - clear && p.y < ymax + clear)
      {
        if (point_in_polygon(curve.nodes(), p))
        {
          continue;
        }
        bool near = false;
        for (std::size_t i = 0; i < n && !near; ++i)
        {
          near = distance_to_segment(p, curve[i], curve[curve.next(i)]) < clear;
        }
        if (near)
        {
          continue;
        }
      }
      cdt.insert(p);
    }
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    cdt.insert_constraint(static_cast<int>(i), static_cast<int>((i + 1) % n));
  }
  for (std::size_t j = 0; j < m; ++j)
  {
    cdt.insert_constraint(static_cast<int>(n + j), static_cast<int>(n + (j + 1) % m));
  }
  cdt.make_delaunay();
  cdt.classify_regions();
  detail::Cdt::RefineOptions opt;
  opt.min_angle_deg = min_angle_target;
  opt.max_edge = 1.6 * h;
  opt.region = 1;
  opt.max_insertions = 20 * cdt.num_vertices() + 1000;
  cdt.refine(opt);

  AnnulusMesh mesh;
  mesh.radius = radius;
  mesh.h = h;
  mesh.seed = seed;
  mesh.num_obstacle = n;
  mesh.num_outer = m;
  mesh.triangles = cdt.triangles(1);

  // Drop vertices that ended up outside the annulus while keeping boundary numbering.
  std::vector<int> used(cdt.num_vertices(), 0);
  for (const auto &t : mesh.triangles)
  {
    for (int v : t)
    {
      used[static_cast<std::size_t>(v)] = 1;
    }
  }
  std::vector<int> remap(cdt.num_vertices(), -1);
  for (std::size_t v = 0; v < cdt.num_vertices(); ++v)
  {
    if (v < n + m || used[v])
    {
      remap[v] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(v < n ? curve[v] : cdt.vertex(static_cast<int>(v)));
    }
  }
  for (auto &t : mesh.triangles)
  {
    for (int &v : t)
    {
      v = remap[static_cast<std::size_t>(v)];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    mesh.boundary_edges.push_back(
        {static_cast<int>(i), static_cast<int>((i + 1) % n), EdgeTag::Obstacle});
  }
  for (std::size_t j = 0; j < m; ++j)
  {
    mesh.boundary_edges.push_back(
        {static_cast<int>(n + j), static_cast<int>(n + (j + 1) % m), EdgeTag::Outer});
  }
  check_quality(mesh);
  return mesh;
}

AnnulusMesh remesh_after_update(const AnnulusMesh &old_mesh, const BoundaryCurve &new_curve)
{
  return triangulate(new_curve, old_mesh.radius, old_mesh.h, old_mesh.seed);
}

AnnulusMesh deform_mesh(const AnnulusMesh &mesh, const BoundaryCurve &new_curve)
{
  if (new_curve.size() != mesh.num_obstacle)
  {
    throw MeshMismatch("deform_mesh: curve node count differs from mesh");
  }
  if (mesh.radius - new_curve.max_radius() < 2.0 * mesh.h)
  {
    throw ClearanceViolation("obstacle closer than 2h to the outer circle");
  }
  const std::size_t nv = mesh.vertices.size();
  const std::size_t nb = mesh.num_obstacle + mesh.num_outer;
  // Interior unknowns are numbered after the boundary vertices.
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nv - nb), 2);
  for (const auto &t : mesh.triangles)
  {
    const Vec2 &a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec2 &b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec2 &c = mesh.vertices[static_cast<std::size_t>(t[2])];
    const double area = signed_area(a, b, c);
    const std::array<Vec2, 3> e = {c - b, a - c, b - a};
    for (std::size_t i = 0; i < 3; ++i)
    {
      for (std::size_t j = 0; j < 3; ++j)
      {
        const double kij = dot(e[i], e[j]) / (4.0 * area);
        const auto vi = static_cast<std::size_t>(t[i]), vj = static_cast<std::size_t>(t[j]);
        if (vi < nb)
        {
          continue;
        }
        const auto row = static_cast<Eigen::Index>(vi - nb);
        if (vj < nb)
        {
          if (vj < mesh.num_obstacle)
          {
            const Vec2 d = new_curve[vj] - mesh.vertices[vj];
            rhs(row, 0) -= kij * d.x;
            rhs(row, 1) -= kij * d.y;
          }
          continue;
        }
        trip.emplace_back(row, static_cast<Eigen::Index>(vj - nb), kij);
      }
    }
  }
  AnnulusMesh out = mesh;
  for (std::size_t i = 0; i < mesh.num_obstacle; ++i)
  {
    out.vertices[i] = new_curve[i];
  }
  if (nv > nb)
  {
    Eigen::SparseMatrix<double> k(static_cast<Eigen::Index>(nv - nb),
                                  static_cast<Eigen::Index>(nv - nb));
    k.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(k);
    if (solver.info() != Eigen::Success)
    {
      throw SolveFailure("deform_mesh: factorization failed");
    }
    Eigen::MatrixXd disp = solver.solve(rhs);
    for (std::size_t v = nb; v < nv; ++v)
    {
      const auto r = static_cast<Eigen::Index>(v - nb);
      out.vertices[v] = mesh.vertices[v] + Vec2{disp(r, 0), disp(r, 1)};
    }
  }
  for (const auto &t : out.triangles)
  {
    if (signed_area(out.vertices[static_cast<std::size_t>(t[0])],
                    out.vertices[static_cast<std::size_t>(t[1])],
                    out.vertices[static_cast<std::size_t>(t[2])]) <= 0.0)
    {
      throw QualityFailure("deform_mesh: triangle inverted");
    }
  }
  return out;
}

MeshQuality mesh_quality(const AnnulusMesh &mesh)
{
  MeshQuality q;
  q.min_angle_deg = 180.0;
  q.max_angle_deg = 0.0;
  q.min_area = 1e300;
  std::map<std::pair<int, int>, int> edges;
  for (const auto &t : mesh.triangles)
  {
    const Vec2 &a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec2 &b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec2 &c = mesh.vertices[static_cast<std::size_t>(t[2])];
    q.min_area = std::min(q.min_area, signed_area(a, b, c));
    for (std::size_t i = 0; i < 3; ++i)
    {
      const Vec2 &p = mesh.vertices[static_cast<std::size_t>(t[i])];
      const Vec2 u = mesh.vertices[static_cast<std::size_t>(t[(i + 1) % 3])] - p;
      const Vec2 v = mesh.vertices[static_cast<std::size_t>(t[(i + 2) % 3])] - p;
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / pi;
      q.min_angle_deg = std::min(q.min_angle_deg, ang);
      q.max_angle_deg = std::max(q.max_angle_deg, ang);
      q.max_edge = std::max(q.max_edge, norm(u));
      const int x = std::min(t[i], t[(i + 1) % 3]), y = std::max(t[i], t[(i + 1) % 3]);
      ++edges[{x, y}];
    }
  }
  q.conforming = true;
  std::size_t singles = 0;
  for (const auto &[e, count] : edges)
  {
    if (count > 2)
    {
      q.conforming = false;
    }
    if (count == 1)
    {
      ++singles;
    }
  }
  for (const auto &be : mesh.boundary_edges)
  {
    auto it = edges.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == edges.end() || it->second != 1)
    {
      q.conforming = false;
    }
  }
  if (singles != mesh.boundary_edges.size())
  {
    q.conforming = false;
  }
  q.euler_characteristic = static_cast<int>(mesh.vertices.size()) -
                           static_cast<int>(edges.size()) +
                           static_cast<int>(mesh.triangles.size());
  return q;
}

void write_mesh_csv(std::ostream &os, const AnnulusMesh &mesh)
{
  os << "# mesh v1\n";
  os << "# radius=" << csv::format(mesh.radius) << " h=" << csv::format(mesh.h)
     << " seed=" << mesh.seed << " obstacle=" << mesh.num_obstacle << " outer=" << mesh.num_outer
     << '\n';
  os << "# vertices\nx,y\n";
  for (const auto &p : mesh.vertices)
  {
    os << csv::format(p.x) << ',' << csv::format(p.y) << '\n';
  }
  os << "# triangles\na,b,c\n";
  for (const auto &t : mesh.triangles)
  {
    os << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  }
  os << "# edges\na,b,tag\n";
  for (const auto &e : mesh.boundary_edges)
  {
    os << e.a << ',' << e.b << ',' << (e.tag == EdgeTag::Obstacle ? "obstacle" : "outer") << '\n';
  }
}

}  // namespace gibc
