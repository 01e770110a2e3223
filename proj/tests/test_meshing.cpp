#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gibc/meshing.hpp"

using namespace gibc;

namespace
{

BoundaryCurve circle_for(double a, double h)
{
  const auto n = static_cast<std::size_t>(std::ceil(2 * std::numbers::pi * a / h));
  return make_circle(a, n);
}

void check_invariants(const AnnulusMesh &mesh, const BoundaryCurve &curve)
{
  MeshQuality q = mesh_quality(mesh);
  CHECK(q.conforming);
  CHECK(q.min_area > 0.0);
  CHECK(q.min_angle_deg >= 20.0);
  CHECK(q.euler_characteristic == 0);
  for (std::size_t i = 0; i < curve.size(); ++i)
  {
    CHECK(mesh.vertices[i] == curve[i]);
  }
  // Each obstacle node lies on exactly two tagged edges.
  std::vector<int> count(curve.size(), 0);
  for (const auto &e : mesh.boundary_edges)
  {
    if (e.tag == EdgeTag::Obstacle)
    {
      ++count[static_cast<std::size_t>(e.a)];
      ++count[static_cast<std::size_t>(e.b)];
    }
  }
  for (int c : count)
  {
    CHECK(c == 2);
  }
}

}  // namespace

TEST_CASE("circle annulus")
{
  BoundaryCurve c = circle_for(0.3, 0.05);
  AnnulusMesh mesh = triangulate(c, 1.0, 0.05);
  check_invariants(mesh, c);
  for (const auto &p : mesh.vertices)
  {
    CHECK(norm(p) >= 0.3 * std::cos(std::numbers::pi / static_cast<double>(c.size())) - 1e-12);
    CHECK(norm(p) <= 1.0 + 0.05);
  }
  CHECK(mesh.num_outer == outer_segment_count(1.0, 0.05));
}

TEST_CASE("halving h grows the triangle count by about four")
{
  AnnulusMesh coarse = triangulate(circle_for(0.3, 0.05), 1.0, 0.05);
  AnnulusMesh fine = triangulate(circle_for(0.3, 0.025), 1.0, 0.025);
  // Triangle count of a quasi-uniform mesh scales like area / h^2.
  const double ratio = static_cast<double>(fine.triangles.size()) /
                       static_cast<double>(coarse.triangles.size());
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("other shapes")
{
  BoundaryCurve l = make_l_shape(0.5, 50);
  AnnulusMesh ml = triangulate(l, 1.0, 0.04, 3);
  check_invariants(ml, l);

  BoundaryCurve t = make_polar([](double th) { return 0.3 + 0.08 * std::cos(3 * th); }, 100);
  AnnulusMesh mt = triangulate(t, 1.0, 0.02, 7);
  check_invariants(mt, t);

  // Curve much finer than the interior target size.
  BoundaryCurve fine = make_circle(0.3, 240);
  AnnulusMesh mf = triangulate(fine, 1.0, 0.05);
  check_invariants(mf, fine);
}

TEST_CASE("clearance")
{
  CHECK_THROWS_AS(triangulate(make_circle(0.95, 64), 1.0, 0.05), ClearanceViolation);
  CHECK_THROWS_AS(triangulate(make_circle(1.0, 64), 1.0, 0.05), ClearanceViolation);
}

TEST_CASE("determinism and remeshing")
{
  BoundaryCurve c = circle_for(0.3, 0.04);
  AnnulusMesh a = triangulate(c, 1.0, 0.04, 11);
  AnnulusMesh b = triangulate(c, 1.0, 0.04, 11);
  CHECK(a.vertices == b.vertices);
  CHECK(a.triangles == b.triangles);

  AnnulusMesh r = remesh_after_update(a, c);
  CHECK(r.vertices == a.vertices);

  CurveFields f = curve_fields(c);
  auto p = Perturbation::zero(c.size());
  p.normal.setConstant(0.01);
  BoundaryCurve grown = apply_perturbation(c, f, p);
  AnnulusMesh g = remesh_after_update(a, grown);
  check_invariants(g, grown);

  p.normal.setConstant(0.65);
  CHECK_THROWS_AS(remesh_after_update(a, apply_perturbation(c, f, p)), ClearanceViolation);
}

TEST_CASE("mesh deformation keeps connectivity")
{
  BoundaryCurve c = circle_for(0.3, 0.05);
  AnnulusMesh a = triangulate(c, 1.0, 0.05);
  CurveFields f = curve_fields(c);
  auto p = Perturbation::zero(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
  {
    p.normal[static_cast<Eigen::Index>(i)] = 0.01 * std::cos(3.0 * static_cast<double>(i));
  }
  BoundaryCurve moved = apply_perturbation(c, f, p);
  AnnulusMesh d = deform_mesh(a, moved);
  CHECK(d.triangles == a.triangles);
  for (std::size_t i = 0; i < c.size(); ++i)
  {
    CHECK(d.vertices[i] == moved[i]);
  }
  for (std::size_t j = 0; j < a.num_outer; ++j)
  {
    CHECK(d.vertices[a.num_obstacle + j] == a.vertices[a.num_obstacle + j]);
  }
  CHECK(mesh_quality(d).min_area > 0.0);
}

TEST_CASE("mesh csv")
{
  AnnulusMesh a = triangulate(circle_for(0.3, 0.1), 1.0, 0.1);
  std::ostringstream os;
  write_mesh_csv(os, a);
  CHECK(os.str().rfind("# mesh v1", 0) == 0);
}
