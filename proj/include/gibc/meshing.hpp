#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gibc/geometry.hpp"

namespace gibc
{

enum class EdgeTag
{
  Obstacle,
  Outer
};

struct TaggedEdge
{
  int a = 0;
  int b = 0;
  EdgeTag tag = EdgeTag::Obstacle;
};

//
// Triangulation of the annulus between the obstacle boundary and the polygonal outer circle.
// Vertex i for i < num_obstacle is curve node i (bit-exact copy); the next num_outer
// vertices are the outer polygon, counterclockwise starting at angle 0.
// Obstacle edge i joins vertices i and i+1 (mod num_obstacle), outer edge j joins
// num_obstacle + j and num_obstacle + j + 1.
//
struct AnnulusMesh
{
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<TaggedEdge> boundary_edges;     // obstacle edges first, then outer edges
  std::size_t num_obstacle = 0;
  std::size_t num_outer = 0;
  double radius = 1.0;
  double h = 0.05;
  std::uint64_t seed = 0;

  int obstacle_vertex(std::size_t node) const { return static_cast<int>(node); }
  int outer_vertex(std::size_t j) const { return static_cast<int>(num_obstacle + j); }
};

struct MeshQuality
{
  double min_angle_deg = 0.0;
  double max_angle_deg = 0.0;
  double min_area = 0.0;
  double max_edge = 0.0;
  bool conforming = false;  // every edge in at most two triangles, tagged edges in exactly one
  int euler_characteristic = 0;
};

// Outer polygon segment count for radius R and target size h.
std::size_t outer_segment_count(double radius, double h);

AnnulusMesh triangulate(const BoundaryCurve &curve, double radius, double h,
                        std::uint64_t seed = 0);
AnnulusMesh remesh_after_update(const AnnulusMesh &old_mesh, const BoundaryCurve &new_curve);

// Same connectivity, interior vertices moved by the discrete harmonic extension of the
// obstacle node displacement. Throws QualityFailure if a triangle inverts.
AnnulusMesh deform_mesh(const AnnulusMesh &mesh, const BoundaryCurve &new_curve);

MeshQuality mesh_quality(const AnnulusMesh &mesh);

void write_mesh_csv(std::ostream &os, const AnnulusMesh &mesh);

}  // namespace gibc
