#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gibc/geometry.hpp"

namespace gibc::detail
{

//
// Incremental constrained Delaunay triangulation (Bowyer-Watson insertion, constraint
// recovery by edge flips, region classification by constraint parity, circumcenter
// refinement that never splits constrained segments).
//
class Cdt
{
public:
  struct Tri
  {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};  // neighbor across the edge opposite v[i]
    std::array<bool, 3> con{};
    int region = -1;
    bool alive = true;
  };

  // The super triangle encloses the disk of the given radius around the origin.
  explicit Cdt(double extent);

  // Returns the user vertex index (0-based, excluding the super triangle).
  int insert(const Vec2 &p);
  void insert_constraint(int a, int b);
  // Lawson flips on unconstrained edges until the triangulation is constrained Delaunay.
  void make_delaunay();
  // Region = number of constrained edges crossed on a path from the super triangle.
  void classify_regions();

  struct RefineOptions
  {
    double min_angle_deg = 25.0;
    double max_edge = 0.0;  // 0 disables the size criterion
    int region = 1;
    std::size_t max_insertions = 1000000;
  };
  void refine(const RefineOptions &opt);

  std::size_t num_vertices() const { return pts_.size() - 3; }
  const Vec2 &vertex(int user_index) const { return pts_[static_cast<std::size_t>(user_index) + 3]; }
  // Alive triangles of the region as user vertex index triples (counterclockwise).
  std::vector<std::array<int, 3>> triangles(int region) const;

private:
  int locate(const Vec2 &p, int start) const;
  // Walk toward p without crossing constraints. Returns the containing triangle or -1 and
  // reports the blocking constrained edge.
  int locate_constrained(const Vec2 &p, int start, int &block_tri, int &block_edge) const;
  int insert_internal(const Vec2 &p, int start);
  bool find_edge(int a, int b, int &tri, int &edge) const;
  void flip(int t1, int e1);
  bool incircle(int t, const Vec2 &p) const;
  double orient(int a, int b, const Vec2 &p) const;
  double min_angle(int t) const;
  double max_edge(int t) const;
  Vec2 circumcenter(int t) const;
  bool encroaches(const Vec2 &p, int tri, int edge) const;
  int new_tri();
  void set_back_pointer(int nb, int a, int b, int new_t);

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> vert_tri_;
  int last_ = 0;
  mutable std::vector<int> mark_;
  mutable int stamp_ = 0;
};

}  // namespace gibc::detail
