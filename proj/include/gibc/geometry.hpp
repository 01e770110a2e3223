#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gibc/errors.hpp"

namespace gibc
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 &operator+=(const Vec2 &o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2 &operator-=(const Vec2 &o)
  {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend bool operator==(const Vec2 &, const Vec2 &) = default;
};

inline Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
inline Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, const Vec2 &a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(const Vec2 &a, double s) { return {s * a.x, s * a.y}; }
inline double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(const Vec2 &a) { return (1.0 / norm(a)) * a; }
// Rotation by -90 degrees: maps the tangent of a counterclockwise curve to its outward normal.
inline Vec2 rotate_cw(const Vec2 &a) { return {a.y, -a.x}; }

double distance_to_segment(const Vec2 &p, const Vec2 &a, const Vec2 &b);
double polygon_signed_area(std::span<const Vec2> pts);
bool point_in_polygon(std::span<const Vec2> pts, const Vec2 &p);
bool segments_intersect(const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &d);
// True when the closed polygon has no pair of non-adjacent intersecting edges.
bool is_simple_polygon(std::span<const Vec2> pts);

//
// Closed counterclockwise polygon describing the obstacle boundary. Node i connects to
// node i+1 and the last node connects back to node 0. Construction validates simplicity
// and orientation.
//
class BoundaryCurve
{
public:
  BoundaryCurve() = default;
  explicit BoundaryCurve(std::vector<Vec2> nodes);

  std::size_t size() const { return nodes_.size(); }
  const Vec2 &operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<Vec2> &nodes() const { return nodes_; }

  std::size_t next(std::size_t i) const { return (i + 1) % nodes_.size(); }
  std::size_t prev(std::size_t i) const { return (i + nodes_.size() - 1) % nodes_.size(); }

  // Length of edge i, from node i to node i+1.
  double edge_length(std::size_t i) const { return norm(nodes_[next(i)] - nodes_[i]); }
  double perimeter() const;
  double signed_area() const { return polygon_signed_area(nodes_); }
  Vec2 centroid() const;
  double max_radius(const Vec2 &center = {}) const;

private:
  std::vector<Vec2> nodes_;
};

// Nodewise differential quantities of the discrete curve.
struct CurveFields
{
  std::vector<double> arclength;    // s_i, cumulative from node 0
  std::vector<double> dual_length;  // half the sum of the two edges adjacent to node i
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;  // outward
  std::vector<double> curvature;
};

// Node displacement x_i -> x_i + tangential_i * tau_i + normal_i * nu_i.
struct Perturbation
{
  Eigen::VectorXd tangential;
  Eigen::VectorXd normal;

  static Perturbation zero(std::size_t n)
  {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  }
  // max_i |eps_tau,i| + |eps_nu,i|
  double max_amplitude() const;
};

// Equal-arclength resampling along a piecewise cubic spline through the nodes. Nodes whose
// turning angle reaches corner_angle are kept as corners and break the spline; straight
// runs between corners stay straight.
BoundaryCurve resample(const BoundaryCurve &curve, std::size_t n,
                       double corner_angle = std::numbers::pi / 6.0);

// Length of the spline interpolant used by resample().
double interpolant_length(const BoundaryCurve &curve,
                          double corner_angle = std::numbers::pi / 6.0);

CurveFields curve_fields(const BoundaryCurve &curve);

// Throws SelfIntersection when the moved polygon is no longer simple.
BoundaryCurve apply_perturbation(const BoundaryCurve &curve, const CurveFields &fields,
                                 const Perturbation &p);

// Smallest edge length or distance between non-adjacent edges.
double local_feature_size(const BoundaryCurve &curve);
bool perturbation_admissible(const BoundaryCurve &curve, const Perturbation &p,
                             double fraction = 0.3);
// Largest ratio between the lengths of two adjacent edges (always >= 1).
double max_adjacent_edge_ratio(const BoundaryCurve &curve);

// Values follow their node: the value at new node i is the value at old node i.
template <class Values>
Values transport_impedance(const Values &values, const BoundaryCurve &old_curve,
                           const BoundaryCurve &new_curve)
{
  if (old_curve.size() != new_curve.size() ||
      static_cast<std::size_t>(values.size()) != old_curve.size())
  {
    throw MeshMismatch("transport_impedance: node count mismatch");
  }
  return values;
}

// Value at the closest point of the old polygon, linear along its edge (used only when a curve
// is resampled during an inversion).
Eigen::VectorXcd interpolate_onto(const BoundaryCurve &from, const Eigen::VectorXcd &values,
                                  const BoundaryCurve &to);

std::vector<double> polar_angles(const BoundaryCurve &curve, const Vec2 &center = {});

BoundaryCurve make_circle(double radius, std::size_t n, const Vec2 &center = {});
BoundaryCurve make_ellipse(double a, double b, std::size_t n, const Vec2 &center = {});
// Star-shaped curve r(theta), resampled to n equal-arclength nodes.
BoundaryCurve make_polar(const std::function<double(double)> &radius, std::size_t n,
                         const Vec2 &center = {});
// L-shaped polygon: the square [-size/2, size/2]^2 without its upper right quadrant.
BoundaryCurve make_l_shape(double size, std::size_t n, const Vec2 &center = {});

void write_curve_csv(std::ostream &os, const BoundaryCurve &curve);
BoundaryCurve read_curve_csv(std::istream &is);

}  // namespace gibc
