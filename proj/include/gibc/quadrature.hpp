#pragma once

#include <array>

namespace gibc
{

// Five point Gauss-Legendre rule on [0, 1], exact for polynomials of degree 9.
struct EdgeRule
{
  static constexpr int size = 5;
  static constexpr std::array<double, 5> nodes = {
      0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155, 0.95308992296933200};
  static constexpr std::array<double, 5> weights = {
      0.11846344252809454, 0.23931433524968324, 0.28444444444444444, 0.23931433524968324,
      0.11846344252809454};
};

// Six point rule on the reference triangle in barycentric coordinates, exact for degree 4.
// Weights sum to one (multiply by the triangle area).
struct TriangleRule
{
  static constexpr int size = 6;
  static constexpr double a = 0.445948490915965, b = 0.108103018168070;
  static constexpr double c = 0.091576213509771, d = 0.816847572980459;
  static constexpr double wa = 0.223381589678011, wc = 0.109951743655322;
  static constexpr std::array<std::array<double, 3>, 6> points = {
      {{a, a, b}, {a, b, a}, {b, a, a}, {c, c, d}, {c, d, c}, {d, c, c}}};
  static constexpr std::array<double, 6> weights = {wa, wa, wa, wc, wc, wc};
};

}  // namespace gibc
