#include "gibc/geometry.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "gibc/csv.hpp"

namespace gibc
{

namespace
{

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

// 8-point Gauss-Legendre rule on [0, 1].
constexpr std::array<double, 8> gauss8_x = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.4082826787521751,
    0.5917173212478249,   0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> gauss8_w = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894363, 0.18134189168918100,
    0.18134189168918100, 0.15685332293894363, 0.11119051722668724, 0.05061426814518813};

int orientation(const Vec2 &a, const Vec2 &b, const Vec2 &c)
{
  double v = cross(b - a, c - a);
  double scale = std::max({norm(b - a), norm(c - a), 1e-300});
  if (std::abs(v) <= 1e-14 * scale * scale)
  {
    return 0;
  }
  return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2 &a, const Vec2 &b, const Vec2 &p)
{
  return std::min(a.x, b.x) - 1e-15 <= p.x && p.x <= std::max(a.x, b.x) + 1e-15 &&
         std::min(a.y, b.y) - 1e-15 <= p.y && p.y <= std::max(a.y, b.y) + 1e-15;
}

double segment_distance(const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &d)
{
  if (segments_intersect(a, b, c, d))
  {
    return 0.0;
  }
  return std::min({distance_to_segment(a, c, d), distance_to_segment(b, c, d),
                   distance_to_segment(c, a, b), distance_to_segment(d, a, b)});
}

// Closed curve through the nodes, interpolated by a trigonometric polynomial in the node
// index. Exact for circles sampled at equal angles.
class TrigCurve
{
public:
  explicit TrigCurve(const std::vector<Vec2> &nodes) : n_(nodes.size()), coef_(nodes.size())
  {
    const auto n = static_cast<int>(n_);
    for (int m = 0; m < n; ++m)
    {
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j)
      {
        double ang = -2.0 * pi * static_cast<double>((static_cast<long>(m) * j) % n) / n;
        sum += cplx(nodes[j].x, nodes[j].y) * std::polar(1.0, ang);
      }
      coef_[m] = sum / static_cast<double>(n);
    }
  }

  std::size_t size() const { return n_; }

  // Position (and derivative with respect to t) at parameter t in [0, n).
  void eval(double t, Vec2 &pos, Vec2 &der) const
  {
    const auto n = static_cast<int>(n_);
    const double w = 2.0 * pi / n;
    cplx z = coef_[0], dz = 0.0;
    cplx e1 = std::polar(1.0, w * t);
    cplx ep = e1;
    const int half = n / 2;
    for (int m = 1; m <= half; ++m)
    {
      cplx em = std::conj(ep);
      cplx cp = coef_[m];
      cplx cm = coef_[(n - m) % n];
      if (2 * m == n)
      {
        // Nyquist mode split evenly between +m and -m.
        cp *= 0.5;
        cm = cp;
      }
      z += cp * ep + cm * em;
      dz += cplx(0.0, m * w) * (cp * ep - cm * em);
      ep *= e1;
    }
    pos = {z.real(), z.imag()};
    der = {dz.real(), dz.imag()};
  }

  double speed(double t) const
  {
    Vec2 p, d;
    eval(t, p, d);
    return norm(d);
  }

  Vec2 position(double t) const
  {
    Vec2 p, d;
    eval(t, p, d);
    return p;
  }

private:
  std::size_t n_;
  std::vector<cplx> coef_;
};

// Natural cubic spline through an open chain of points, parameterized by chord length.
class OpenSpline
{
public:
  explicit OpenSpline(const std::vector<Vec2> &pts) : pts_(pts)
  {
    const std::size_t m = pts.size();
    t_.assign(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
    {
      t_[i] = t_[i - 1] + norm(pts[i] - pts[i - 1]);
    }
    second_.assign(m, Vec2{});
    if (m < 3)
    {
      return;
    }
    // Tridiagonal system for second derivatives with natural end conditions.
    std::vector<double> diag(m, 1.0), upper(m, 0.0), lower(m, 0.0);
    std::vector<Vec2> rhs(m, Vec2{});
    for (std::size_t i = 1; i + 1 < m; ++i)
    {
      double h0 = t_[i] - t_[i - 1];
      double h1 = t_[i + 1] - t_[i];
      lower[i] = h0 / 6.0;
      diag[i] = (h0 + h1) / 3.0;
      upper[i] = h1 / 6.0;
      rhs[i] = (1.0 / h1) * (pts[i + 1] - pts[i]) - (1.0 / h0) * (pts[i] - pts[i - 1]);
    }
    for (std::size_t i = 1; i < m; ++i)
    {
      double f = lower[i] / diag[i - 1];
      diag[i] -= f * upper[i - 1];
      rhs[i] -= f * rhs[i - 1];
    }
    second_[m - 1] = (1.0 / diag[m - 1]) * rhs[m - 1];
    for (std::size_t i = m - 1; i-- > 0;)
    {
      second_[i] = (1.0 / diag[i]) * (rhs[i] - upper[i] * second_[i + 1]);
    }
  }

  std::size_t segments() const { return pts_.size() - 1; }
  double param(std::size_t i) const { return t_[i]; }

  void eval(std::size_t seg, double t, Vec2 &pos, Vec2 &der) const
  {
    const double h = t_[seg + 1] - t_[seg];
    const double a = (t_[seg + 1] - t) / h;
    const double b = (t - t_[seg]) / h;
    const Vec2 &p0 = pts_[seg], &p1 = pts_[seg + 1];
    const Vec2 &m0 = second_[seg], &m1 = second_[seg + 1];
    pos = a * p0 + b * p1 + (h * h / 6.0) * ((a * a * a - a) * m0 + (b * b * b - b) * m1);
    der = (1.0 / h) * (p1 - p0) + (h / 6.0) * ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1);
  }

private:
  std::vector<Vec2> pts_;
  std::vector<double> t_;
  std::vector<Vec2> second_;
};

// Generic arclength machinery over a piecewise parameterization: segment i spans
// parameters [lo_i, hi_i] and eval(i, t) returns position and derivative.
template <class Eval>
struct ArcTable
{
  std::vector<double> lo, hi, cum;  // cum[i] = length before segment i
  Eval eval;

  double segment_length(std::size_t i, double a, double b) const
  {
    double sum = 0.0;
    for (std::size_t q = 0; q < gauss8_x.size(); ++q)
    {
      Vec2 p, d;
      eval(i, a + (b - a) * gauss8_x[q], p, d);
      sum += gauss8_w[q] * norm(d);
    }
    return sum * (b - a);
  }

  void build()
  {
    cum.assign(lo.size() + 1, 0.0);
    for (std::size_t i = 0; i < lo.size(); ++i)
    {
      cum[i + 1] = cum[i] + segment_length(i, lo[i], hi[i]);
    }
  }

  double total() const { return cum.back(); }

  // Point at arclength s measured from the start of the chain.
  Vec2 point_at(double s) const
  {
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t i = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
    i = std::min(i, lo.size() - 1);
    double target = s - cum[i];
    double a = lo[i], b = hi[i];
    double seglen = cum[i + 1] - cum[i];
    double t = a + (b - a) * std::clamp(target / seglen, 0.0, 1.0);
    double tl = a, tr = b;
    for (int iter = 0; iter < 60; ++iter)
    {
      double f = segment_length(i, a, t) - target;
      if (f > 0.0)
      {
        tr = t;
      }
      else
      {
        tl = t;
      }
      Vec2 p, d;
      eval(i, t, p, d);
      double sp = norm(d);
      double tn = t - f / sp;
      if (!(tn > tl && tn < tr))
      {
        tn = 0.5 * (tl + tr);
      }
      if (std::abs(tn - t) <= 1e-15 * (std::abs(b - a) + 1.0))
      {
        t = tn;
        break;
      }
      t = tn;
    }
    Vec2 p, d;
    eval(i, t, p, d);
    return p;
  }
};

auto make_trig_table(const TrigCurve &curve)
{
  auto ev = [&curve](std::size_t, double t, Vec2 &p, Vec2 &d) { curve.eval(t, p, d); };
  ArcTable<decltype(ev)> table{{}, {}, {}, ev};
  for (std::size_t i = 0; i < curve.size(); ++i)
  {
    table.lo.push_back(static_cast<double>(i));
    table.hi.push_back(static_cast<double>(i + 1));
  }
  table.build();
  return table;
}

auto make_spline_table(const OpenSpline &spline)
{
  auto ev = [&spline](std::size_t i, double t, Vec2 &p, Vec2 &d) { spline.eval(i, t, p, d); };
  ArcTable<decltype(ev)> table{{}, {}, {}, ev};
  for (std::size_t i = 0; i < spline.segments(); ++i)
  {
    table.lo.push_back(spline.param(i));
    table.hi.push_back(spline.param(i + 1));
  }
  table.build();
  return table;
}

std::vector<std::size_t> detect_corners(const std::vector<Vec2> &nodes, double corner_angle)
{
  std::vector<std::size_t> corners;
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    Vec2 a = nodes[i] - nodes[(i + n - 1) % n];
    Vec2 b = nodes[(i + 1) % n] - nodes[i];
    double turn = std::atan2(cross(a, b), dot(a, b));
    if (std::abs(turn) >= corner_angle - 1e-12)
    {
      corners.push_back(i);
    }
  }
  return corners;
}

bool is_straight(const std::vector<Vec2> &pts)
{
  const Vec2 a = pts.front(), b = pts.back();
  const double len = norm(b - a);
  if (len == 0.0)
  {
    return false;
  }
  for (std::size_t i = 1; i + 1 < pts.size(); ++i)
  {
    if (std::abs(cross(b - a, pts[i] - a)) / len > 1e-12 * len)
    {
      return false;
    }
  }
  return true;
}

// Split n nodes among pieces proportionally to length by the largest remainder method.
std::vector<std::size_t> distribute(const std::vector<double> &lengths, std::size_t n)
{
  const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  const std::size_t p = lengths.size();
  std::vector<std::size_t> counts(p);
  std::vector<std::pair<double, std::size_t>> rema;
  std::size_t used = 0;
  for (std::size_t i = 0; i < p; ++i)
  {
    double quota = static_cast<double>(n) * lengths[i] / total;
    double fl = std::floor(quota + 1e-9);
    counts[i] = std::max<std::size_t>(1, static_cast<std::size_t>(fl));
    used += counts[i];
    rema.emplace_back(quota - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(rema.begin(), rema.end(),
                   [](const auto &x, const auto &y) { return x.first > y.first; });
  for (std::size_t k = 0; used < n; ++k)
  {
    ++counts[rema[k % p].second];
    ++used;
  }
  // Pieces forced up to one node may overshoot; take nodes back from the least deserving.
  for (std::size_t k = p; used > n && k-- > 0;)
  {
    std::size_t idx = rema[k].second;
    if (counts[idx] > 1)
    {
      --counts[idx];
      --used;
    }
  }
  if (used != n)
  {
    throw InvalidCurve("resample: too few nodes for the number of corners");
  }
  return counts;
}

struct PieceLayout
{
  std::vector<std::vector<Vec2>> pieces;  // each from one corner to the next, inclusive
};

PieceLayout split_at_corners(const std::vector<Vec2> &nodes, const std::vector<std::size_t> &corners)
{
  PieceLayout layout;
  const std::size_t n = nodes.size();
  for (std::size_t c = 0; c < corners.size(); ++c)
  {
    std::size_t start = corners[c];
    std::size_t stop = corners[(c + 1) % corners.size()];
    std::vector<Vec2> piece{nodes[start]};
    std::size_t i = start;
    do
    {
      i = (i + 1) % n;
      piece.push_back(nodes[i]);
    } while (i != stop);
    layout.pieces.push_back(std::move(piece));
  }
  return layout;
}

double piece_length(const std::vector<Vec2> &piece)
{
  if (is_straight(piece))
  {
    return norm(piece.back() - piece.front());
  }
  OpenSpline spline(piece);
  return make_spline_table(spline).total();
}

// One resampling pass. Returns the new nodes; corners (if any) are reported as indices in
// the output.
std::vector<Vec2> resample_pass(const std::vector<Vec2> &nodes, std::vector<std::size_t> &corners,
                                std::size_t n)
{
  std::vector<Vec2> out;
  out.reserve(n);
  if (corners.empty())
  {
    TrigCurve curve(nodes);
    auto table = make_trig_table(curve);
    const double total = table.total();
    for (std::size_t j = 0; j < n; ++j)
    {
      out.push_back(j == 0 ? curve.position(0.0)
                           : table.point_at(total * static_cast<double>(j) / n));
    }
    return out;
  }

  PieceLayout layout = split_at_corners(nodes, corners);
  std::vector<double> lengths;
  for (const auto &piece : layout.pieces)
  {
    lengths.push_back(piece_length(piece));
  }
  auto counts = distribute(lengths, n);
  std::vector<std::size_t> new_corners;
  for (std::size_t p = 0; p < layout.pieces.size(); ++p)
  {
    const auto &piece = layout.pieces[p];
    new_corners.push_back(out.size());
    const std::size_t m = counts[p];
    if (is_straight(piece))
    {
      const Vec2 a = piece.front(), b = piece.back();
      for (std::size_t j = 0; j < m; ++j)
      {
        double f = static_cast<double>(j) / static_cast<double>(m);
        out.push_back(a + f * (b - a));
      }
      continue;
    }
    OpenSpline spline(piece);
    auto table = make_spline_table(spline);
    out.push_back(piece.front());
    for (std::size_t j = 1; j < m; ++j)
    {
      out.push_back(table.point_at(table.total() * static_cast<double>(j) / m));
    }
  }
  corners = std::move(new_corners);
  return out;
}

double max_displacement(const std::vector<Vec2> &a, const std::vector<Vec2> &b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    d = std::max(d, norm(a[i] - b[i]));
  }
  return d;
}

}  // namespace

double distance_to_segment(const Vec2 &p, const Vec2 &a, const Vec2 &b)
{
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0)
  {
    return norm(p - a);
  }
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double polygon_signed_area(std::span<const Vec2> pts)
{
  double area = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
  {
    area += cross(pts[i], pts[(i + 1) % pts.size()]);
  }
  return 0.5 * area;
}

bool point_in_polygon(std::span<const Vec2> pts, const Vec2 &p)
{
  bool inside = false;
  for (std::size_t i = 0, j = pts.size() - 1; i < pts.size(); j = i++)
  {
    if ((pts[i].y > p.y) != (pts[j].y > p.y))
    {
      double x = pts[j].x + (p.y - pts[j].y) * (pts[i].x - pts[j].x) / (pts[i].y - pts[j].y);
      if (p.x < x)
      {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool segments_intersect(const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &d)
{
  int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 && (o1 != 0 || o2 != 0))
  {
    return true;
  }
  if (o1 == 0 && on_segment(a, b, c))
  {
    return true;
  }
  if (o2 == 0 && on_segment(a, b, d))
  {
    return true;
  }
  if (o3 == 0 && on_segment(c, d, a))
  {
    return true;
  }
  if (o4 == 0 && on_segment(c, d, b))
  {
    return true;
  }
  return false;
}

bool is_simple_polygon(std::span<const Vec2> pts)
{
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    const Vec2 &a = pts[i], &b = pts[(i + 1) % n];
    if (a == b)
    {
      return false;
    }
    for (std::size_t j = i + 2; j < n; ++j)
    {
      if (i == 0 && j == n - 1)
      {
        continue;
      }
      const Vec2 &c = pts[j], &d = pts[(j + 1) % n];
      // Cheap bounding-box rejection before the exact test.
      if (std::max(a.x, b.x) < std::min(c.x, d.x) || std::max(c.x, d.x) < std::min(a.x, b.x) ||
          std::max(a.y, b.y) < std::min(c.y, d.y) || std::max(c.y, d.y) < std::min(a.y, b.y))
      {
        continue;
      }
      if (segments_intersect(a, b, c, d))
      {
        return false;
      }
    }
  }
  return true;
}

BoundaryCurve::BoundaryCurve(std::vector<Vec2> nodes) : nodes_(std::move(nodes))
{
  if (nodes_.size() < 3)
  {
    throw InvalidCurve("boundary curve needs at least 3 nodes");
  }
  for (const auto &p : nodes_)
  {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
    {
      throw InvalidCurve("boundary curve has non-finite node");
    }
  }
  if (!is_simple_polygon(nodes_))
  {
    throw SelfIntersection("boundary curve self-intersects");
  }
  if (signed_area() <= 0.0)
  {
    throw InvalidCurve("boundary curve must be counterclockwise");
  }
}

double BoundaryCurve::perimeter() const
{
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
  {
    p += edge_length(i);
  }
  return p;
}

Vec2 BoundaryCurve::centroid() const
{
  double a = 0.0;
  Vec2 c{};
  for (std::size_t i = 0; i < size(); ++i)
  {
    const Vec2 &p = nodes_[i], &q = nodes_[next(i)];
    double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  return (1.0 / (3.0 * a)) * c;
}

double BoundaryCurve::max_radius(const Vec2 &center) const
{
  double r = 0.0;
  for (const auto &p : nodes_)
  {
    r = std::max(r, norm(p - center));
  }
  return r;
}

double Perturbation::max_amplitude() const
{
  return (tangential.cwiseAbs() + normal.cwiseAbs()).maxCoeff();
}

BoundaryCurve resample(const BoundaryCurve &curve, std::size_t n, double corner_angle)
{
  if (n < 3)
  {
    throw InvalidCurve("resample: too few nodes requested");
  }
  std::vector<std::size_t> corners = detect_corners(curve.nodes(), corner_angle);
  std::vector<Vec2> nodes = resample_pass(curve.nodes(), corners, n);
  double scale = curve.max_radius(curve.centroid());
  // Iterate to the fixed point so that resampling a resampled curve leaves it in place.
  for (int iter = 0; iter < 100; ++iter)
  {
    std::vector<std::size_t> c = corners;
    std::vector<Vec2> next = resample_pass(nodes, c, n);
    double moved = max_displacement(next, nodes);
    nodes = std::move(next);
    corners = std::move(c);
    if (moved <= 1e-14 * scale)
    {
      break;
    }
  }
  return BoundaryCurve(std::move(nodes));
}

double interpolant_length(const BoundaryCurve &curve, double corner_angle)
{
  std::vector<std::size_t> corners = detect_corners(curve.nodes(), corner_angle);
  if (corners.empty())
  {
    TrigCurve trig(curve.nodes());
    return make_trig_table(trig).total();
  }
  double total = 0.0;
  for (const auto &piece : split_at_corners(curve.nodes(), corners).pieces)
  {
    total += piece_length(piece);
  }
  return total;
}

CurveFields curve_fields(const BoundaryCurve &curve)
{
  const std::size_t n = curve.size();
  CurveFields f;
  f.arclength.resize(n);
  f.dual_length.resize(n);
  f.tangent.resize(n);
  f.normal.resize(n);
  f.curvature.resize(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    f.arclength[i] = s;
    s += curve.edge_length(i);
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    const Vec2 a = curve[i] - curve[curve.prev(i)];
    const Vec2 b = curve[curve.next(i)] - curve[i];
    const double la = norm(a), lb = norm(b);
    f.dual_length[i] = 0.5 * (la + lb);
    // Tangent of the parabola through the three nodes, parameterized by chord length.
    Vec2 t = normalized((la * la) * b + (lb * lb) * a);
    f.tangent[i] = t;
    f.normal[i] = rotate_cw(t);
    const double lc = norm(curve[curve.next(i)] - curve[curve.prev(i)]);
    const double c = cross(a, b);
    f.curvature[i] = (lc == 0.0 || std::abs(c) <= 1e-15 * la * lb) ? 0.0 : 2.0 * c / (la * lb * lc);
  }
  return f;
}

BoundaryCurve apply_perturbation(const BoundaryCurve &curve, const CurveFields &fields,
                                 const Perturbation &p)
{
  const std::size_t n = curve.size();
  if (static_cast<std::size_t>(p.tangential.size()) != n ||
      static_cast<std::size_t>(p.normal.size()) != n)
  {
    throw MeshMismatch("apply_perturbation: size mismatch");
  }
  std::vector<Vec2> nodes(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto k = static_cast<Eigen::Index>(i);
    nodes[i] = curve[i] + p.tangential[k] * fields.tangent[i] + p.normal[k] * fields.normal[i];
  }
  if (!is_simple_polygon(nodes) || polygon_signed_area(nodes) <= 0.0)
  {
    throw SelfIntersection("perturbed boundary self-intersects");
  }
  return BoundaryCurve(std::move(nodes));
}

double local_feature_size(const BoundaryCurve &curve)
{
  const std::size_t n = curve.size();
  double lfs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
  {
    lfs = std::min(lfs, curve.edge_length(i));
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    const Vec2 &a = curve[i], &b = curve[curve.next(i)];
    for (std::size_t j = i + 2; j < n; ++j)
    {
      if (i == 0 && j == n - 1)
      {
        continue;
      }
      const Vec2 &c = curve[j], &d = curve[curve.next(j)];
      double box = std::max({std::min(c.x, d.x) - std::max(a.x, b.x),
                             std::min(a.x, b.x) - std::max(c.x, d.x),
                             std::min(c.y, d.y) - std::max(a.y, b.y),
                             std::min(a.y, b.y) - std::max(c.y, d.y)});
      if (box >= lfs)
      {
        continue;
      }
      lfs = std::min(lfs, segment_distance(a, b, c, d));
    }
  }
  return lfs;
}

bool perturbation_admissible(const BoundaryCurve &curve, const Perturbation &p, double fraction)
{
  return p.max_amplitude() < fraction * local_feature_size(curve);
}

double max_adjacent_edge_ratio(const BoundaryCurve &curve)
{
  double r = 1.0;
  for (std::size_t i = 0; i < curve.size(); ++i)
  {
    double a = curve.edge_length(curve.prev(i)), b = curve.edge_length(i);
    r = std::max(r, std::max(a / b, b / a));
  }
  return r;
}

Eigen::VectorXcd interpolate_onto(const BoundaryCurve &from, const Eigen::VectorXcd &values,
                                  const BoundaryCurve &to)
{
  const std::size_t n = from.size();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(to.size()));
  for (std::size_t i = 0; i < to.size(); ++i)
  {
    double best = 1e300, w = 0.0;
    std::size_t edge = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
      const Vec2 a = from[j], d = from[from.next(j)] - a;
      const double t = std::clamp(dot(to[i] - a, d) / dot(d, d), 0.0, 1.0);
      const double dist = norm(a + t * d - to[i]);
      if (dist < best)
      {
        best = dist;
        edge = j;
        w = t;
      }
    }
    out[static_cast<Eigen::Index>(i)] = (1.0 - w) * values[static_cast<Eigen::Index>(edge)] +
                                        w * values[static_cast<Eigen::Index>(from.next(edge))];
  }
  return out;
}

std::vector<double> polar_angles(const BoundaryCurve &curve, const Vec2 &center)
{
  std::vector<double> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i)
  {
    Vec2 d = curve[i] - center;
    out[i] = std::atan2(d.y, d.x);
  }
  return out;
}

BoundaryCurve make_circle(double radius, std::size_t n, const Vec2 &center)
{
  std::vector<Vec2> nodes(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
    nodes[i] = center + Vec2{radius * std::cos(t), radius * std::sin(t)};
  }
  return BoundaryCurve(std::move(nodes));
}

BoundaryCurve make_ellipse(double a, double b, std::size_t n, const Vec2 &center)
{
  const std::size_t dense = std::max<std::size_t>(4 * n, 256);
  std::vector<Vec2> nodes(dense);
  for (std::size_t i = 0; i < dense; ++i)
  {
    double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(dense);
    nodes[i] = center + Vec2{a * std::cos(t), b * std::sin(t)};
  }
  return resample(BoundaryCurve(std::move(nodes)), n);
}

BoundaryCurve make_polar(const std::function<double(double)> &radius, std::size_t n,
                         const Vec2 &center)
{
  const std::size_t dense = std::max<std::size_t>(4 * n, 256);
  std::vector<Vec2> nodes(dense);
  for (std::size_t i = 0; i < dense; ++i)
  {
    double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(dense);
    double r = radius(t);
    nodes[i] = center + Vec2{r * std::cos(t), r * std::sin(t)};
  }
  return resample(BoundaryCurve(std::move(nodes)), n);
}

BoundaryCurve make_l_shape(double size, std::size_t n, const Vec2 &center)
{
  const double h = 0.5 * size;
  std::vector<Vec2> corners = {{-h, -h}, {h, -h}, {h, 0.0}, {0.0, 0.0}, {0.0, h}, {-h, h}};
  for (auto &c : corners)
  {
    c += center;
  }
  return resample(BoundaryCurve(std::move(corners)), n);
}

void write_curve_csv(std::ostream &os, const BoundaryCurve &curve)
{
  os << "# closed-curve v1\n";
  os << "x,y\n";
  for (const auto &p : curve.nodes())
  {
    os << csv::format(p.x) << ',' << csv::format(p.y) << '\n';
  }
}

BoundaryCurve read_curve_csv(std::istream &is)
{
  std::string line;
  std::vector<Vec2> nodes;
  bool saw_header = false;
  while (std::getline(is, line))
  {
    auto t = csv::trim(line);
    if (t.empty())
    {
      continue;
    }
    if (t.front() == '#')
    {
      if (t.find("closed-curve v1") != std::string_view::npos)
      {
        saw_header = true;
      }
      continue;
    }
    if (t == "x,y")
    {
      continue;
    }
    auto cols = csv::split(t);
    if (cols.size() != 2)
    {
      throw ConfigError("curve csv: expected two columns");
    }
    nodes.push_back({csv::parse_double(cols[0]), csv::parse_double(cols[1])});
  }
  if (!saw_header)
  {
    throw ConfigError("curve csv: missing '# closed-curve v1' header");
  }
  return BoundaryCurve(std::move(nodes));
}

}  // namespace gibc
