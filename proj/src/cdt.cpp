#include "cdt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "gibc/errors.hpp"

namespace gibc::detail
{

namespace
{

struct CavityEdge
{
  int a, b;     // counterclockwise as seen from the cavity
  int outside;  // neighbor triangle outside the cavity, or -1
  bool con;
  int owner;  // cavity triangle that owns the edge
};

double orient_pts(const Vec2 &a, const Vec2 &b, const Vec2 &p)
{
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

}  // namespace

Cdt::Cdt(double extent)
{
  const double e = 30.0 * extent;
  pts_ = {{-e, -e}, {e, -e}, {0.0, e}};
  Tri t;
  t.v = {0, 1, 2};
  tris_.push_back(t);
  vert_tri_ = {0, 0, 0};
}

double Cdt::orient(int a, int b, const Vec2 &p) const
{
  return orient_pts(pts_[static_cast<std::size_t>(a)], pts_[static_cast<std::size_t>(b)], p);
}

bool Cdt::incircle(int t, const Vec2 &p) const
{
  const Tri &tr = tris_[static_cast<std::size_t>(t)];
  const Vec2 &a = pts_[static_cast<std::size_t>(tr.v[0])];
  const Vec2 &b = pts_[static_cast<std::size_t>(tr.v[1])];
  const Vec2 &c = pts_[static_cast<std::size_t>(tr.v[2])];
  const double adx = a.x - p.x, ady = a.y - p.y;
  const double bdx = b.x - p.x, bdy = b.y - p.y;
  const double cdx = c.x - p.x, cdy = c.y - p.y;
  const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
  const double t1 = al * (bdx * cdy - cdx * bdy);
  const double t2 = bl * (cdx * ady - adx * cdy);
  const double t3 = cl * (adx * bdy - bdx * ady);
  const double det = t1 + t2 + t3;
  const double perm = std::abs(t1) + std::abs(t2) + std::abs(t3);
  return det > 1e-12 * perm;
}

int Cdt::new_tri()
{
  if (!free_.empty())
  {
    int t = free_.back();
    free_.pop_back();
    tris_[static_cast<std::size_t>(t)] = Tri{};
    return t;
  }
  tris_.emplace_back();
  return static_cast<int>(tris_.size()) - 1;
}

void Cdt::set_back_pointer(int nb, int a, int b, int new_t)
{
  if (nb < 0)
  {
    return;
  }
  Tri &n = tris_[static_cast<std::size_t>(nb)];
  for (std::size_t i = 0; i < 3; ++i)
  {
    const int p = n.v[(i + 1) % 3], q = n.v[(i + 2) % 3];
    if ((p == a && q == b) || (p == b && q == a))
    {
      n.nb[i] = new_t;
      return;
    }
  }
}

int Cdt::locate(const Vec2 &p, int start) const
{
  int t = start;
  if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive)
  {
    t = 0;
    while (!tris_[static_cast<std::size_t>(t)].alive)
    {
      ++t;
    }
  }
  const std::size_t cap = 4 * tris_.size() + 100;
  for (std::size_t step = 0; step < cap; ++step)
  {
    const Tri &tr = tris_[static_cast<std::size_t>(t)];
    bool inside = true;
    for (std::size_t k = 0; k < 3; ++k)
    {
      const std::size_t i = (k + step) % 3;
      if (orient(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], p) < 0.0)
      {
        t = tr.nb[i];
        inside = false;
        break;
      }
    }
    if (inside)
    {
      return t;
    }
    if (t < 0)
    {
      throw QualityFailure("mesh: point outside the triangulation");
    }
  }
  // The walk cycled (possible in non-Delaunay configurations); fall back to a scan.
  for (std::size_t i = 0; i < tris_.size(); ++i)
  {
    const Tri &tr = tris_[i];
    if (tr.alive && orient(tr.v[0], tr.v[1], p) >= 0.0 && orient(tr.v[1], tr.v[2], p) >= 0.0 &&
        orient(tr.v[2], tr.v[0], p) >= 0.0)
    {
      return static_cast<int>(i);
    }
  }
  throw QualityFailure("mesh: point location failed");
}

int Cdt::locate_constrained(const Vec2 &p, int start, int &block_tri, int &block_edge) const
{
  int t = start;
  const std::size_t cap = 4 * tris_.size() + 100;
  for (std::size_t step = 0; step < cap; ++step)
  {
    const Tri &tr = tris_[static_cast<std::size_t>(t)];
    bool inside = true;
    for (std::size_t k = 0; k < 3; ++k)
    {
      const std::size_t i = (k + step) % 3;
      if (orient(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], p) < 0.0)
      {
        if (tr.con[i] || tr.nb[i] < 0)
        {
          block_tri = t;
          block_edge = static_cast<int>(i);
          return -1;
        }
        t = tr.nb[i];
        inside = false;
        break;
      }
    }
    if (inside)
    {
      return t;
    }
  }
  block_tri = -1;
  block_edge = -1;
  return -1;
}

int Cdt::insert(const Vec2 &p)
{
  int v = insert_internal(p, last_);
  return v - 3;
}

int Cdt::insert_internal(const Vec2 &p, int start)
{
  const int t0 = locate(p, start);
  {
    const Tri &tr = tris_[static_cast<std::size_t>(t0)];
    for (int vi : tr.v)
    {
      const Vec2 &q = pts_[static_cast<std::size_t>(vi)];
      if (norm(q - p) <= 1e-13 * (std::abs(p.x) + std::abs(p.y) + 1.0))
      {
        return vi;
      }
    }
  }

  // Cavity of triangles whose circumcircle contains p, grown without crossing constraints.
  if (mark_.size() < tris_.size())
  {
    mark_.resize(tris_.size(), 0);
  }
  ++stamp_;
  std::vector<int> cavity{t0};
  mark_[static_cast<std::size_t>(t0)] = stamp_;
  for (std::size_t q = 0; q < cavity.size(); ++q)
  {
    const Tri &tr = tris_[static_cast<std::size_t>(cavity[q])];
    for (std::size_t i = 0; i < 3; ++i)
    {
      const int nb = tr.nb[i];
      if (nb < 0 || tr.con[i] || mark_[static_cast<std::size_t>(nb)] == stamp_)
      {
        continue;
      }
      if (incircle(nb, p))
      {
        mark_[static_cast<std::size_t>(nb)] = stamp_;
        cavity.push_back(nb);
      }
    }
  }

  std::vector<CavityEdge> boundary;
  for (int guard = 0;; ++guard)
  {
    boundary.clear();
    int bad_owner = -1;
    for (int ct : cavity)
    {
      const Tri &tr = tris_[static_cast<std::size_t>(ct)];
      for (std::size_t i = 0; i < 3; ++i)
      {
        const int nb = tr.nb[i];
        if (nb >= 0 && mark_[static_cast<std::size_t>(nb)] == stamp_)
        {
          continue;
        }
        CavityEdge e{tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], nb, tr.con[i], ct};
        const Vec2 &a = pts_[static_cast<std::size_t>(e.a)];
        const Vec2 &b = pts_[static_cast<std::size_t>(e.b)];
        const double o = orient_pts(a, b, p);
        if (!(o > 1e-14 * norm(b - a) * (norm(p - a) + norm(p - b))) && ct != t0)
        {
          bad_owner = ct;
        }
        boundary.push_back(e);
      }
    }
    if (bad_owner < 0 || guard > 1000)
    {
      break;
    }
    // Remove the owner from the cavity to keep it star shaped around p.
    mark_[static_cast<std::size_t>(bad_owner)] = 0;
    cavity.erase(std::find(cavity.begin(), cavity.end(), bad_owner));
  }

  const int vp = static_cast<int>(pts_.size());
  pts_.push_back(p);
  vert_tri_.push_back(-1);
  const int region = tris_[static_cast<std::size_t>(t0)].region;
  for (int ct : cavity)
  {
    tris_[static_cast<std::size_t>(ct)].alive = false;
    free_.push_back(ct);
  }
  std::vector<int> created(boundary.size());
  for (std::size_t k = 0; k < boundary.size(); ++k)
  {
    created[k] = new_tri();
  }
  for (std::size_t k = 0; k < boundary.size(); ++k)
  {
    Tri &tr = tris_[static_cast<std::size_t>(created[k])];
    const CavityEdge &e = boundary[k];
    tr.v = {vp, e.a, e.b};
    tr.nb[0] = e.outside;
    tr.con[0] = e.con;
    tr.region = region;
    tr.alive = true;
    set_back_pointer(e.outside, e.a, e.b, created[k]);
    vert_tri_[static_cast<std::size_t>(e.a)] = created[k];
    vert_tri_[static_cast<std::size_t>(e.b)] = created[k];
  }
  for (std::size_t k = 0; k < boundary.size(); ++k)
  {
    Tri &tr = tris_[static_cast<std::size_t>(created[k])];
    const int a = tr.v[1], b = tr.v[2];
    for (std::size_t l = 0; l < boundary.size(); ++l)
    {
      const Tri &other = tris_[static_cast<std::size_t>(created[l])];
      if (other.v[2] == a)
      {
        tr.nb[2] = created[l];
      }
      if (other.v[1] == b)
      {
        tr.nb[1] = created[l];
      }
    }
  }
  vert_tri_[static_cast<std::size_t>(vp)] = created.empty() ? -1 : created[0];
  last_ = created.empty() ? 0 : created[0];
  if (mark_.size() < tris_.size())
  {
    mark_.resize(tris_.size(), 0);
  }
  return vp;
}

bool Cdt::find_edge(int a, int b, int &tri, int &edge) const
{
  const int start = vert_tri_[static_cast<std::size_t>(a)];
  int t = start;
  for (std::size_t guard = 0; guard < tris_.size() + 10 && t >= 0; ++guard)
  {
    const Tri &tr = tris_[static_cast<std::size_t>(t)];
    std::size_t i = 0;
    while (tr.v[i] != a)
    {
      ++i;
    }
    if (tr.v[(i + 1) % 3] == b)
    {
      tri = t;
      edge = static_cast<int>((i + 2) % 3);
      return true;
    }
    if (tr.v[(i + 2) % 3] == b)
    {
      tri = t;
      edge = static_cast<int>((i + 1) % 3);
      return true;
    }
    t = tr.nb[(i + 1) % 3];
    if (t == start)
    {
      break;
    }
  }
  return false;
}

void Cdt::flip(int t1, int e1)
{
  const Tri a = tris_[static_cast<std::size_t>(t1)];
  const auto e1u = static_cast<std::size_t>(e1);
  const int t2 = a.nb[e1u];
  const Tri b = tris_[static_cast<std::size_t>(t2)];
  const int w1 = a.v[e1u], u = a.v[(e1u + 1) % 3], v = a.v[(e1u + 2) % 3];
  std::size_t e2 = 0;
  while (b.v[e2] == u || b.v[e2] == v)
  {
    ++e2;
  }
  const int w2 = b.v[e2];
  const int n_vw1 = a.nb[(e1u + 1) % 3], n_w1u = a.nb[(e1u + 2) % 3];
  const bool c_vw1 = a.con[(e1u + 1) % 3], c_w1u = a.con[(e1u + 2) % 3];
  const int n_uw2 = b.nb[(e2 + 1) % 3], n_w2v = b.nb[(e2 + 2) % 3];
  const bool c_uw2 = b.con[(e2 + 1) % 3], c_w2v = b.con[(e2 + 2) % 3];

  Tri &x = tris_[static_cast<std::size_t>(t1)];
  x.v = {w1, u, w2};
  x.nb = {n_uw2, t2, n_w1u};
  x.con = {c_uw2, false, c_w1u};
  Tri &y = tris_[static_cast<std::size_t>(t2)];
  y.v = {w2, v, w1};
  y.nb = {n_vw1, t1, n_w2v};
  y.con = {c_vw1, false, c_w2v};
  set_back_pointer(n_uw2, u, w2, t1);
  set_back_pointer(n_vw1, v, w1, t2);
  vert_tri_[static_cast<std::size_t>(u)] = t1;
  vert_tri_[static_cast<std::size_t>(w1)] = t1;
  vert_tri_[static_cast<std::size_t>(v)] = t2;
  vert_tri_[static_cast<std::size_t>(w2)] = t2;
}

void Cdt::insert_constraint(int ua, int ub)
{
  const int a = ua + 3, b = ub + 3;
  int t = -1, e = -1;
  auto mark = [this](int a_, int b_) {
    int tt = -1, ee = -1;
    if (!find_edge(a_, b_, tt, ee))
    {
      throw QualityFailure("mesh: constraint recovery failed");
    }
    Tri &tr = tris_[static_cast<std::size_t>(tt)];
    tr.con[static_cast<std::size_t>(ee)] = true;
    const int nb = tr.nb[static_cast<std::size_t>(ee)];
    if (nb >= 0)
    {
      Tri &n = tris_[static_cast<std::size_t>(nb)];
      for (std::size_t i = 0; i < 3; ++i)
      {
        if (n.nb[i] == tt)
        {
          n.con[i] = true;
        }
      }
    }
  };
  if (find_edge(a, b, t, e))
  {
    mark(a, b);
    return;
  }

  const Vec2 pb = pts_[static_cast<std::size_t>(b)];
  const Vec2 pa = pts_[static_cast<std::size_t>(a)];
  auto side = [&](int w) {
    double o = orient_pts(pa, pb, pts_[static_cast<std::size_t>(w)]);
    double tol = 1e-13 * norm(pb - pa) * norm(pts_[static_cast<std::size_t>(w)] - pa);
    return o > tol ? 1 : (o < -tol ? -1 : 0);
  };

  // Edges crossed by the segment, starting from the fan around a.
  std::deque<std::pair<int, int>> crossing;
  int cur = -1;
  int u = -1, w = -1;
  {
    const int start = vert_tri_[static_cast<std::size_t>(a)];
    int tt = start;
    for (std::size_t guard = 0; guard < tris_.size() + 10; ++guard)
    {
      const Tri &tr = tris_[static_cast<std::size_t>(tt)];
      std::size_t i = 0;
      while (tr.v[i] != a)
      {
        ++i;
      }
      const int p1 = tr.v[(i + 1) % 3], p2 = tr.v[(i + 2) % 3];
      if (side(p1) < 0 && side(p2) > 0)
      {
        cur = tt;
        u = p1;
        w = p2;
        break;
      }
      if ((side(p1) == 0 && dot(pts_[static_cast<std::size_t>(p1)] - pa, pb - pa) > 0) ||
          (side(p2) == 0 && dot(pts_[static_cast<std::size_t>(p2)] - pa, pb - pa) > 0))
      {
        throw QualityFailure("mesh: constraint passes through a vertex");
      }
      tt = tr.nb[(i + 1) % 3];
      if (tt == start || tt < 0)
      {
        break;
      }
    }
  }
  if (cur < 0)
  {
    throw QualityFailure("mesh: constraint start not found");
  }
  while (true)
  {
    crossing.emplace_back(u, w);
    int tt = -1, ee = -1;
    find_edge(u, w, tt, ee);
    const Tri &tr = tris_[static_cast<std::size_t>(tt)];
    const int nb = tr.nb[static_cast<std::size_t>(ee)];
    const Tri &n = tris_[static_cast<std::size_t>(nb)];
    int x = -1;
    for (int vi : n.v)
    {
      if (vi != u && vi != w)
      {
        x = vi;
      }
    }
    if (x == b)
    {
      break;
    }
    const int s = side(x);
    if (s == 0)
    {
      throw QualityFailure("mesh: constraint passes through a vertex");
    }
    if (s < 0)
    {
      u = x;
    }
    else
    {
      w = x;
    }
  }

  std::size_t guard = 0;
  while (!crossing.empty())
  {
    if (++guard > 1000000)
    {
      throw QualityFailure("mesh: constraint recovery did not terminate");
    }
    auto [p, q] = crossing.front();
    crossing.pop_front();
    int tt = -1, ee = -1;
    if (!find_edge(p, q, tt, ee))
    {
      continue;
    }
    const Tri &tr = tris_[static_cast<std::size_t>(tt)];
    const int y = tr.v[static_cast<std::size_t>(ee)];
    const int nb = tr.nb[static_cast<std::size_t>(ee)];
    const Tri &n = tris_[static_cast<std::size_t>(nb)];
    int x = -1;
    for (int vi : n.v)
    {
      if (vi != p && vi != q)
      {
        x = vi;
      }
    }
    const Vec2 &py = pts_[static_cast<std::size_t>(y)], &px = pts_[static_cast<std::size_t>(x)];
    const double o1 = orient_pts(py, px, pts_[static_cast<std::size_t>(p)]);
    const double o2 = orient_pts(py, px, pts_[static_cast<std::size_t>(q)]);
    if (!(o1 * o2 < 0.0))
    {
      crossing.emplace_back(p, q);
      continue;
    }
    flip(tt, ee);
    if (x != a && x != b && y != a && y != b && side(x) * side(y) < 0)
    {
      crossing.emplace_back(y, x);
    }
  }
  mark(a, b);
}

void Cdt::make_delaunay()
{
  std::vector<std::pair<int, int>> stack;
  for (std::size_t t = 0; t < tris_.size(); ++t)
  {
    if (tris_[t].alive)
    {
      for (int i = 0; i < 3; ++i)
      {
        stack.emplace_back(static_cast<int>(t), i);
      }
    }
  }
  std::size_t guard = 0;
  while (!stack.empty())
  {
    if (++guard > 50000000)
    {
      throw QualityFailure("mesh: Delaunay flips did not terminate");
    }
    auto [t, i] = stack.back();
    stack.pop_back();
    const Tri &tr = tris_[static_cast<std::size_t>(t)];
    const auto iu = static_cast<std::size_t>(i);
    if (!tr.alive || tr.con[iu] || tr.nb[iu] < 0)
    {
      continue;
    }
    const int nb = tr.nb[iu];
    const Tri &n = tris_[static_cast<std::size_t>(nb)];
    int x = -1;
    for (int vi : n.v)
    {
      if (vi != tr.v[(iu + 1) % 3] && vi != tr.v[(iu + 2) % 3])
      {
        x = vi;
      }
    }
    if (!incircle(t, pts_[static_cast<std::size_t>(x)]))
    {
      continue;
    }
    // Only flip convex quadrilaterals.
    const Vec2 &pw = pts_[static_cast<std::size_t>(tr.v[iu])];
    const Vec2 &px = pts_[static_cast<std::size_t>(x)];
    const double o1 = orient_pts(pw, px, pts_[static_cast<std::size_t>(tr.v[(iu + 1) % 3])]);
    const double o2 = orient_pts(pw, px, pts_[static_cast<std::size_t>(tr.v[(iu + 2) % 3])]);
    if (!(o1 * o2 < 0.0))
    {
      continue;
    }
    flip(t, i);
    for (int k = 0; k < 3; ++k)
    {
      stack.emplace_back(t, k);
      stack.emplace_back(nb, k);
    }
  }
}

void Cdt::classify_regions()
{
  for (auto &t : tris_)
  {
    t.region = -1;
  }
  std::deque<int> queue;
  for (std::size_t t = 0; t < tris_.size(); ++t)
  {
    const Tri &tr = tris_[t];
    if (tr.alive && (tr.v[0] < 3 || tr.v[1] < 3 || tr.v[2] < 3))
    {
      tris_[t].region = 0;
      queue.push_back(static_cast<int>(t));
    }
  }
  // 0-1 BFS: crossing a constraint costs one.
  while (!queue.empty())
  {
    const int t = queue.front();
    queue.pop_front();
    const Tri &tr = tris_[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < 3; ++i)
    {
      const int nb = tr.nb[i];
      if (nb < 0)
      {
        continue;
      }
      const int r = tr.region + (tr.con[i] ? 1 : 0);
      Tri &n = tris_[static_cast<std::size_t>(nb)];
      if (n.region < 0 || r < n.region)
      {
        n.region = r;
        if (tr.con[i])
        {
          queue.push_back(nb);
        }
        else
        {
          queue.push_front(nb);
        }
      }
    }
  }
}

double Cdt::min_angle(int t) const
{
  const Tri &tr = tris_[static_cast<std::size_t>(t)];
  double m = std::numbers::pi;
  for (std::size_t i = 0; i < 3; ++i)
  {
    const Vec2 &p = pts_[static_cast<std::size_t>(tr.v[i])];
    const Vec2 a = pts_[static_cast<std::size_t>(tr.v[(i + 1) % 3])] - p;
    const Vec2 b = pts_[static_cast<std::size_t>(tr.v[(i + 2) % 3])] - p;
    m = std::min(m, std::atan2(std::abs(cross(a, b)), dot(a, b)));
  }
  return m;
}

double Cdt::max_edge(int t) const
{
  const Tri &tr = tris_[static_cast<std::size_t>(t)];
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
  {
    m = std::max(m, norm(pts_[static_cast<std::size_t>(tr.v[i])] -
                         pts_[static_cast<std::size_t>(tr.v[(i + 1) % 3])]));
  }
  return m;
}

Vec2 Cdt::circumcenter(int t) const
{
  const Tri &tr = tris_[static_cast<std::size_t>(t)];
  const Vec2 &a = pts_[static_cast<std::size_t>(tr.v[0])];
  const Vec2 b = pts_[static_cast<std::size_t>(tr.v[1])] - a;
  const Vec2 c = pts_[static_cast<std::size_t>(tr.v[2])] - a;
  const double d = 2.0 * cross(b, c);
  const double bl = dot(b, b), cl = dot(c, c);
  return a + Vec2{(c.y * bl - b.y * cl) / d, (b.x * cl - c.x * bl) / d};
}

bool Cdt::encroaches(const Vec2 &p, int tri, int edge) const
{
  const Tri &tr = tris_[static_cast<std::size_t>(tri)];
  const auto e = static_cast<std::size_t>(edge);
  const Vec2 &a = pts_[static_cast<std::size_t>(tr.v[(e + 1) % 3])];
  const Vec2 &b = pts_[static_cast<std::size_t>(tr.v[(e + 2) % 3])];
  return dot(a - p, b - p) < 0.0;
}

void Cdt::refine(const RefineOptions &opt)
{
  const double min_angle_rad = opt.min_angle_deg * std::numbers::pi / 180.0;
  auto is_bad = [&](int t) {
    const Tri &tr = tris_[static_cast<std::size_t>(t)];
    if (!tr.alive || tr.region != opt.region)
    {
      return false;
    }
    return min_angle(t) < min_angle_rad || (opt.max_edge > 0.0 && max_edge(t) > opt.max_edge);
  };
  struct Item
  {
    int t;
    std::array<int, 3> v;
  };
  std::deque<Item> queue;
  for (std::size_t t = 0; t < tris_.size(); ++t)
  {
    if (is_bad(static_cast<int>(t)))
    {
      queue.push_back({static_cast<int>(t), tris_[t].v});
    }
  }

  // Constrained edges on the boundary of the would-be cavity of p that p encroaches on.
  auto encroached_edge = [&](const Vec2 &p, int t0, int &et, int &ee) {
    ++stamp_;
    if (mark_.size() < tris_.size())
    {
      mark_.resize(tris_.size(), 0);
    }
    std::vector<int> cav{t0};
    mark_[static_cast<std::size_t>(t0)] = stamp_;
    for (std::size_t q = 0; q < cav.size(); ++q)
    {
      const Tri &tr = tris_[static_cast<std::size_t>(cav[q])];
      for (std::size_t i = 0; i < 3; ++i)
      {
        const int nb = tr.nb[i];
        if (tr.con[i])
        {
          if (encroaches(p, cav[q], static_cast<int>(i)))
          {
            et = cav[q];
            ee = static_cast<int>(i);
            return true;
          }
          continue;
        }
        if (nb < 0 || mark_[static_cast<std::size_t>(nb)] == stamp_)
        {
          continue;
        }
        if (incircle(nb, p))
        {
          mark_[static_cast<std::size_t>(nb)] = stamp_;
          cav.push_back(nb);
        }
      }
    }
    return false;
  };

  // Vertices of triangles around the location closer than tol to p.
  auto too_close = [&](const Vec2 &p, int t0, double tol) {
    const Tri &tr = tris_[static_cast<std::size_t>(t0)];
    for (std::size_t i = 0; i < 3; ++i)
    {
      if (norm(pts_[static_cast<std::size_t>(tr.v[i])] - p) < tol)
      {
        return true;
      }
      const int nb = tr.nb[i];
      if (nb >= 0)
      {
        for (int vi : tris_[static_cast<std::size_t>(nb)].v)
        {
          if (norm(pts_[static_cast<std::size_t>(vi)] - p) < tol)
          {
            return true;
          }
        }
      }
    }
    return false;
  };

  std::size_t inserted = 0;
  while (!queue.empty() && inserted < opt.max_insertions)
  {
    Item item = queue.front();
    queue.pop_front();
    const Tri &tr = tris_[static_cast<std::size_t>(item.t)];
    if (!tr.alive || tr.v != item.v || !is_bad(item.t))
    {
      continue;
    }
    const double scale = max_edge(item.t);
    Vec2 p = circumcenter(item.t);
    int bt = -1, be = -1;
    int loc = locate_constrained(p, item.t, bt, be);
    if (loc >= 0)
    {
      int et = -1, ee = -1;
      if (encroached_edge(p, loc, et, ee))
      {
        bt = et;
        be = ee;
        loc = -1;
      }
    }
    if (loc < 0)
    {
      if (bt < 0)
      {
        continue;
      }
      // Apex of the equilateral triangle on the blocking segment, on the domain side.
      const Tri &bt_tri = tris_[static_cast<std::size_t>(bt)];
      const auto beu = static_cast<std::size_t>(be);
      const Vec2 &a = pts_[static_cast<std::size_t>(bt_tri.v[(beu + 1) % 3])];
      const Vec2 &b = pts_[static_cast<std::size_t>(bt_tri.v[(beu + 2) % 3])];
      const Vec2 d = b - a;
      const double len = norm(d);
      p = 0.5 * (a + b) + (std::sqrt(3.0) / 2.0) * Vec2{-d.y, d.x};
      int bt2 = -1, be2 = -1;
      loc = locate_constrained(p, bt, bt2, be2);
      if (loc < 0)
      {
        continue;
      }
      int et = -1, ee = -1;
      if (encroached_edge(p, loc, et, ee) || too_close(p, loc, 0.5 * len))
      {
        continue;
      }
    }
    else if (too_close(p, loc, 0.2 * scale))
    {
      continue;
    }
    const int vp = insert_internal(p, loc);
    ++inserted;
    // Queue the new triangles around vp.
    int t = vert_tri_[static_cast<std::size_t>(vp)];
    const int start = t;
    for (std::size_t guard = 0; guard < 1000 && t >= 0; ++guard)
    {
      if (is_bad(t))
      {
        queue.push_back({t, tris_[static_cast<std::size_t>(t)].v});
      }
      const Tri &nt = tris_[static_cast<std::size_t>(t)];
      std::size_t i = 0;
      while (nt.v[i] != vp)
      {
        ++i;
      }
      t = nt.nb[(i + 1) % 3];
      if (t == start)
      {
        break;
      }
    }
  }
}

std::vector<std::array<int, 3>> Cdt::triangles(int region) const
{
  std::vector<std::array<int, 3>> out;
  for (const auto &t : tris_)
  {
    if (t.alive && t.region == region)
    {
      out.push_back({t.v[0] - 3, t.v[1] - 3, t.v[2] - 3});
    }
  }
  return out;
}

}  // namespace gibc::detail
