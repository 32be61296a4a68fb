#include "amoeba/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace amoeba {

namespace {

using Wide = __int128;

bool lower_half(const Point2& v) { return v[1] < 0 || (v[1] == 0 && v[0] < 0); }

Wide cross2(const Point2& a, const Point2& b) {
  return static_cast<Wide>(a[0]) * b[1] - static_cast<Wide>(a[1]) * b[0];
}

Wide dot2(const Point2& a, const Point2& b) {
  return static_cast<Wide>(a[0]) * b[0] + static_cast<Wide>(a[1]) * b[1];
}

// Angle of v measured counterclockwise from `base`, as a comparable pair.
struct RelativeAngle {
  Wide x, y;
};

RelativeAngle relative(const Point2& base, const Point2& v) { return {dot2(base, v), cross2(base, v)}; }

bool relative_less(const RelativeAngle& a, const RelativeAngle& b) {
  const bool ha = a.y < 0 || (a.y == 0 && a.x < 0);
  const bool hb = b.y < 0 || (b.y == 0 && b.x < 0);
  if (ha != hb) return !ha;
  return a.x * b.y - a.y * b.x > 0;  // both tiny, products fit
}

Point2 rot90(const Point2& v) { return {-v[1], v[0]}; }

Point2 outward_normal(const Point2& from, const Point2& to) {
  return primitive({to[1] - from[1], -(to[0] - from[0])});
}

}  // namespace

std::int64_t cross(const Point2& o, const Point2& a, const Point2& b) {
  return static_cast<std::int64_t>(static_cast<Wide>(a[0] - o[0]) * (b[1] - o[1]) -
                                   static_cast<Wide>(a[1] - o[1]) * (b[0] - o[0]));
}

std::int64_t gcd_abs(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

Point2 primitive(Point2 v) {
  const std::int64_t g = gcd_abs(v[0], v[1]);
  if (g == 0) throw std::invalid_argument("zero vector has no primitive direction");
  return {v[0] / g, v[1] / g};
}

bool angle_less(const Point2& a, const Point2& b) {
  const bool ha = lower_half(a);
  const bool hb = lower_half(b);
  if (ha != hb) return !ha;
  return cross2(a, b) > 0;
}

bool same_direction(const Point2& a, const Point2& b) { return cross2(a, b) == 0 && dot2(a, b) > 0; }

LatticePolytope convex_hull(const std::vector<Point2>& input) {
  if (input.empty()) throw std::invalid_argument("convex_hull of an empty point set");
  std::vector<Point2> pts = input;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  LatticePolytope out;
  if (pts.size() == 1) {
    out.vertices = pts;
    out.dimension = 0;
    return out;
  }
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() == 2) {
    out.vertices = hull;
    out.dimension = 1;
    return out;
  }
  out.vertices = hull;
  out.dimension = 2;
  return out;
}

bool LatticePolytope::contains(const Point2& p) const {
  if (dimension == 0) return vertices.front() == p;
  if (dimension == 1) {
    const auto& a = vertices[0];
    const auto& b = vertices[1];
    if (cross(a, b, p) != 0) return false;
    return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
           p[1] <= std::max(a[1], b[1]);
  }
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (cross(vertices[i], vertices[(i + 1) % vertices.size()], p) < 0) return false;
  return true;
}

std::vector<Point2> LatticePolytope::lattice_points() const {
  Point2 lo = vertices.front();
  Point2 hi = vertices.front();
  for (const auto& v : vertices) {
    lo = {std::min(lo[0], v[0]), std::min(lo[1], v[1])};
    hi = {std::max(hi[0], v[0]), std::max(hi[1], v[1])};
  }
  std::vector<Point2> out;
  for (std::int64_t x = lo[0]; x <= hi[0]; ++x)
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
      if (contains({x, y})) out.push_back({x, y});
  return out;
}

LatticePolytope minkowski_sum(const LatticePolytope& p, const LatticePolytope& q) {
  std::vector<Point2> sums;
  sums.reserve(p.vertices.size() * q.vertices.size());
  for (const auto& a : p.vertices)
    for (const auto& b : q.vertices) sums.push_back({a[0] + b[0], a[1] + b[1]});
  return convex_hull(sums);
}

Rational normalized_volume(const LatticePolytope& p) {
  if (p.dimension < 2) return Rational(0);
  Wide twice_area = 0;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    twice_area += cross2(p.vertices[i], p.vertices[(i + 1) % p.vertices.size()]);
  return Rational(static_cast<std::int64_t>(twice_area < 0 ? -twice_area : twice_area));
}

Rational mixed_volume(const LatticePolytope& p, const LatticePolytope& q) {
  return (normalized_volume(minkowski_sum(p, q)) - normalized_volume(p) - normalized_volume(q)) / 2;
}

bool Cone2::contains_strictly(const Point2& d) const {
  if (full_plane) return true;
  if (same_direction(d, start)) return false;
  return relative_less(relative(start, d), relative(start, end));
}

bool Cone2::contains(const Point2& d) const {
  if (full_plane) return true;
  return same_direction(d, start) || same_direction(d, end) || contains_strictly(d);
}

Point2 Cone2::interior_direction() const {
  if (full_plane) return rot90(start);
  const Wide c = cross2(start, end);
  if (c > 0) return {start[0] + end[0], start[1] + end[1]};
  if (c == 0) return rot90(start);  // half-plane
  return {-(start[0] + end[0]), -(start[1] + end[1])};
}

bool Cone2::same_rays(const Cone2& other) const {
  if (full_plane || other.full_plane) return full_plane == other.full_plane;
  return same_direction(start, other.start) && same_direction(end, other.end);
}

double Cone2::width_degrees() const {
  if (full_plane) return 360.0;
  const double a0 = std::atan2(static_cast<double>(start[1]), static_cast<double>(start[0]));
  const double a1 = std::atan2(static_cast<double>(end[1]), static_cast<double>(end[0]));
  double w = (a1 - a0) * 180.0 / std::numbers::pi;
  while (w <= 0.0) w += 360.0;
  while (w > 360.0) w -= 360.0;
  return w;
}

Cone2 normal_cone(const LatticePolytope& p, const Point2& vertex) {
  if (p.dimension != 2) throw std::invalid_argument("normal cones need a two-dimensional polygon");
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (p.vertices[i] != vertex) continue;
    const Point2& prev = p.vertices[(i + n - 1) % n];
    const Point2& next = p.vertices[(i + 1) % n];
    Cone2 c;
    c.start = outward_normal(prev, vertex);
    c.end = outward_normal(vertex, next);
    return c;
  }
  throw std::invalid_argument("point is not a vertex of the polygon");
}

Fan2 normal_fan(const LatticePolytope& p, int source) {
  if (p.dimension != 2) throw std::invalid_argument("normal_fan needs a two-dimensional polygon");
  Fan2 fan;
  for (const auto& v : p.vertices) {
    Cone2 c = normal_cone(p, v);
    c.labels.push_back({source, v, c.start, c.end});
    fan.cones.push_back(std::move(c));
  }
  std::sort(fan.cones.begin(), fan.cones.end(),
            [](const Cone2& a, const Cone2& b) { return angle_less(a.start, b.start); });
  return fan;
}

namespace {

std::vector<Point2> sorted_rays(const std::vector<const Cone2*>& cones) {
  std::vector<Point2> rays;
  for (const Cone2* c : cones) {
    if (c->full_plane) continue;
    rays.push_back(primitive(c->start));
    rays.push_back(primitive(c->end));
  }
  std::sort(rays.begin(), rays.end(), angle_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

// Elementary cones between consecutive rays, covering the plane.
std::vector<Cone2> elementary_cones(const std::vector<Point2>& rays) {
  std::vector<Cone2> out;
  if (rays.empty()) {
    Cone2 c;
    c.start = c.end = {1, 0};
    c.full_plane = true;
    out.push_back(c);
    return out;
  }
  if (rays.size() == 1) {
    Cone2 c;
    c.start = c.end = rays.front();
    c.full_plane = true;
    out.push_back(c);
    return out;
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    Cone2 c;
    c.start = rays[i];
    c.end = rays[(i + 1) % rays.size()];
    out.push_back(c);
  }
  return out;
}

}  // namespace

bool cones_overlap(const Cone2& a, const Cone2& b) {
  for (const Cone2& piece : elementary_cones(sorted_rays({&a, &b}))) {
    const Point2 d = piece.interior_direction();
    if (a.contains_strictly(d) && b.contains_strictly(d)) return true;
  }
  return false;
}

Fan2 common_refinement(const Fan2& f1, const Fan2& f2) {
  std::vector<const Cone2*> all;
  for (const auto& c : f1.cones) all.push_back(&c);
  for (const auto& c : f2.cones) all.push_back(&c);
  Fan2 out;
  for (Cone2 piece : elementary_cones(sorted_rays(all))) {
    const Point2 d = piece.interior_direction();
    const Cone2* parents[2] = {nullptr, nullptr};
    for (int k = 0; k < 2; ++k) {
      const Fan2& f = k == 0 ? f1 : f2;
      for (const auto& c : f.cones)
        if (c.contains_strictly(d)) {
          parents[k] = &c;
          break;
        }
      if (!parents[k]) throw std::invalid_argument("common_refinement needs complete fans");
    }
    for (const Cone2* p : parents) piece.labels.insert(piece.labels.end(), p->labels.begin(), p->labels.end());
    out.cones.push_back(std::move(piece));
  }
  return out;
}

std::vector<Cone2> mixed_cones(const Fan2& refinement) {
  std::vector<Cone2> out;
  for (const auto& c : refinement.cones) {
    if (c.labels.size() < 2) throw std::invalid_argument("mixed_cones: cone lacks provenance labels");
    bool mixed = true;
    for (const auto& l : c.labels) {
      Cone2 parent;
      parent.start = l.parent_start;
      parent.end = l.parent_end;
      if (c.same_rays(parent)) mixed = false;
    }
    if (mixed) out.push_back(c);
  }
  return out;
}

namespace {

using boost::multiprecision::cpp_rational;

// Phase-one simplex with Bland's rule: is {x >= 0 : A x = b} non-empty?
bool feasible(std::vector<std::vector<cpp_rational>> a, std::vector<cpp_rational> b) {
  const std::size_t rows = a.size();
  const std::size_t vars = rows ? a.front().size() : 0;
  for (std::size_t r = 0; r < rows; ++r)
    if (b[r] < 0) {
      for (auto& v : a[r]) v = -v;
      b[r] = -b[r];
    }
  const std::size_t cols = vars + rows;
  // tableau rows: [A | I | b]
  std::vector<std::vector<cpp_rational>> t(rows, std::vector<cpp_rational>(cols + 1));
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < vars; ++c) t[r][c] = a[r][c];
    t[r][vars + r] = 1;
    t[r][cols] = b[r];
    basis[r] = vars + r;
  }
  // reduced costs of the phase-one objective sum(artificials)
  std::vector<cpp_rational> cost(cols + 1);
  for (std::size_t c = 0; c <= cols; ++c) {
    if (c >= vars && c < cols) continue;
    for (std::size_t r = 0; r < rows; ++r) cost[c] -= t[r][c];
  }
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c)
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = rows;
    cpp_rational best;
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][enter] <= 0) continue;
      const cpp_rational ratio = t[r][cols] / t[r][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded direction cannot occur for phase one
    const cpp_rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || t[r][enter] == 0) continue;
      const cpp_rational factor = t[r][enter];
      for (std::size_t c = 0; c <= cols; ++c) t[r][c] -= factor * t[leave][c];
    }
    const cpp_rational factor = cost[enter];
    for (std::size_t c = 0; c <= cols; ++c) cost[c] -= factor * t[leave][c];
    basis[leave] = enter;
  }
  return cost[cols] == 0;
}

}  // namespace

std::vector<bool> certify_vertices(const std::vector<LatticePoint>& points) {
  if (points.empty()) return {};
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("certify_vertices: mixed dimensions");
  std::vector<bool> out(points.size(), true);
  if (points.size() == 1) return out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t m = points.size() - 1;
    std::vector<std::vector<cpp_rational>> a(dim + 1, std::vector<cpp_rational>(m));
    std::vector<cpp_rational> b(dim + 1);
    std::size_t col = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < dim; ++k) a[k][col] = points[j][k];
      a[dim][col] = 1;
      ++col;
    }
    for (std::size_t k = 0; k < dim; ++k) b[k] = points[i][k];
    b[dim] = 1;
    out[i] = !feasible(std::move(a), std::move(b));
  }
  return out;
}

nlohmann::json to_json(const LatticePolytope& p) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : p.vertices) verts.push_back({v[0], v[1]});
  return {{"dimension", p.dimension}, {"vertices", verts}};
}

nlohmann::json to_json(const Fan2& fan) {
  nlohmann::json cones = nlohmann::json::array();
  for (const auto& c : fan.cones) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : c.labels)
      labels.push_back({{"source", l.source},
                        {"vertex", {l.vertex[0], l.vertex[1]}},
                        {"parent", {{l.parent_start[0], l.parent_start[1]}, {l.parent_end[0], l.parent_end[1]}}}});
    cones.push_back({{"start", {c.start[0], c.start[1]}},
                     {"end", {c.end[0], c.end[1]}},
                     {"full_plane", c.full_plane},
                     {"labels", labels}});
  }
  return {{"cones", cones}};
}

}  // namespace amoeba
