#include "amoeba/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "amoeba/util.hpp"

namespace amoeba {

namespace {

using Wide = __int128;

constexpr double kArgmaxTolerance = 1e-9;
constexpr std::array<double, 3> kEpsilonSchedule{1e-2, 1e-3, 1e-4};
constexpr double kClusterTolerance = 1e-5;
constexpr double kDirectionAgreement = 1e-6;

std::int64_t snap(double b) {
  const double scaled = std::round(b / kLiftResolution);
  if (!std::isfinite(scaled) || std::abs(scaled) > 9e17) throw std::invalid_argument("tropical coefficient out of range");
  return static_cast<std::int64_t>(scaled);
}

struct Lifted {
  Point2 a;
  std::int64_t n;  // snapped lift
};

TropicalCurve collinear_curve(const std::vector<Lifted>& pts, const Point2& base, const Point2& dir) {
  // position along dir and lift
  struct Along {
    std::int64_t t;
    std::int64_t n;
    Point2 a;
  };
  const std::int64_t dd = dir[0] * dir[0] + dir[1] * dir[1];
  std::vector<Along> line;
  for (const auto& p : pts)
    line.push_back({((p.a[0] - base[0]) * dir[0] + (p.a[1] - base[1]) * dir[1]) / dd, p.n, p.a});
  std::sort(line.begin(), line.end(), [](const Along& x, const Along& y) { return x.t < y.t; });
  std::vector<Along> hull;
  for (const auto& p : line) {
    while (hull.size() >= 2) {
      const Along& o = hull[hull.size() - 2];
      const Along& q = hull.back();
      const Wide c = static_cast<Wide>(q.t - o.t) * (p.n - o.n) - static_cast<Wide>(q.n - o.n) * (p.t - o.t);
      if (c >= 0) hull.pop_back();  // q on or below chord o-p
      else break;
    }
    hull.push_back(p);
  }
  TropicalCurve curve;
  const Point2 normal = primitive({-dir[1], dir[0]});
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const Along& lo = hull[i];
    const Along& hi = hull[i + 1];
    const long double s = static_cast<long double>(lo.n - hi.n) * kLiftResolution /
                          (static_cast<long double>(hi.t - lo.t) * static_cast<long double>(dd));
    TropicalLine l;
    l.point = {static_cast<double>(s * dir[0]), static_cast<double>(s * dir[1])};
    l.direction = normal;
    l.weight = hi.t - lo.t;
    l.dual = {lo.a, hi.a};
    curve.lines.push_back(l);
    curve.subdivision.push_back({lo.a, hi.a});
  }
  return curve;
}

Vec2 face_vertex(const std::vector<Lifted>& pts, const std::vector<Point2>& cell,
                 const std::map<Point2, std::int64_t>& lift) {
  const Point2& a0 = cell[0];
  const Point2& a1 = cell[1];
  const Point2& a2 = cell[2];
  const Wide u0 = a1[0] - a0[0], u1 = a1[1] - a0[1];
  const Wide w0 = a2[0] - a0[0], w1 = a2[1] - a0[1];
  const Wide r1 = lift.at(a0) - lift.at(a1);
  const Wide r2 = lift.at(a0) - lift.at(a2);
  const Wide det = u0 * w1 - u1 * w0;
  const Wide nx = w1 * r1 - u1 * r2;
  const Wide ny = -w0 * r1 + u0 * r2;
  (void)pts;
  const long double scale = static_cast<long double>(kLiftResolution) / static_cast<long double>(det);
  return {static_cast<double>(static_cast<long double>(nx) * scale),
          static_cast<double>(static_cast<long double>(ny) * scale)};
}

}  // namespace

void TropicalPoly::validate() const {
  if (support.size() != coefficients.size()) throw std::invalid_argument("support/coefficient size mismatch");
  std::set<Point2> seen(support.begin(), support.end());
  if (seen.size() != support.size()) throw std::invalid_argument("tropical support points must be distinct");
}

TropicalValue tropical_eval(const TropicalPoly& h, const Vec2& x) {
  h.validate();
  if (h.support.empty()) throw std::invalid_argument("empty tropical polynomial");
  TropicalValue out;
  out.value = -std::numeric_limits<double>::infinity();
  std::vector<double> vals(h.support.size());
  for (std::size_t i = 0; i < h.support.size(); ++i) {
    vals[i] = h.coefficients[i] + x[0] * static_cast<double>(h.support[i][0]) +
              x[1] * static_cast<double>(h.support[i][1]);
    out.value = std::max(out.value, vals[i]);
  }
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (out.value - vals[i] <= kArgmaxTolerance) out.argmax.push_back(h.support[i]);
  std::sort(out.argmax.begin(), out.argmax.end());
  return out;
}

TropicalCurve tropical_curve(const TropicalPoly& h) {
  h.validate();
  if (h.support.size() < 2) throw std::invalid_argument("tropical curve needs at least two support points");
  std::vector<Lifted> pts;
  std::map<Point2, std::int64_t> lift;
  for (std::size_t i = 0; i < h.support.size(); ++i) {
    pts.push_back({h.support[i], snap(h.coefficients[i])});
    lift[h.support[i]] = pts.back().n;
  }
  const LatticePolytope newton = convex_hull(h.support);
  if (newton.dimension == 1) {
    const Point2 dir = primitive({newton.vertices[1][0] - newton.vertices[0][0],
                                  newton.vertices[1][1] - newton.vertices[0][1]});
    return collinear_curve(pts, newton.vertices[0], dir);
  }

  // Upper faces of the lifted point set, by brute force over triples.
  std::set<std::vector<std::size_t>> faces;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Wide ux = pts[j].a[0] - pts[i].a[0], uy = pts[j].a[1] - pts[i].a[1], un = pts[j].n - pts[i].n;
        const Wide wx = pts[k].a[0] - pts[i].a[0], wy = pts[k].a[1] - pts[i].a[1], wn = pts[k].n - pts[i].n;
        Wide nx = uy * wn - un * wy;
        Wide ny = un * wx - ux * wn;
        Wide nz = ux * wy - uy * wx;
        if (nz == 0) continue;
        if (nz < 0) {
          nx = -nx;
          ny = -ny;
          nz = -nz;
        }
        std::vector<std::size_t> on;
        bool upper = true;
        for (std::size_t q = 0; q < n && upper; ++q) {
          const Wide side = nx * (pts[q].a[0] - pts[i].a[0]) + ny * (pts[q].a[1] - pts[i].a[1]) + nz * (pts[q].n - pts[i].n);
          if (side > 0) upper = false;
          else if (side == 0) on.push_back(q);
        }
        if (upper) faces.insert(on);
      }

  TropicalCurve curve;
  struct Incidence {
    std::size_t cell;
    Point2 normal;
  };
  std::map<std::pair<Point2, Point2>, std::vector<Incidence>> edge_cells;
  for (const auto& face : faces) {
    std::vector<Point2> projected;
    for (std::size_t idx : face) projected.push_back(pts[idx].a);
    const LatticePolytope cell = convex_hull(projected);
    TropicalVertex v;
    v.location = face_vertex(pts, cell.vertices, lift);
    v.dual_cell = cell.vertices;
    const std::size_t id = curve.vertices.size();
    curve.vertices.push_back(v);
    curve.subdivision.push_back(cell.vertices);
    const auto& cv = cell.vertices;
    for (std::size_t e = 0; e < cv.size(); ++e) {
      const Point2& p = cv[e];
      const Point2& q = cv[(e + 1) % cv.size()];
      const Point2 normal = primitive({q[1] - p[1], -(q[0] - p[0])});
      edge_cells[{std::min(p, q), std::max(p, q)}].push_back({id, normal});
    }
  }
  for (const auto& [key, inc] : edge_cells) {
    const std::int64_t weight = gcd_abs(key.second[0] - key.first[0], key.second[1] - key.first[1]);
    if (inc.size() == 2) {
      TropicalEdge e;
      e.from_vertex = inc[0].cell;
      e.to_vertex = inc[1].cell;
      e.from = curve.vertices[e.from_vertex].location;
      e.to = curve.vertices[e.to_vertex].location;
      e.direction = inc[0].normal;
      e.weight = weight;
      e.dual = {key.first, key.second};
      curve.edges.push_back(e);
    } else if (inc.size() == 1) {
      TropicalRay r;
      r.vertex = inc[0].cell;
      r.base = curve.vertices[r.vertex].location;
      r.direction = inc[0].normal;
      r.weight = weight;
      r.dual = {key.first, key.second};
      curve.rays.push_back(r);
    } else {
      throw std::logic_error("subdivision edge shared by more than two cells");
    }
  }
  return curve;
}

std::vector<Point2> balancing_defects(const TropicalCurve& c) {
  std::vector<Point2> sums(c.vertices.size(), Point2{0, 0});
  for (const auto& e : c.edges) {
    sums[e.from_vertex][0] += e.weight * e.direction[0];
    sums[e.from_vertex][1] += e.weight * e.direction[1];
    sums[e.to_vertex][0] -= e.weight * e.direction[0];
    sums[e.to_vertex][1] -= e.weight * e.direction[1];
  }
  for (const auto& r : c.rays) {
    sums[r.vertex][0] += r.weight * r.direction[0];
    sums[r.vertex][1] += r.weight * r.direction[1];
  }
  return sums;
}

namespace {

struct Piece {
  enum Kind { segment, ray, line } kind;
  Vec2 origin;
  Vec2 span;  // segment: to - from; ray/line: primitive direction
  Point2 direction;
  std::int64_t weight;
  std::array<Point2, 2> dual;
};

std::vector<Piece> pieces(const TropicalCurve& c) {
  std::vector<Piece> out;
  for (const auto& e : c.edges)
    out.push_back({Piece::segment, e.from, {e.to[0] - e.from[0], e.to[1] - e.from[1]}, e.direction, e.weight, e.dual});
  for (const auto& r : c.rays)
    out.push_back({Piece::ray, r.base, {static_cast<double>(r.direction[0]), static_cast<double>(r.direction[1])},
                   r.direction, r.weight, r.dual});
  for (const auto& l : c.lines)
    out.push_back({Piece::line, l.point, {static_cast<double>(l.direction[0]), static_cast<double>(l.direction[1])},
                   l.direction, l.weight, l.dual});
  return out;
}

bool in_range(const Piece& p, double s) {
  switch (p.kind) {
    case Piece::segment: return s >= 0.0 && s <= 1.0;
    case Piece::ray: return s >= 0.0;
    case Piece::line: return true;
  }
  return false;
}

struct Crossing {
  Vec2 limit;
  std::int64_t multiplicity;
  std::array<Point2, 4> dual;
};

std::vector<Crossing> crossings(const std::vector<Piece>& a, const std::vector<Piece>& b, const Vec2& shift) {
  std::vector<Crossing> out;
  for (const auto& pa : a)
    for (const auto& pb : b) {
      const std::int64_t det_int = pa.direction[0] * pb.direction[1] - pa.direction[1] * pb.direction[0];
      if (det_int == 0) continue;
      const double det = pa.span[0] * pb.span[1] - pa.span[1] * pb.span[0];
      const double qx = pb.origin[0] + shift[0] - pa.origin[0];
      const double qy = pb.origin[1] + shift[1] - pa.origin[1];
      const double s = (qx * pb.span[1] - qy * pb.span[0]) / det;
      const double u = (qx * pa.span[1] - qy * pa.span[0]) / det;
      if (!in_range(pa, s) || !in_range(pb, u)) continue;
      const double qx0 = pb.origin[0] - pa.origin[0];
      const double qy0 = pb.origin[1] - pa.origin[1];
      const double s0 = (qx0 * pb.span[1] - qy0 * pb.span[0]) / det;
      Crossing c;
      c.limit = {pa.origin[0] + s0 * pa.span[0], pa.origin[1] + s0 * pa.span[1]};
      c.multiplicity = (det_int < 0 ? -det_int : det_int) * pa.weight * pb.weight;
      c.dual = {pa.dual[0], pa.dual[1], pb.dual[0], pb.dual[1]};
      out.push_back(c);
    }
  return out;
}

std::vector<StableIntersectionPoint> cluster(const std::vector<Crossing>& cs) {
  std::vector<std::size_t> parent(cs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      if (std::hypot(cs[i].limit[0] - cs[j].limit[0], cs[i].limit[1] - cs[j].limit[1]) <= kClusterTolerance)
        parent[find(i)] = find(j);
  std::map<std::size_t, StableIntersectionPoint> groups;
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto& g = groups[find(i)];
    g.location[0] += cs[i].limit[0];
    g.location[1] += cs[i].limit[1];
    g.multiplicity += cs[i].multiplicity;
    g.dual_mixed_cells.push_back(cs[i].dual);
    ++counts[find(i)];
  }
  std::vector<StableIntersectionPoint> out;
  for (auto& [root, g] : groups) {
    const double k = static_cast<double>(counts[root]);
    g.location = {g.location[0] / k, g.location[1] / k};
    std::sort(g.dual_mixed_cells.begin(), g.dual_mixed_cells.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.location < y.location; });
  return out;
}

struct DirectionalResult {
  std::vector<StableIntersectionPoint> points;
  std::size_t crossings = 0;
};

DirectionalResult along(const std::vector<Piece>& a, const std::vector<Piece>& b, const Vec2& v) {
  std::vector<std::vector<Crossing>> per_eps;
  for (double eps : kEpsilonSchedule) per_eps.push_back(crossings(a, b, {eps * v[0], eps * v[1]}));
  auto total = [](const std::vector<Crossing>& cs) {
    std::int64_t t = 0;
    for (const auto& c : cs) t += c.multiplicity;
    return t;
  };
  const auto& last = per_eps.back();
  if (total(last) != total(per_eps[per_eps.size() - 2]))
    throw NonConvergentIntersection("non-convergent stable intersection: perturbation schedule has not stabilized");
  return {cluster(last), last.size()};
}

}  // namespace

StableIntersectionResult stable_intersection(const TropicalCurve& c1, const TropicalCurve& c2, std::uint64_t seed) {
  const auto a = pieces(c1);
  const auto b = pieces(c2);
  const double phi = std::numbers::phi;
  const double norm = std::hypot(1.0, phi);
  const Vec2 golden{1.0 / norm, phi / norm};
  const double angle = 2.0 * std::numbers::pi * unit_interval(mix_seed(seed, 0x5ab1e));
  const Vec2 random{std::cos(angle), std::sin(angle)};

  const DirectionalResult first = along(a, b, golden);
  const DirectionalResult second = along(a, b, random);
  if (first.points.size() != second.points.size())
    throw NonConvergentIntersection("non-convergent stable intersection: point sets differ between directions");
  for (const auto& p : first.points) {
    const bool matched = std::any_of(second.points.begin(), second.points.end(), [&](const auto& q) {
      return q.multiplicity == p.multiplicity &&
             std::hypot(p.location[0] - q.location[0], p.location[1] - q.location[1]) <= kDirectionAgreement;
    });
    if (!matched)
      throw NonConvergentIntersection("non-convergent stable intersection: point sets differ between directions");
  }
  return {first.points, first.crossings};
}

std::int64_t tropical_bernstein_count(const TropicalCurve& c1, const TropicalCurve& c2, std::uint64_t seed) {
  std::int64_t total = 0;
  for (const auto& p : stable_intersection(c1, c2, seed).points) total += p.multiplicity;
  return total;
}

std::vector<Vec2> limit_directions(const TropicalCurve& c) {
  std::vector<Point2> dirs;
  for (const auto& r : c.rays) dirs.push_back(r.direction);
  for (const auto& l : c.lines) {
    dirs.push_back(l.direction);
    dirs.push_back({-l.direction[0], -l.direction[1]});
  }
  std::sort(dirs.begin(), dirs.end(), angle_less);
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  std::vector<Vec2> out;
  for (const auto& d : dirs) {
    const double len = std::hypot(static_cast<double>(d[0]), static_cast<double>(d[1]));
    out.push_back({static_cast<double>(d[0]) / len, static_cast<double>(d[1]) / len});
  }
  return out;
}

namespace {

nlohmann::json pt(const Vec2& v) { return {v[0], v[1]}; }
nlohmann::json pt(const Point2& v) { return {v[0], v[1]}; }

}  // namespace

nlohmann::json to_json(const TropicalCurve& c) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : c.vertices) {
    nlohmann::json cell = nlohmann::json::array();
    for (const auto& p : v.dual_cell) cell.push_back(pt(p));
    j["vertices"].push_back({{"location", pt(v.location)}, {"dual_cell", cell}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : c.edges)
    j["edges"].push_back({{"from", pt(e.from)}, {"to", pt(e.to)}, {"direction", pt(e.direction)}, {"weight", e.weight}});
  j["rays"] = nlohmann::json::array();
  for (const auto& r : c.rays)
    j["rays"].push_back({{"base", pt(r.base)}, {"direction", pt(r.direction)}, {"weight", r.weight}});
  j["lines"] = nlohmann::json::array();
  for (const auto& l : c.lines)
    j["lines"].push_back({{"point", pt(l.point)}, {"direction", pt(l.direction)}, {"weight", l.weight}});
  return j;
}

nlohmann::json to_json(const TropicalPoly& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < h.support.size(); ++i)
    terms.push_back({{"exp", pt(h.support[i])}, {"coef", h.coefficients[i]}});
  return {{"terms", terms}};
}

}  // namespace amoeba
