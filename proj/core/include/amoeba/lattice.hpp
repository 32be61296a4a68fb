#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

namespace amoeba {

using Point2 = std::array<std::int64_t, 2>;
using LatticePoint = std::vector<std::int64_t>;
using Rational = boost::rational<std::int64_t>;

/// Convex lattice polygon. Vertices are counterclockwise starting from the
/// lexicographically smallest one, with no three collinear.
struct LatticePolytope {
  std::vector<Point2> vertices;
  int dimension = 0;  // 0 point, 1 segment, 2 polygon

  bool operator==(const LatticePolytope&) const = default;
  /// Exact closed containment test.
  bool contains(const Point2& p) const;
  /// Lattice points of the polygon (boundary included).
  std::vector<Point2> lattice_points() const;
};

std::int64_t cross(const Point2& o, const Point2& a, const Point2& b);
std::int64_t gcd_abs(std::int64_t a, std::int64_t b);
Point2 primitive(Point2 v);

LatticePolytope convex_hull(const std::vector<Point2>& points);
LatticePolytope minkowski_sum(const LatticePolytope& p, const LatticePolytope& q);

/// Twice the Euclidean area (a standard lattice triangle has volume 1).
Rational normalized_volume(const LatticePolytope& p);
/// (NVol(P+Q) - NVol(P) - NVol(Q)) / 2.
Rational mixed_volume(const LatticePolytope& p, const LatticePolytope& q);

/// Where a cone of a fan came from: the vertex `vertex` of source polytope
/// `source`, whose full normal cone spans parent_start..parent_end.
struct ConeLabel {
  int source = 0;
  Point2 vertex{};
  Point2 parent_start{};
  Point2 parent_end{};
  bool operator==(const ConeLabel&) const = default;
};

/// Closed planar cone swept counterclockwise from `start` to `end`.
/// start == end means the full plane; start == -end a half-plane.
struct Cone2 {
  Point2 start{};
  Point2 end{};
  bool full_plane = false;
  std::vector<ConeLabel> labels;

  bool is_half_plane() const { return !full_plane && start[0] == -end[0] && start[1] == -end[1]; }
  /// Direction strictly inside the cone.
  Point2 interior_direction() const;
  /// d lies in the open cone.
  bool contains_strictly(const Point2& d) const;
  /// d lies in the closed cone.
  bool contains(const Point2& d) const;
  bool same_rays(const Cone2& other) const;
  /// Angular width in degrees, in (0, 360].
  double width_degrees() const;
};

struct Fan2 {
  std::vector<Cone2> cones;  // counterclockwise
};

/// Counterclockwise angle comparison starting from direction (1, 0).
bool angle_less(const Point2& a, const Point2& b);
/// Same direction (positive multiples).
bool same_direction(const Point2& a, const Point2& b);

/// Normal fan under the max convention. Requires a two-dimensional polygon.
Fan2 normal_fan(const LatticePolytope& p, int source = 0);
/// All full-dimensional intersections of cones of the two fans.
Fan2 common_refinement(const Fan2& f1, const Fan2& f2);
/// Cones of a refinement that differ from both parents.
std::vector<Cone2> mixed_cones(const Fan2& refinement);
/// Normal cone of `vertex` in `p`.
Cone2 normal_cone(const LatticePolytope& p, const Point2& vertex);
/// Whether the two closed cones share an open (full-dimensional) piece.
bool cones_overlap(const Cone2& a, const Cone2& b);

/// For every point, whether it is not in the convex hull of the others.
/// Decided exactly by a rational phase-one simplex.
std::vector<bool> certify_vertices(const std::vector<LatticePoint>& points);

nlohmann::json to_json(const LatticePolytope& p);
nlohmann::json to_json(const Fan2& fan);

}  // namespace amoeba
