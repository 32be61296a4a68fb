#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoeba/lattice.hpp"

namespace amoeba {

using Vec2 = std::array<double, 2>;

/// Max-plus polynomial max_a (b_a + <x, a>).
struct TropicalPoly {
  std::vector<Point2> support;
  std::vector<double> coefficients;

  /// Throws std::invalid_argument on repeated support points or size mismatch.
  void validate() const;
};

struct TropicalValue {
  double value = 0.0;
  std::vector<Point2> argmax;
};

/// Tropical value at x and the support points attaining it within 1e-9.
TropicalValue tropical_eval(const TropicalPoly& h, const Vec2& x);

/// Finite edge between two curve vertices; `direction` is the primitive
/// integer vector pointing from `from` to `to`.
struct TropicalEdge {
  std::size_t from_vertex = 0;
  std::size_t to_vertex = 0;
  Vec2 from{};
  Vec2 to{};
  Point2 direction{};
  std::int64_t weight = 1;
  std::array<Point2, 2> dual{};  // edge of the dual subdivision
};

/// Half-line from `base`; `vertex` is the index of the base vertex.
struct TropicalRay {
  std::size_t vertex = 0;
  Vec2 base{};
  Point2 direction{};
  std::int64_t weight = 1;
  std::array<Point2, 2> dual{};
};

/// Full line, produced when the support is collinear.
struct TropicalLine {
  Vec2 point{};
  Point2 direction{};
  std::int64_t weight = 1;
  std::array<Point2, 2> dual{};
};

struct TropicalVertex {
  Vec2 location{};
  std::vector<Point2> dual_cell;  // counterclockwise polygon of the subdivision
};

/// Balanced weighted 1-complex dual to the regular subdivision induced by
/// the lift a -> b_a.
struct TropicalCurve {
  std::vector<TropicalVertex> vertices;
  std::vector<TropicalEdge> edges;
  std::vector<TropicalRay> rays;
  std::vector<TropicalLine> lines;
  /// Cells of the regular subdivision (one per vertex, or the segments of a
  /// collinear support).
  std::vector<std::vector<Point2>> subdivision;
};

/// Lifts are snapped to multiples of this before exact hulling.
inline constexpr double kLiftResolution = 1e-9;

/// Throws std::invalid_argument for an empty or single-point support.
/// Collinear supports give parallel lines.
TropicalCurve tropical_curve(const TropicalPoly& h);

/// Sum of weight * outgoing direction at every vertex; all zero for a valid curve.
std::vector<Point2> balancing_defects(const TropicalCurve& c);

struct StableIntersectionPoint {
  Vec2 location{};
  std::int64_t multiplicity = 0;
  /// Dual edges whose Minkowski sum is the mixed cell (one entry per
  /// transverse crossing collapsing onto this point).
  std::vector<std::array<Point2, 4>> dual_mixed_cells;
};

class NonConvergentIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StableIntersectionResult {
  std::vector<StableIntersectionPoint> points;
  /// Transverse crossings before clustering: the mixed cells of the induced
  /// mixed subdivision.
  std::size_t mixed_cells = 0;
};

/// Limit of C1 ∩ (C2 + eps v) as eps -> 0, checked against a second
/// direction. Throws NonConvergentIntersection on disagreement.
StableIntersectionResult stable_intersection(const TropicalCurve& c1, const TropicalCurve& c2, std::uint64_t seed);

/// Sum of multiplicities of the stable intersection.
std::int64_t tropical_bernstein_count(const TropicalCurve& c1, const TropicalCurve& c2, std::uint64_t seed = 0);

/// Normalized ray (and line) directions, deduplicated.
std::vector<Vec2> limit_directions(const TropicalCurve& c);

nlohmann::json to_json(const TropicalCurve& c);
nlohmann::json to_json(const TropicalPoly& h);

}  // namespace amoeba
