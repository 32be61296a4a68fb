#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoeba/lattice.hpp"
#include "amoeba/laurent.hpp"
#include "amoeba/numerics.hpp"
#include "amoeba/spine.hpp"
#include "amoeba/tropical.hpp"

namespace amoeba {

/// Row i is the order of the complement component of amoeba i next to a vertex.
struct OrderMatrix {
  std::array<Exponent, 2> rows{};
  auto operator<=>(const OrderMatrix&) const = default;
  std::array<std::int64_t, 4> flattened() const { return {rows[0][0], rows[0][1], rows[1][0], rows[1][1]}; }
};

struct IntersectionVertex {
  Vec2 location{};
  OrderMatrix order_matrix;
  std::array<int, 2> adjacent_component_ids{-1, -1};  // complement component per amoeba raster
  int component = -1;                                 // intersection component, -1 if none nearby
  bool refined = false;
  bool split = false;  // one of several copies made in degenerate mode
};

/// Candidate vertex that could not be assigned an order matrix.
struct VertexIssue {
  Vec2 location{};
  int amoeba = 0;
  std::string kind;  // "genericity condition (3) violated" or "vertex swallowed"
  std::vector<Exponent> orders;
};

/// Boundary cells of a component next to one complement component of one amoeba.
struct Face {
  int amoeba = 0;
  Exponent order{};
  std::size_t cells = 0;
  std::size_t arcs = 0;  // 8-connected pieces
};

struct ComponentRecord {
  int id = 0;
  std::vector<std::size_t> cells;
  bool bounded = true;
  std::vector<std::size_t> vertices;          // indices into IntersectionReport::vertices
  std::vector<Face> faces;
  std::vector<Vec2> polytope;                 // counterclockwise hull of the vertex locations
  std::vector<std::size_t> polytope_vertices; // vertices that are extreme points
  std::vector<Vec2> spine_hits;
  std::size_t interior_cells = 0;
};

struct IntersectionGrid {
  Window window;
  std::vector<std::uint8_t> cells;
  std::vector<int> component_id;
  std::vector<ComponentRecord> components;
};

/// Cellwise AND and 4-connected components. Throws std::invalid_argument
/// when the windows differ.
IntersectionGrid intersect_rasters(const AmoebaRaster& r1, const AmoebaRaster& r2);

/// Components of at most `max_cells` cells are re-rastered at `factor` times
/// the resolution: dropped when the finer intersection misses them, merged
/// into a neighbor when it connects to one.
std::size_t resolve_small_components(IntersectionGrid& grid, const LaurentPolynomial& f1, const LaurentPolynomial& f2,
                                     int angle_samples, std::uint64_t seed, std::size_t max_cells = 9, int factor = 4);

struct VertexOptions {
  double merge_radius_cells = 3.0;
  int refine_factor = 4;
  int patch_cells = 6;
  double probe_radius_cells = 2.0;
  int probe_count = 16;
  int angle_samples = 256;
  int trials = kDefaultOrderTrials;
  std::uint64_t seed = 0;
  bool degenerate_mode = false;
  std::array<bool, 2> thin{false, false};  // measure-zero amoebas, split in degenerate mode
};

struct VertexExtraction {
  std::vector<IntersectionVertex> vertices;
  std::vector<VertexIssue> issues;
  std::size_t candidates = 0;
};

/// Crossings of the two marching-squares contours, merged, refined and
/// labeled by probing the adjacent complement components.
VertexExtraction extract_vertices(const AmoebaRaster& r1, const AmoebaRaster& r2, const LaurentPolynomial& f1,
                                  const LaurentPolynomial& f2, const IntersectionGrid& grid, const VertexOptions& options);

/// Segments of the contour between member and non-member cell centers.
struct ContourSegment {
  Vec2 a{}, b{};
};
std::vector<ContourSegment> marching_squares(const std::vector<std::uint8_t>& cells, const Window& w, const Vec2& offset = {0, 0});
/// Proper crossings between two segment sets.
std::vector<Vec2> contour_crossings(const std::vector<ContourSegment>& s1, const std::vector<ContourSegment>& s2, const Window& w);

enum class VerdictStatus { pass, fail, flagged, not_checked };

struct Verdict {
  std::string key;
  std::string anchor;  // theorem the check comes from
  VerdictStatus status = VerdictStatus::pass;
  nlohmann::json detail = nlohmann::json::object();
};

struct OrderPolytopeData {
  std::vector<std::array<std::int64_t, 4>> points;  // distinct order matrices
  std::vector<bool> is_vertex;
  std::size_t vertex_count = 0;
  std::size_t shared_with_product = 0;
  std::size_t product_vertices = 0;
};

struct IntersectionReport {
  Window window;
  std::vector<ComponentRecord> components;
  std::vector<IntersectionVertex> vertices;
  std::vector<std::size_t> hull_vertices;  // vertices of conv(V)
  std::vector<Vec2> hull;
  OrderPolytopeData order_polytope;
  Rational mixed_volume{0};
  std::int64_t bezout_product = 0;
  std::size_t mixed_cones = 0;
  std::size_t spine_mixed_cells = 0;
  std::vector<StableIntersectionPoint> stable_points;
  std::vector<VertexIssue> issues;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  bool degenerate_mode = false;
  std::array<bool, 2> thin{false, false};

  bool all_pass() const;
  const Verdict* verdict(const std::string& key) const;
};

/// Fraction of member cells that are interior; below this an amoeba counts as measure-zero.
inline constexpr double kThinnessRatio = 0.05;
bool is_thin(const AmoebaRaster& r);

struct AssembleInputs {
  const AmoebaRaster& r1;
  const AmoebaRaster& r2;
  const LaurentPolynomial& f1;
  const LaurentPolynomial& f2;
  const SpineData& spine1;
  const SpineData& spine2;
  std::uint64_t seed = 0;
  bool degenerate_mode = false;
};

/// Per-component vertices, faces, hulls and verdicts (i)-(viii).
IntersectionReport assemble_components(IntersectionGrid grid, VertexExtraction extraction, const AssembleInputs& in);

/// Order polytope in Z^4 and its two verdicts; fills report.order_polytope.
void order_polytope(IntersectionReport& report, const LaurentPolynomial& f1, const LaurentPolynomial& f2);

/// Genericity conditions (1)-(3) and the degeneracy flag.
void genericity_screen(IntersectionReport& report, const AmoebaRaster& r1, const AmoebaRaster& r2);

/// Longest 8-connected run of cells lying on both raster boundaries.
std::size_t longest_shared_boundary(const AmoebaRaster& r1, const AmoebaRaster& r2);

std::string to_string(VerdictStatus s);
nlohmann::json to_json(const OrderMatrix& m);
nlohmann::json to_json(const IntersectionReport& r);

}  // namespace amoeba
