#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "amoeba/intersection.hpp"
#include "amoeba/report.hpp"
#include "oracles.hpp"

using namespace amoeba;

namespace {

LaurentPolynomial line(double c) { return {{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, c}}; }
LaurentPolynomial fig1a() { return {{{1, 0}, 2.0}, {{0, 1}, 1.0}, {{0, 0}, 1.0}}; }
LaurentPolynomial cubic() { return {{{2, 1}, 1.0}, {{1, 2}, 1.0}, {{1, 1}, 5.0}, {{0, 0}, 1.0}}; }

Scenario pair_scenario(const LaurentPolynomial& f1, const LaurentPolynomial& f2, Bounds b) {
  Scenario s;
  s.polynomials = {f1, f2};
  s.window = b;
  return s;
}

PairAnalysis analyze(const Scenario& s) {
  return analyze_pair(s.polynomials[0], s.polynomials[1], scenario_window(s), s);
}

double segment_distance(const Vec2& p, const ContourSegment& s) {
  const double vx = s.b[0] - s.a[0], vy = s.b[1] - s.a[1];
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p[0] - s.a[0]) * vx + (p[1] - s.a[1]) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - s.a[0] - t * vx, p[1] - s.a[1] - t * vy);
}

double contour_distance(const Vec2& p, const std::vector<ContourSegment>& segs) {
  double best = INFINITY;
  for (const auto& s : segs) best = std::min(best, segment_distance(p, s));
  return best;
}

// Checks shared by every non-degenerate pair.
void check_structure(const PairAnalysis& a) {
  const Window& w = a.window;
  const double cell = w.cell_size();
  const auto c1 = marching_squares(a.r1.membership, w), c2 = marching_squares(a.r2.membership, w);
  for (const auto& v : a.report.vertices) {
    CHECK(contour_distance(v.location, c1) <= 2 * cell);
    CHECK(contour_distance(v.location, c2) <= 2 * cell);
  }
  for (const auto& k : a.report.components) {
    const std::set<std::size_t> vk(k.vertices.begin(), k.vertices.end());
    for (std::size_t p : k.polytope_vertices) CHECK(vk.count(p) == 1);
    // every vertex of K sits next to a cell of K
    for (std::size_t v : k.vertices) {
      const Vec2 loc = a.report.vertices[v].location;
      double best = INFINITY;
      for (std::size_t c : k.cells) {
        const auto ctr = w.center(static_cast<int>(c % w.nx), static_cast<int>(c / w.nx));
        best = std::min(best, std::max(std::abs(ctr[0] - loc[0]), std::abs(ctr[1] - loc[1])));
      }
      CHECK(best <= 2 * cell);
    }
    std::set<OrderMatrix> seen;
    for (std::size_t p : k.polytope_vertices) CHECK(seen.insert(a.report.vertices[p].order_matrix).second);
    for (const auto& f : k.faces) CHECK(f.arcs == 1);
  }
  for (const auto& p : a.report.stable_points) {
    const auto c = w.cell_of(p.location);
    if (!c) continue;
    bool near = false;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int i = (*c)[0] + di, j = (*c)[1] + dj;
        if (i >= 0 && j >= 0 && i < w.nx && j < w.ny && a.grid.cells[static_cast<std::size_t>(j) * w.nx + i]) near = true;
      }
    CHECK(near);
  }
}

}  // namespace

TEST_CASE("marching squares around a single cell") {
  const Window w{0, 3, 0, 3, 3, 3};
  std::vector<std::uint8_t> cells(9, 0);
  cells[4] = 1;
  const auto segs = marching_squares(cells, w);
  CHECK(segs.size() == 4);
  for (const auto& s : segs)
    for (const auto& p : {s.a, s.b}) CHECK(std::abs(p[0] - 1.5) + std::abs(p[1] - 1.5) == doctest::Approx(0.5));
}

TEST_CASE("contour crossings") {
  const Window w{0, 1, 0, 1, 10, 10};
  const std::vector<ContourSegment> a{{{0, 0}, {1, 1}}}, b{{{0, 1}, {1, 0}}}, c{{{0, 0.5}, {0.2, 0.5}}};
  auto x = contour_crossings(a, b, w);
  REQUIRE(x.size() == 1);
  CHECK(x[0][0] == doctest::Approx(0.5));
  CHECK(x[0][1] == doctest::Approx(0.5));
  CHECK(contour_crossings(a, c, w).empty());
}

TEST_CASE("intersect_rasters") {
  const Window w{-2, 3, -2, 3, 200, 200};
  auto r = raster_amoeba(line(1.0), w, 256, 0);
  label_components(r, line(1.0));
  const auto g = intersect_rasters(r, r);
  CHECK(g.cells == r.membership);
  CHECK(g.components.size() == 1);

  auto other = raster_amoeba(line(1.0), Window{-2, 3, -2, 3, 100, 100}, 256, 0);
  CHECK_THROWS_AS(intersect_rasters(r, other), std::invalid_argument);
}

TEST_CASE("line pair: one component, two analytic vertices") {
  const auto a = analyze(pair_scenario(line(1.0), line(4.0), {-2, 3, -2, 3}));
  const double cell = a.window.cell_size();
  REQUIRE(a.report.components.size() == 1);
  CHECK_FALSE(a.report.components[0].bounded);
  REQUIRE(a.report.vertices.size() == 2);
  const Vec2 p{std::log(2.5), std::log(1.5)}, q{std::log(1.5), std::log(2.5)};
  const OrderMatrix mp{{Exponent{1, 0}, Exponent{0, 0}}}, mq{{Exponent{0, 1}, Exponent{0, 0}}};
  int found = 0;
  for (const auto& v : a.report.vertices) {
    if (std::hypot(v.location[0] - p[0], v.location[1] - p[1]) <= 2 * cell) {
      CHECK(v.order_matrix == mp);
      ++found;
    }
    if (std::hypot(v.location[0] - q[0], v.location[1] - q[1]) <= 2 * cell) {
      CHECK(v.order_matrix == mq);
      ++found;
    }
  }
  CHECK(found == 2);
  CHECK(a.report.mixed_volume == Rational(1));
  CHECK(a.report.bezout_product == 1);
  CHECK(a.report.order_polytope.vertex_count == 2);
  CHECK(a.report.all_pass());
  check_structure(a);

  // the intersection matches the analytic region on nearly every cell
  std::size_t agree = 0;
  const Window& w = a.window;
  for (int j = 0; j < w.ny; ++j)
    for (int i = 0; i < w.nx; ++i) {
      const auto c = w.center(i, j);
      const bool in = oracle::in_line_amoeba(1, 1, 1, c[0], c[1]) && oracle::in_line_amoeba(1, 1, 4, c[0], c[1]);
      agree += (a.grid.cells[static_cast<std::size_t>(j) * w.nx + i] != 0) == in;
    }
  CHECK(static_cast<double>(agree) / (w.nx * w.ny) >= 0.995);
}

TEST_CASE("line and cubic pair structure") {
  const auto a = analyze(pair_scenario(fig1a(), cubic(), {-6, 6, -6, 6}));
  CHECK(a.report.components.size() == 2);
  CHECK(a.report.mixed_volume == Rational(3));
  CHECK(a.report.bezout_product == 3);
  for (const auto& k : a.report.components) {
    CHECK_FALSE(k.spine_hits.empty());
    CHECK(k.interior_cells > 0);
    CHECK_FALSE(k.vertices.empty());
  }
  for (const auto& v : a.report.vertices) {
    CHECK(v.order_matrix.rows[0][0] + v.order_matrix.rows[0][1] <= 1);
    CHECK(v.order_matrix.rows[0][0] >= 0);
    CHECK(v.order_matrix.rows[0][1] >= 0);
  }
  check_structure(a);
}

TEST_CASE("identical amoebas fail the codimension screen") {
  const auto a = analyze(pair_scenario(line(1.0), line(1.0), {-3, 3, -3, 3}));
  const auto* v = a.report.verdict("genericity_codimension");
  REQUIRE(v != nullptr);
  CHECK(v->status == VerdictStatus::fail);
  CHECK(longest_shared_boundary(a.r1, a.r2) > 5);
}

TEST_CASE("thinness") {
  const Window w{-2, 2, -2, 2, 200, 200};
  CHECK(is_thin(raster_amoeba(LaurentPolynomial{{{1, 1}, 1.0}, {{0, 0}, 1.0}}, w, 256, 0)));
  CHECK_FALSE(is_thin(raster_amoeba(line(1.0), w, 256, 0)));
}

TEST_CASE("order polytope of a single matrix") {
  IntersectionReport r;
  IntersectionVertex v;
  v.order_matrix = OrderMatrix{{Exponent{1, 0}, Exponent{0, 0}}};
  r.vertices.push_back(v);
  order_polytope(r, line(1.0), line(4.0));
  CHECK(r.order_polytope.points.size() == 1);
  CHECK(r.order_polytope.vertex_count == 1);
  const auto* a = r.verdict("order_polytope_containment");
  REQUIRE(a != nullptr);
  CHECK(a->status == VerdictStatus::pass);
}

TEST_CASE("order polytope containment catches a matrix outside the product") {
  IntersectionReport r;
  IntersectionVertex v;
  v.order_matrix = OrderMatrix{{Exponent{2, 0}, Exponent{0, 0}}};
  r.vertices.push_back(v);
  order_polytope(r, line(1.0), line(4.0));
  CHECK(r.verdict("order_polytope_containment")->status == VerdictStatus::fail);
}
