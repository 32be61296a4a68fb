#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "amoeba/lattice.hpp"
#include "amoeba/spine.hpp"

using namespace amoeba;

namespace {

LaurentPolynomial line(double c = 1.0) { return {{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, c}}; }
LaurentPolynomial fig1a() { return {{{1, 0}, 2.0}, {{0, 1}, 1.0}, {{0, 0}, 1.0}}; }
LaurentPolynomial cubic() { return {{{2, 1}, 1.0}, {{1, 2}, 1.0}, {{1, 1}, 5.0}, {{0, 0}, 1.0}}; }

SpineData spine_of(const LaurentPolynomial& f, const Window& w) {
  auto r = raster_amoeba(f, w, 256, 0);
  label_components(r, f);
  return build_spine(f, r, 256, 0);
}

LatticePolytope newton(const LaurentPolynomial& f) {
  std::vector<Point2> pts;
  for (const auto& e : f.support()) pts.push_back({e[0], e[1]});
  return convex_hull(pts);
}

bool same_directions(std::vector<Vec2> a, std::vector<Vec2> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k][0] - b[k][0]) > 1e-6 || std::abs(a[k][1] - b[k][1]) > 1e-6) return false;
  return true;
}

}  // namespace

TEST_CASE("spine of the line is the tropical line at the origin") {
  const Window w{-4, 4, -4, 4, 400, 400};
  const auto s = spine_of(line(), w);
  REQUIRE(s.support.size() == 3);
  for (double r : s.coefficients) CHECK(std::abs(r) <= 1e-3);
  REQUIRE(s.curve.vertices.size() == 1);
  CHECK(std::hypot(s.curve.vertices[0].location[0], s.curve.vertices[0].location[1]) <= 2 * w.cell_size());
  CHECK_FALSE(s.incomplete);
}

TEST_CASE("spine of z1 + z2 + 4 is shifted by log 4") {
  const Window w{-4, 5, -4, 5, 400, 400};
  const auto s = spine_of(line(4.0), w);
  REQUIRE(s.curve.vertices.size() == 1);
  const auto v = s.curve.vertices[0].location;
  CHECK(std::abs(v[0] - std::log(4.0)) <= 2 * w.cell_size());
  CHECK(std::abs(v[1] - std::log(4.0)) <= 2 * w.cell_size());
  for (std::size_t k = 0; k < s.support.size(); ++k) {
    const double want = s.support[k] == Exponent{0, 0} ? std::log(4.0) : 0.0;
    CHECK(std::abs(s.coefficients[k] - want) < 1e-3);
  }
}

TEST_CASE("spine of z1 z2 + 1 is the anti-diagonal") {
  const auto s = spine_of(LaurentPolynomial{{{1, 1}, 1.0}, {{0, 0}, 1.0}}, {-3, 3, -3, 3, 300, 300});
  REQUIRE(s.curve.lines.size() == 1);
  const auto& l = s.curve.lines[0];
  CHECK(std::abs(l.direction[0] + l.direction[1]) == 0);
  CHECK(std::abs(l.point[0] + l.point[1]) < 1e-6);
  for (double r : s.coefficients) CHECK(std::abs(r) < 1e-3);
}

TEST_CASE("spine support lies in the Newton polygon and contains its vertices") {
  for (const auto& f : {line(), fig1a(), cubic()}) {
    const auto s = spine_of(f, {-6, 6, -6, 6, 400, 400});
    const auto n = newton(f);
    for (const auto& a : s.support) CHECK(n.contains({a[0], a[1]}));
    for (const auto& v : n.vertices)
      CHECK(std::find(s.support.begin(), s.support.end(), Exponent{v[0], v[1]}) != s.support.end());
    for (const auto& d : balancing_defects(s.curve)) CHECK(d == Point2{0, 0});
    for (double spread : s.spreads) CHECK(spread < kRonkinSpreadLimit);
  }
}

TEST_CASE("limit directions do not depend on the raster resolution") {
  for (const auto& f : {line(), cubic()}) {
    const auto coarse = spine_of(f, {-6, 6, -6, 6, 200, 200});
    const auto fine = spine_of(f, {-6, 6, -6, 6, 400, 400});
    CHECK(same_directions(limit_directions(coarse.curve), limit_directions(fine.curve)));
  }
}

TEST_CASE("retraction of two generic lines") {
  const Window w{-2, 3, -2, 3, 400, 400};
  const auto s1 = spine_of(line(), w), s2 = spine_of(line(4.0), w);
  const auto t = retract_experiment(s1, s2, w, {0.5, 0.2, 0.1}, newton(line()), newton(line(4.0)));
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows.back().components == 1);
  CHECK(t.mixed_volume == Rational(1));
  CHECK(t.stable_points == 1);
  CHECK(t.stable_multiplicity == 1);
}

TEST_CASE("retraction of the line and cubic spines") {
  const Window w{-6, 6, -6, 6, 400, 400};
  const auto s1 = spine_of(fig1a(), w), s2 = spine_of(cubic(), w);
  const auto t = retract_experiment(s1, s2, w, {0.5, 0.2, 0.1}, newton(fig1a()), newton(cubic()));
  CHECK(t.mixed_volume == Rational(3));
  CHECK(t.stable_multiplicity == 3);
  const auto last = t.rows.back().components;
  CHECK(last <= 3);
  CHECK(last >= t.stable_points);
}

TEST_CASE("identical spines retract to one component") {
  const Window w{-3, 3, -3, 3, 300, 300};
  const auto s1 = spine_of(line(), w);
  const LaurentPolynomial twice{{{1, 0}, 2.0}, {{0, 1}, 2.0}, {{0, 0}, 2.0}};
  const auto s2 = spine_of(twice, w);
  const auto t = retract_experiment(s1, s2, w, {0.5, 0.2, 0.1}, newton(line()), newton(twice));
  for (const auto& row : t.rows) CHECK(row.components == 1);
}

TEST_CASE("retraction rejects bad epsilon schedules") {
  const Window w{-3, 3, -3, 3, 300, 300};
  const auto s = spine_of(line(), w);
  const auto n = newton(line());
  CHECK_THROWS(retract_experiment(s, s, w, {0.1, 0.2}, n, n));
  CHECK_THROWS(retract_experiment(s, s, w, {0.5, -0.1}, n, n));
  CHECK_THROWS(retract_experiment(s, s, w, {0.5, 0.001}, n, n));
}

TEST_CASE("count_components uses 4-connectivity") {
  // diagonal neighbours are separate
  const std::vector<std::uint8_t> cells{1, 0, 0,
                                        0, 1, 0,
                                        0, 1, 1};
  CHECK(count_components(cells, 3, 3) == 2);
  CHECK(count_components(std::vector<std::uint8_t>(9, 0), 3, 3) == 0);
}

TEST_CASE("curve neighborhood covers the curve") {
  const Window w{-2, 2, -2, 2, 100, 100};
  const auto c = tropical_curve({{{1, 0}, {0, 1}, {0, 0}}, {0, 0, 0}});
  const auto n0 = curve_neighborhood(c, w, 0), n2 = curve_neighborhood(c, w, 2);
  const auto origin = *w.cell_of({0.01, 0.01});
  CHECK(n0[static_cast<std::size_t>(origin[1]) * w.nx + origin[0]]);
  std::size_t a = 0, b = 0;
  for (std::size_t k = 0; k < n0.size(); ++k) {
    a += n0[k];
    b += n2[k];
    if (n0[k]) CHECK(n2[k]);
  }
  CHECK(b > a);
}
