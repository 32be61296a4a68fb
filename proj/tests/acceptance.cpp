// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "amoeba/lattice.hpp"
#include "amoeba/report.hpp"
#include "amoeba/tropical.hpp"
#include "amoeba/util.hpp"
#include "oracles.hpp"

using namespace amoeba;

namespace {

constexpr double kOracleAgreement = 0.995;
constexpr double kVertexCells = 2.0;
constexpr double kLineBudgetSeconds = 60.0;
constexpr double kFig1BudgetSeconds = 180.0;
constexpr int kRandomLifts = 20;
constexpr double kGradientStep = 1e-3;
constexpr double kGradientTolerance = 1e-2;
constexpr int kGradientPoints = 20;
constexpr int kGradientQuad = 256;
constexpr double kSpineCoefficientTolerance = 1e-3;
constexpr int kConstancyPoints = 100;

std::string scenario_path(const std::string& name) { return std::string(AMOEBA_SCENARIO_DIR) + "/" + name + ".json"; }

struct Timed {
  PairAnalysis a;
  double seconds = 0;
};

Timed analyze(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{analyze_pair(s.polynomials[0], s.polynomials[1], scenario_window(s), s), 0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double line_agreement(const AmoebaRaster& r, double a, double b, double c) {
  const Window& w = r.window;
  std::size_t agree = 0;
  for (int j = 0; j < w.ny; ++j)
    for (int i = 0; i < w.nx; ++i) {
      const auto x = w.center(i, j);
      agree += r.member(i, j) == oracle::in_line_amoeba(a, b, c, x[0], x[1]);
    }
  return static_cast<double>(agree) / (static_cast<double>(w.nx) * w.ny);
}

std::string matrix_text(const OrderMatrix& m) {
  std::ostringstream o;
  o << "((" << m.rows[0][0] << "," << m.rows[0][1] << "),(" << m.rows[1][0] << "," << m.rows[1][1] << "))";
  return o.str();
}

std::string status_of(const IntersectionReport& r, const std::string& key) {
  const Verdict* v = r.verdict(key);
  return v ? to_string(v->status) : "missing";
}

// Cells whose (2 margin + 1)-square neighbourhood lies in one complement component.
std::vector<std::array<int, 2>> deep_cells(const AmoebaRaster& r, int margin) {
  const Window& w = r.window;
  std::vector<std::array<int, 2>> out;
  for (int j = margin; j < w.ny - margin; ++j)
    for (int i = margin; i < w.nx - margin; ++i) {
      const int id = r.component_at(i, j);
      if (id < 0) continue;
      bool deep = true;
      for (int dj = -margin; dj <= margin && deep; ++dj)
        for (int di = -margin; di <= margin && deep; ++di) deep = r.component_at(i + di, j + dj) == id;
      if (deep) out.push_back({i, j});
    }
  return out;
}

void criterion1(const Timed& t) {
  const auto& a = t.a;
  const auto& rep = a.report;
  const double agree1 = line_agreement(a.r1, 1, 1, 1), agree2 = line_agreement(a.r2, 1, 1, 4);
  const double cell = a.window.cell_size();
  const Vec2 p{std::log(2.5), std::log(1.5)}, q{std::log(1.5), std::log(2.5)};
  const OrderMatrix mp{{Exponent{1, 0}, Exponent{0, 0}}}, mq{{Exponent{0, 1}, Exponent{0, 0}}};
  bool hit_p = false, hit_q = false;
  for (const auto& v : rep.vertices) {
    if (std::hypot(v.location[0] - p[0], v.location[1] - p[1]) <= kVertexCells * cell && v.order_matrix == mp) hit_p = true;
    if (std::hypot(v.location[0] - q[0], v.location[1] - q[1]) <= kVertexCells * cell && v.order_matrix == mq) hit_q = true;
  }
  const bool containment = status_of(rep, "order_polytope_containment") == "pass";
  const bool ok = agree1 >= kOracleAgreement && agree2 >= kOracleAgreement && rep.components.size() == 1 &&
                  rep.vertices.size() == 2 && hit_p && hit_q && containment && t.seconds < kLineBudgetSeconds;
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "line pair: oracle agreement %.4f/%.4f (>= %.3f), components %zu, vertices %zu, "
                "vertex (log2.5,log1.5) %s, vertex (log1.5,log2.5) %s, containment %s, %.2f s",
                agree1, agree2, kOracleAgreement, rep.components.size(), rep.vertices.size(), hit_p ? "ok" : "missing",
                hit_q ? "ok" : "missing", containment ? "pass" : "fail", t.seconds);
  report(1, ok, buf);
}

void criterion2(const Timed& t) {
  const auto& rep = t.a.report;
  const char* keys[] = {"bernstein", "bezout", "spine_hit", "order_injectivity", "mixed_cone_correspondence",
                        "normal_cone_containment", "boundary_orders", "dimension"};
  std::string failed;
  for (const char* k : keys)
    if (status_of(rep, k) != "pass") failed += std::string(failed.empty() ? "" : ", ") + k + "=" + status_of(rep, k);
  bool hits = true;
  for (const auto& k : rep.components) hits = hits && !k.spine_hits.empty();
  const bool ok = rep.components.size() == 2 && rep.mixed_volume == Rational(3) && rep.bezout_product == 3 &&
                  failed.empty() && hits && t.seconds < kFig1BudgetSeconds;
  char buf[600];
  std::snprintf(buf, sizeof buf, "line and cubic pair: components %zu, MV %ld, Bezout %ld, spine hits %s, verdicts %s, %.2f s",
                rep.components.size(), static_cast<long>(rep.mixed_volume.numerator()), static_cast<long>(rep.bezout_product),
                hits ? "all" : "missing", failed.empty() ? "all pass" : ("not passing: " + failed).c_str(), t.seconds);
  report(2, ok, buf);
}

void criterion3() {
  const std::vector<Point2> t{{0, 0}, {1, 0}, {0, 1}}, q{{0, 0}, {2, 1}, {1, 2}, {1, 1}};
  std::vector<Point2> square;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) square.push_back({a, b});
  const std::vector<Point2> quad{{3, 0}, {0, 3}, {1, 0}, {0, 1}};
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> num(-48, 48);
  auto lift = [&](std::size_t n) {
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(num(rng) / 16.0);
    return out;
  };
  int ok1 = 0, ok2 = 0;
  std::string bad;
  for (int k = 0; k < kRandomLifts; ++k) {
    const auto seed = static_cast<std::uint64_t>(k);
    const auto n1 = tropical_bernstein_count(tropical_curve({t, lift(t.size())}), tropical_curve({q, lift(q.size())}), seed);
    const auto n2 = tropical_bernstein_count(tropical_curve({square, lift(square.size())}),
                                             tropical_curve({quad, lift(quad.size())}), seed);
    ok1 += n1 == 3;
    ok2 += n2 == 12;
    if (n1 != 3) bad += " T/Q lift " + std::to_string(k) + " gave " + std::to_string(n1) + ";";
    if (n2 != 12) bad += " square/quad lift " + std::to_string(k) + " gave " + std::to_string(n2) + ";";
  }
  const bool mv = mixed_volume(convex_hull(t), convex_hull(q)) == Rational(3) &&
                  mixed_volume(convex_hull(square), convex_hull(quad)) == Rational(12);
  report(3, ok1 == kRandomLifts && ok2 == kRandomLifts && mv,
         "tropical Bernstein: " + std::to_string(ok1) + "/" + std::to_string(kRandomLifts) + " lifts give 3, " +
             std::to_string(ok2) + "/" + std::to_string(kRandomLifts) + " give 12" + bad);
}

void criterion4() {
  const LaurentPolynomial fs[] = {LaurentPolynomial{{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, 1.0}},
                                  LaurentPolynomial{{{2, 1}, 1.0}, {{1, 2}, 1.0}, {{1, 1}, 5.0}, {{0, 0}, 1.0}}};
  const Window w{-4, 4, -4, 4, 200, 200};
  double worst = 0;
  int tested = 0, bad = 0;
  std::mt19937_64 rng(4);
  for (const auto& f : fs) {
    auto r = raster_amoeba(f, w, 256, 0);
    label_components(r, f);
    const auto cells = deep_cells(r, 3);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    for (int k = 0; k < kGradientPoints; ++k) {
      const auto c = cells[pick(rng)];
      const auto ctr = w.center(c[0], c[1]);
      const std::array<double, 2> x{ctr[0] + jitter(rng) * w.dx(), ctr[1] + jitter(rng) * w.dy()};
      const auto ord = order_at(f, x, kDefaultOrderTrials, static_cast<std::uint64_t>(k));
      const double h = kGradientStep;
      const double g1 = (ronkin(f, {x[0] + h, x[1]}, kGradientQuad).value - ronkin(f, {x[0] - h, x[1]}, kGradientQuad).value) / (2 * h);
      const double g2 = (ronkin(f, {x[0], x[1] + h}, kGradientQuad).value - ronkin(f, {x[0], x[1] - h}, kGradientQuad).value) / (2 * h);
      const double err = std::max(std::abs(g1 - ord[0]), std::abs(g2 - ord[1]));
      worst = std::max(worst, err);
      ++tested;
      bad += err >= kGradientTolerance;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "Ronkin gradient law: %d points, max deviation %.2e (< %.0e), %d outside", tested, worst,
                kGradientTolerance, bad);
  report(4, bad == 0, buf);
}

void criterion5() {
  const auto s = load_scenario(scenario_path("line"));
  const auto w = scenario_window(s);
  const auto& f = s.polynomials[0];
  auto r = raster_amoeba(f, w, s.angle_samples, s.seed);
  label_components(r, f);
  const auto spine = build_spine(f, r, s.quad_n, s.seed);
  double worst = 0;
  for (double c : spine.coefficients) worst = std::max(worst, std::abs(c));
  double dist = INFINITY;
  for (const auto& v : spine.curve.vertices) dist = std::min(dist, std::hypot(v.location[0], v.location[1]));
  const bool ok = spine.support.size() == 3 && worst <= kSpineCoefficientTolerance && dist <= kVertexCells * w.cell_size();
  char buf[200];
  std::snprintf(buf, sizeof buf, "line spine: %zu coefficients, max |r| %.2e (<= %.0e), vertex %.4f from origin (<= %.4f)",
                spine.coefficients.size(), worst, kSpineCoefficientTolerance, dist, kVertexCells * w.cell_size());
  report(5, ok, buf);
}

struct Run {
  std::string name;
  Scenario scenario;
  Timed t;
};

void criterion6(const std::vector<const Run*>& runs) {
  int tested = 0, violations = 0, clashes = 0;
  std::string where;
  std::mt19937_64 rng(6);
  for (const auto* run : runs) {
    const auto& a = run->t.a;
    for (int k = 0; k < 2; ++k) {
      const AmoebaRaster& r = k == 0 ? a.r1 : a.r2;
      const LaurentPolynomial& f = run->scenario.polynomials[static_cast<std::size_t>(k)];
      const auto cells = deep_cells(r, 2);
      std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
      for (int n = 0; n < kConstancyPoints; ++n) {
        const auto c = cells[pick(rng)];
        const auto want = r.order_of_component(r.component_at(c[0], c[1]));
        ++tested;
        try {
          if (!want || order_at(f, r.window.center(c[0], c[1]), kDefaultOrderTrials, static_cast<std::uint64_t>(n)) != *want)
            ++violations;
        } catch (const PointOnAmoeba&) {
          ++violations;
        }
      }
    }
    for (const auto& k : a.report.components) {
      std::set<OrderMatrix> seen;
      for (std::size_t v : k.polytope_vertices)
        if (!seen.insert(a.report.vertices[v].order_matrix).second) {
          ++clashes;
          where += " " + run->name + " component " + std::to_string(k.id) + ";";
        }
    }
  }
  report(6, violations == 0 && clashes == 0,
         "order map: " + std::to_string(tested) + " complement points, " + std::to_string(violations) +
             " constancy violations, " + std::to_string(clashes) + " repeated order matrices on V(P_K)" + where);
}

std::set<Exponent> bounded_orders(const AmoebaRaster& r) {
  std::set<Exponent> out;
  for (const auto& c : r.components)
    if (!c.touches_edge && c.resolved) out.insert(c.order);
  return out;
}

void criterion7(const Timed& t) {
  const auto& a = t.a;
  const auto b1 = bounded_orders(a.r1), b2 = bounded_orders(a.r2);
  std::string detail = "quartic and cubic pair: bounded complement components " + std::to_string(b1.size()) + " (f1), " +
                       std::to_string(b2.size()) + " (f2), intersection components " +
                       std::to_string(a.report.components.size());
  bool ok = !b1.empty() && !b2.empty();
  int with_vertices = 0;
  for (const auto& k : a.report.components) {
    std::vector<std::size_t> special;
    for (std::size_t v : k.vertices) {
      const auto& m = a.report.vertices[v].order_matrix;
      if (b1.count(m.rows[0]) && b2.count(m.rows[1])) special.push_back(v);
    }
    if (special.empty()) continue;
    ++with_vertices;
    const std::set<std::size_t> pk(k.polytope_vertices.begin(), k.polytope_vertices.end());
    bool absent = true, same = true;
    for (std::size_t v : special) {
      absent = absent && !pk.count(v);
      same = same && a.report.vertices[v].order_matrix == a.report.vertices[special[0]].order_matrix;
    }
    detail += "; component " + std::to_string(k.id) + ": " + std::to_string(special.size()) + " such vertices " +
              matrix_text(a.report.vertices[special[0]].order_matrix) + (absent ? ", none in V(P_K)" : ", some in V(P_K)") +
              (same ? ", equal matrices" : ", different matrices");
    ok = ok && special.size() == 2 && absent && same;
  }
  if (with_vertices == 0) detail += "; no vertex has both rows bounded-component orders";
  report(7, ok && with_vertices > 0, detail);
}

void criterion8(const Timed& t) {
  const auto& rep = t.a.report;
  const auto& op = rep.order_polytope;
  const std::string degeneracy = status_of(rep, "degeneracy");
  const bool ok = rep.vertices.size() == 8 && op.vertex_count == 8 && op.shared_with_product == 8 &&
                  op.product_vertices == 16 && degeneracy == "flagged";
  report(8, ok,
         "degenerate pair: V(F) " + std::to_string(rep.vertices.size()) + " elements, O(F) " +
             std::to_string(op.vertex_count) + " vertices (" + std::to_string(op.points.size()) + " distinct matrices), " +
             std::to_string(op.shared_with_product) + " shared with the " + std::to_string(op.product_vertices) +
             "-vertex product, degeneracy " + degeneracy + "; reported only: mixed cones " +
             std::to_string(rep.mixed_cones) + ", hull vertices " + std::to_string(rep.hull_vertices.size()));
}

void criterion9() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"line_pair", "fig1"}) {
    const auto s = load_scenario(scenario_path(name));
    set_worker_count(1);
    const auto one = run_scenario(s);
    set_worker_count(8);
    const auto eight_a = run_scenario(s);
    const auto eight_b = run_scenario(s);
    set_worker_count(0);
    const std::string r1 = one.report.dump(2), r8a = eight_a.report.dump(2), r8b = eight_b.report.dump(2);
    const bool same_runs = r8a == r8b && eight_a.svg == eight_b.svg;
    const bool same_workers = r1 == r8a && one.svg == eight_a.svg;
    ok = ok && same_runs && same_workers;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": repeat " + (same_runs ? "identical" : "differs") +
              ", workers 1 vs 8 " + (same_workers ? "identical" : "differs") + " (" + std::to_string(r1.size()) + " bytes)";
  }
  report(9, ok, "determinism: " + detail);
}

}  // namespace

int main() {
  auto load = [](const std::string& name) {
    Run r;
    r.name = name;
    r.scenario = load_scenario(scenario_path(name));
    r.t = analyze(r.scenario);
    return r;
  };
  const Run line_pair = load("line_pair");
  criterion1(line_pair.t);
  const Run fig1 = load("fig1");
  criterion2(fig1.t);
  criterion3();
  criterion4();
  criterion5();
  criterion6({&line_pair, &fig1});
  criterion7(load("fig2").t);
  criterion8(load("fig3_degenerate").t);
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
