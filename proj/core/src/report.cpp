#include "amoeba/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "amoeba/lattice.hpp"
#include "amoeba/spine.hpp"
#include "amoeba/svg.hpp"
#include "amoeba/tropical.hpp"
#include "amoeba/util.hpp"

namespace amoeba {

namespace {

using nlohmann::json;

const char* kColor1 = "#4c72b0";
const char* kColor2 = "#dd8452";
const char* kSpine1 = "#1f3b73";
const char* kSpine2 = "#8c4a12";

json rational_json(const Rational& r) {
  return r.denominator() == 1 ? json(r.numerator()) : json(boost::rational_cast<double>(r));
}

json verdict(const std::string& key, const std::string& anchor, VerdictStatus status, json detail) {
  return {{"key", key}, {"theorem", anchor}, {"status", to_string(status)}, {"detail", std::move(detail)}};
}

VerdictStatus pass_if(bool ok) { return ok ? VerdictStatus::pass : VerdictStatus::fail; }

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  // nlohmann reports the position after the offending character
  return {line, column > 1 ? column - 1 : column};
}

template <typename T>
T field(const json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("scenario field \"") + name + "\" has the wrong type");
  }
}

TropicalPoly log_lift(const LaurentPolynomial& f) {
  TropicalPoly h;
  for (const auto& [e, c] : f.terms()) {
    h.support.push_back(e);
    h.coefficients.push_back(std::log(std::abs(c)));
  }
  return h;
}

std::vector<Vec2> outward_normals(const LatticePolytope& p) {
  std::vector<Vec2> out;
  const std::size_t n = p.vertices.size();
  if (p.dimension < 1) return out;
  if (p.dimension == 1) {
    const Point2 d = primitive({p.vertices[1][0] - p.vertices[0][0], p.vertices[1][1] - p.vertices[0][1]});
    const double len = std::hypot(static_cast<double>(d[0]), static_cast<double>(d[1]));
    out.push_back({-d[1] / len, d[0] / len});
    out.push_back({d[1] / len, -d[0] / len});
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& a = p.vertices[k];
      const auto& b = p.vertices[(k + 1) % n];
      const double ex = static_cast<double>(b[0] - a[0]), ey = static_cast<double>(b[1] - a[1]);
      const double len = std::hypot(ex, ey);
      out.push_back({ey / len, -ex / len});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool same_directions(std::vector<Vec2> a, std::vector<Vec2> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& u : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const Vec2& v) { return std::hypot(u[0] - v[0], u[1] - v[1]) <= tol; });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

json vec_list(const std::vector<Vec2>& v) {
  json out = json::array();
  for (const auto& p : v) out.push_back({p[0], p[1]});
  return out;
}

void draw_raster(SvgCanvas& svg, const AmoebaRaster& r, const char* color, double opacity) {
  svg.cells(r.membership, r.window, color, opacity);
}

AmoebaRaster labeled_raster(const LaurentPolynomial& f, const Window& w, const Scenario& s, int k) {
  AmoebaRaster r = raster_amoeba(f, w, s.angle_samples, mix_seed(s.seed, 100 + k));
  label_components(r, f, kDefaultOrderTrials, mix_seed(s.seed, 200 + k));
  return r;
}

json component_table(const AmoebaRaster& r) {
  json out = json::array();
  for (const auto& c : r.components) {
    json row = {{"id", c.id}, {"cells", c.cells}, {"touches_edge", c.touches_edge}, {"resolved", c.resolved}};
    row["order"] = c.resolved ? json({c.order[0], c.order[1]}) : json(nullptr);
    out.push_back(row);
  }
  return out;
}

// ---- modes ----

RunOutput run_newton(const Scenario& s) {
  json rep = {{"mode", "newton"}};
  json polys = json::array(), verdicts = json::array();
  std::vector<LatticePolytope> hulls;
  for (const auto& f : s.polynomials) {
    const LatticePolytope p = convex_hull(f.support());
    hulls.push_back(p);
    json entry = {{"polytope", to_json(p)}, {"normalized_volume", rational_json(normalized_volume(p))},
                  {"lattice_points", p.lattice_points().size()}, {"total_degree", total_degree(f)}};
    if (p.dimension == 2) entry["normal_fan"] = to_json(normal_fan(p));
    polys.push_back(entry);
  }
  rep["polytopes"] = polys;
  if (hulls.size() == 2) {
    const LatticePolytope sum = minkowski_sum(hulls[0], hulls[1]);
    const Rational mv = mixed_volume(hulls[0], hulls[1]);
    rep["minkowski_sum"] = to_json(sum);
    rep["mixed_volume"] = rational_json(mv);
    rep["bezout_product"] = total_degree(s.polynomials[0]) * total_degree(s.polynomials[1]);
    verdicts.push_back(verdict("mixed_volume_integral", "§2.4", pass_if(mv.denominator() == 1 && mv >= 0),
                               {{"mixed_volume", rational_json(mv)}}));
    if (hulls[0].dimension == 2 && hulls[1].dimension == 2) {
      const Fan2 refinement = common_refinement(normal_fan(hulls[0], 0), normal_fan(hulls[1], 1));
      const auto mixed = mixed_cones(refinement);
      rep["refinement"] = to_json(refinement);
      rep["mixed_cones"] = mixed.size();
      verdicts.push_back(verdict("refinement_duality", "§4", pass_if(refinement.cones.size() == sum.vertices.size()),
                                 {{"refinement_cones", refinement.cones.size()},
                                  {"minkowski_vertices", sum.vertices.size()}}));
    } else {
      verdicts.push_back(verdict("refinement_duality", "§4", VerdictStatus::not_checked,
                                 {{"note", "a Newton polytope is not two-dimensional"}}));
    }
  }
  rep["verdicts"] = verdicts;

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  std::vector<Point2> all;
  for (const auto& h : hulls) all.insert(all.end(), h.vertices.begin(), h.vertices.end());
  if (hulls.size() == 2) {
    const auto sum = minkowski_sum(hulls[0], hulls[1]);
    all.insert(all.end(), sum.vertices.begin(), sum.vertices.end());
  }
  for (const auto& p : all) {
    x0 = std::min(x0, static_cast<double>(p[0]));
    x1 = std::max(x1, static_cast<double>(p[0]));
    y0 = std::min(y0, static_cast<double>(p[1]));
    y1 = std::max(y1, static_cast<double>(p[1]));
  }
  SvgCanvas svg(x0 - 0.5, x1 + 0.5, y0 - 0.5, y1 + 0.5, 480);
  auto outline = [&](const LatticePolytope& p, const char* color, double width) {
    std::vector<Vec2> pts;
    for (const auto& v : p.vertices) pts.push_back({static_cast<double>(v[0]), static_cast<double>(v[1])});
    svg.polyline(pts, color, width, false, p.dimension == 2);
  };
  if (hulls.size() == 2) outline(minkowski_sum(hulls[0], hulls[1]), "#555555", 1.0);
  const char* colors[2] = {kColor1, kColor2};
  for (std::size_t k = 0; k < hulls.size(); ++k) {
    outline(hulls[k], colors[k % 2], 2.0);
    for (const auto& e : s.polynomials[k].support())
      svg.dot({static_cast<double>(e[0]), static_cast<double>(e[1])}, 4.0, colors[k % 2]);
  }
  return {rep, svg.str(), exit_code_for(verdicts)};
}

RunOutput run_amoeba(const Scenario& s, const Window& w) {
  const LaurentPolynomial& f = s.polynomials[0];
  AmoebaRaster r = labeled_raster(f, w, s, 0);
  const LatticePolytope newton = convex_hull(f.support());
  json rep = {{"mode", "amoeba"}, {"window", to_json(w)}, {"newton_polytope", to_json(newton)}};
  rep["raster"] = to_json(r);
  rep["member_cells"] = r.member_count();
  rep["complement_components"] = component_table(r);
  std::vector<Vec2> directions;
  if (newton.dimension == 2) directions = limit_directions(tropical_curve(log_lift(f)));
  rep["limit_directions"] = vec_list(directions);
  json verdicts = json::array();

  // cells per component
  std::map<int, std::vector<std::size_t>> cells;
  for (std::size_t c = 0; c < r.component_id.size(); ++c)
    if (r.component_id[c] >= 0) cells[r.component_id[c]].push_back(c);
  json violations = json::array();
  std::size_t sampled = 0, skipped = 0;
  for (const auto& comp : r.components) {
    if (!comp.resolved) continue;
    const auto& list = cells[comp.id];
    SplitMix rng(mix_seed(s.seed, 600 + static_cast<std::uint64_t>(comp.id)));
    for (int k = 0; k < 4; ++k) {
      const std::size_t c = list[static_cast<std::size_t>(rng.uniform() * static_cast<double>(list.size())) % list.size()];
      const auto x = w.center(static_cast<int>(c % w.nx), static_cast<int>(c / w.nx));
      try {
        const Exponent u = order_at(f, x, kDefaultOrderTrials, mix_seed(s.seed, 700 + k));
        ++sampled;
        if (u != comp.order) violations.push_back({{"component", comp.id}, {"point", {x[0], x[1]}}, {"order", {u[0], u[1]}}});
      } catch (const PointOnAmoeba&) {
        ++skipped;
      }
    }
  }
  verdicts.push_back(verdict("order_constancy", "Thm 2.1", pass_if(violations.empty()),
                             {{"sampled", sampled}, {"skipped", skipped}, {"violations", violations}}));
  json missing = json::array();
  for (const auto& v : newton.vertices) {
    const bool found = std::any_of(r.components.begin(), r.components.end(), [&](const ComplementComponent& c) {
      return c.resolved && c.touches_edge && c.order == Exponent{v[0], v[1]};
    });
    if (!found) missing.push_back({v[0], v[1]});
  }
  verdicts.push_back(verdict("vertex_components", "Thm 2.2", pass_if(missing.empty()),
                             {{"newton_vertices", newton.vertices.size()}, {"missing", missing}}));
  const std::size_t unresolved = static_cast<std::size_t>(
      std::count_if(r.components.begin(), r.components.end(), [](const ComplementComponent& c) { return !c.resolved; }));
  verdicts.push_back(verdict("components_resolved", "Thm 2.1", unresolved ? VerdictStatus::flagged : VerdictStatus::pass,
                             {{"unresolved", unresolved}}));
  rep["verdicts"] = verdicts;
  rep["warnings"] = r.warnings;

  SvgCanvas svg(w);
  draw_raster(svg, r, kColor1, 0.6);
  const Vec2 mid{(w.x_min + w.x_max) / 2, (w.y_min + w.y_max) / 2};
  const double len = 0.45 * std::min(w.x_max - w.x_min, w.y_max - w.y_min);
  for (const auto& d : directions) {
    const Vec2 tip{mid[0] + len * d[0], mid[1] + len * d[1]};
    svg.segment(mid, tip, "#c44e52", 2.0);
    svg.dot(tip, 4.0, "#c44e52");
  }
  for (const auto& c : r.components)
    if (c.resolved) {
      const auto x = w.center(c.sample_cell[0], c.sample_cell[1]);
      svg.text(x, "(" + std::to_string(c.order[0]) + "," + std::to_string(c.order[1]) + ")");
    }
  return {rep, svg.str(), exit_code_for(verdicts)};
}

json spine_verdicts(const SpineData& sp, const LaurentPolynomial& f, const std::string& prefix) {
  json out = json::array();
  const auto defects = balancing_defects(sp.curve);
  const bool balanced = std::all_of(defects.begin(), defects.end(), [](const Point2& d) { return d[0] == 0 && d[1] == 0; });
  out.push_back(verdict(prefix + "balancing", "§2.3", pass_if(balanced), {{"vertices", sp.curve.vertices.size()}}));
  const double worst = sp.spreads.empty() ? 0.0 : *std::max_element(sp.spreads.begin(), sp.spreads.end());
  out.push_back(verdict(prefix + "ronkin_spread", "Thm 2.3", pass_if(worst < kRonkinSpreadLimit),
                        {{"max_spread", worst}, {"limit", kRonkinSpreadLimit}}));
  const auto dirs = limit_directions(sp.curve);
  const auto normals = outward_normals(convex_hull(f.support()));
  out.push_back(verdict(prefix + "limit_set", "§2.3", pass_if(same_directions(dirs, normals, 1e-6)),
                        {{"spine_directions", vec_list(dirs)}, {"newton_normals", vec_list(normals)}}));
  out.push_back(verdict(prefix + "spine_complete", "Eq. (2.3)", sp.incomplete ? VerdictStatus::flagged : VerdictStatus::pass,
                        {{"support", sp.support.size()}}));
  return out;
}

RunOutput run_spine(const Scenario& s, const Window& w) {
  const LaurentPolynomial& f = s.polynomials[0];
  AmoebaRaster r = labeled_raster(f, w, s, 0);
  const SpineData sp = build_spine(f, r, s.quad_n, mix_seed(s.seed, 300));
  json rep = {{"mode", "spine"}, {"window", to_json(w)}};
  rep["complement_components"] = component_table(r);
  rep["spine"] = to_json(sp);
  rep["limit_directions"] = vec_list(limit_directions(sp.curve));
  json verdicts = spine_verdicts(sp, f, "");
  rep["verdicts"] = verdicts;
  json warnings = r.warnings;
  for (const auto& m : sp.warnings) warnings.push_back(m);
  rep["warnings"] = warnings;

  SvgCanvas svg(w);
  draw_raster(svg, r, kColor1, 0.45);
  svg.curve(sp.curve, kSpine1, 1.5, true);
  for (const auto& v : sp.curve.vertices) svg.dot(v.location, 3.0, kSpine1);
  return {rep, svg.str(), exit_code_for(verdicts)};
}

RunOutput run_tropical(const Scenario& s) {
  std::vector<TropicalPoly> polys;
  for (std::size_t k = 0; k < s.polynomials.size(); ++k) {
    TropicalPoly h = log_lift(s.polynomials[k]);
    if (k < s.lifts.size()) {
      if (s.lifts[k].size() != h.support.size())
        throw InputError("lifts for polynomial " + std::to_string(k + 1) + " must have one value per term");
      h.coefficients = s.lifts[k];
    }
    polys.push_back(h);
  }
  json rep = {{"mode", "tropical"}};
  json curves = json::array(), verdicts = json::array();
  std::vector<TropicalCurve> cs;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    cs.push_back(tropical_curve(polys[k]));
    curves.push_back({{"polynomial", to_json(polys[k])},
                      {"curve", to_json(cs.back())},
                      {"limit_directions", vec_list(limit_directions(cs.back()))}});
    const auto defects = balancing_defects(cs.back());
    verdicts.push_back(verdict("balancing_" + std::to_string(k + 1), "§2.3",
                               pass_if(std::all_of(defects.begin(), defects.end(),
                                                   [](const Point2& d) { return d[0] == 0 && d[1] == 0; })),
                               {{"vertices", cs.back().vertices.size()}}));
  }
  rep["curves"] = curves;
  std::vector<Vec2> points;
  if (cs.size() == 2) {
    const Rational mv = mixed_volume(convex_hull(polys[0].support), convex_hull(polys[1].support));
    rep["mixed_volume"] = rational_json(mv);
    try {
      const auto si = stable_intersection(cs[0], cs[1], s.seed);
      std::int64_t total = 0;
      json pts = json::array();
      for (const auto& p : si.points) {
        total += p.multiplicity;
        points.push_back(p.location);
        pts.push_back({{"location", {p.location[0], p.location[1]}}, {"multiplicity", p.multiplicity}});
      }
      rep["stable_intersection"] = {{"points", pts}, {"total_multiplicity", total}, {"mixed_cells", si.mixed_cells}};
      verdicts.push_back(verdict("tropical_bernstein", "Thm 2.6", pass_if(Rational(total) == mv),
                                 {{"total_multiplicity", total}, {"mixed_volume", rational_json(mv)}}));
    } catch (const NonConvergentIntersection& e) {
      verdicts.push_back(verdict("tropical_bernstein", "Thm 2.6", VerdictStatus::fail, {{"error", e.what()}}));
    }
  }
  rep["verdicts"] = verdicts;

  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool any = false;
  auto grow = [&](const Vec2& p) {
    if (!any) {
      x0 = x1 = p[0];
      y0 = y1 = p[1];
      any = true;
    }
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  };
  for (const auto& c : cs) {
    for (const auto& v : c.vertices) grow(v.location);
    for (const auto& l : c.lines) grow(l.point);
  }
  for (const auto& p : points) grow(p);
  SvgCanvas svg(x0 - 2, x1 + 2, y0 - 2, y1 + 2, 560);
  const char* colors[2] = {kSpine1, kSpine2};
  for (std::size_t k = 0; k < cs.size(); ++k) svg.curve(cs[k], colors[k % 2], 2.0, false);
  for (const auto& p : points) svg.dot(p, 4.0, "#c44e52");
  return {rep, svg.str(), exit_code_for(verdicts)};
}

std::vector<double> default_epsilons(const Window& w) {
  std::vector<double> out;
  for (double e : {0.5, 0.25, 0.1})
    if (e >= w.cell_size()) out.push_back(e);
  if (out.empty()) out.push_back(w.cell_size());
  return out;
}

RunOutput run_pair(const Scenario& s, const Window& w) {
  const LaurentPolynomial& f1 = s.polynomials[0];
  const LaurentPolynomial& f2 = s.polynomials[1];
  PairAnalysis a = analyze_pair(f1, f2, w, s);
  json rep = to_json(a.report);
  rep["mode"] = to_string(s.mode);
  rep["spines"] = {to_json(a.s1), to_json(a.s2)};
  json verdicts = json::array();
  for (const auto& v : rep["verdicts"]) {
    const std::string key = v["key"];
    if (s.mode == Mode::verify || key.rfind("genericity", 0) == 0 || key == "degeneracy") verdicts.push_back(v);
  }
  if (s.mode == Mode::verify) {
    const auto eps = s.epsilons.empty() ? default_epsilons(w) : s.epsilons;
    const auto table = retract_experiment(a.s1, a.s2, w, eps, convex_hull(f1.support()), convex_hull(f2.support()), s.seed);
    rep["retraction"] = to_json(table);
    for (const auto& v : spine_verdicts(a.s1, f1, "spine1_")) verdicts.push_back(v);
    for (const auto& v : spine_verdicts(a.s2, f2, "spine2_")) verdicts.push_back(v);
  }
  rep["verdicts"] = verdicts;
  json warnings = rep["warnings"];
  for (const auto* r : {&a.r1, &a.r2})
    for (const auto& m : r->warnings) warnings.push_back(m);
  for (const auto* sp : {&a.s1, &a.s2})
    for (const auto& m : sp->warnings) warnings.push_back(m);
  rep["warnings"] = warnings;

  SvgCanvas svg(w);
  draw_raster(svg, a.r1, kColor1, 0.35);
  draw_raster(svg, a.r2, kColor2, 0.35);
  svg.cells(a.grid.cells, w, "#55a868", 0.85);
  svg.curve(a.s1.curve, kSpine1, 1.2, true);
  svg.curve(a.s2.curve, kSpine2, 1.2, true);
  for (const auto& c : a.report.components) svg.polyline(c.polytope, "#222222", 1.5, false, true);
  for (const auto& v : a.report.vertices) svg.dot(v.location, 3.5, "#c44e52");
  for (const auto& p : a.report.stable_points) svg.dot(p.location, 2.0, "#000000");
  return {rep, svg.str(), exit_code_for(verdicts)};
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::newton: return "newton";
    case Mode::amoeba: return "amoeba";
    case Mode::spine: return "spine";
    case Mode::tropical: return "tropical";
    case Mode::intersect: return "intersect";
    case Mode::verify: return "verify";
  }
  return "verify";
}

std::optional<Mode> mode_from_string(const std::string& s) {
  for (Mode m : {Mode::newton, Mode::amoeba, Mode::spine, Mode::tropical, Mode::intersect, Mode::verify})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw InputError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column));
  }
  if (!j.is_object()) throw InputError("scenario must be a JSON object");
  static const std::set<std::string> known{"mode",   "polynomials",     "window",   "resolution", "angle_samples",
                                           "quad_n", "seed",            "epsilons", "lifts",      "degenerate_mode",
                                           "name",   "merge_radius_cells", "refine_factor"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw InputError("unknown scenario field \"" + key + "\"");

  Scenario s;
  if (j.contains("mode")) {
    const auto m = mode_from_string(field<std::string>(j, "mode"));
    if (!m) throw InputError("unknown mode \"" + j["mode"].get<std::string>() + "\"");
    s.mode = *m;
  }
  if (!j.contains("polynomials") || !j["polynomials"].is_array()) throw InputError("scenario needs a \"polynomials\" array");
  for (const auto& p : j["polynomials"]) {
    try {
      s.polynomials.push_back(polynomial_from_json(p));
    } catch (const std::exception& e) {
      throw InputError(std::string("bad polynomial: ") + e.what());
    }
  }
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (w.is_string()) {
      if (w.get<std::string>() != "auto") throw InputError("window must be \"auto\" or an object");
    } else if (w.is_object()) {
      s.window = Bounds{field<double>(w, "x_min"), field<double>(w, "x_max"), field<double>(w, "y_min"),
                        field<double>(w, "y_max")};
      if (!(s.window->x_max > s.window->x_min) || !(s.window->y_max > s.window->y_min))
        throw InputError("window bounds are empty");
    } else {
      throw InputError("window must be \"auto\" or an object");
    }
  }
  if (j.contains("resolution")) s.resolution = field<int>(j, "resolution");
  if (j.contains("angle_samples")) s.angle_samples = field<int>(j, "angle_samples");
  if (j.contains("quad_n")) s.quad_n = field<int>(j, "quad_n");
  if (j.contains("seed")) s.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("degenerate_mode")) s.degenerate_mode = field<bool>(j, "degenerate_mode");
  if (j.contains("epsilons")) s.epsilons = field<std::vector<double>>(j, "epsilons");
  if (j.contains("lifts")) s.lifts = field<std::vector<std::vector<double>>>(j, "lifts");
  if (j.contains("merge_radius_cells")) s.merge_radius_cells = field<double>(j, "merge_radius_cells");
  if (j.contains("refine_factor")) s.refine_factor = field<int>(j, "refine_factor");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void check_scenario(const Scenario& s) {
  const std::size_t n = s.polynomials.size();
  switch (s.mode) {
    case Mode::amoeba:
    case Mode::spine:
      if (n != 1) throw InputError(to_string(s.mode) + " mode needs exactly 1 polynomial, got " + std::to_string(n));
      break;
    case Mode::intersect:
    case Mode::verify:
      if (n != 2) throw InputError(to_string(s.mode) + " mode needs exactly 2 polynomials, got " + std::to_string(n));
      break;
    case Mode::newton:
    case Mode::tropical:
      if (n < 1 || n > 2) throw InputError(to_string(s.mode) + " mode needs 1 or 2 polynomials, got " + std::to_string(n));
      break;
  }
  if (s.resolution < 8) throw InputError("resolution must be at least 8");
  if (s.angle_samples < 16) throw InputError("angle_samples must be at least 16");
  if (s.quad_n < 8) throw InputError("quad_n must be at least 8");
  if (!(s.merge_radius_cells > 0)) throw InputError("merge radius must be positive");
  if (s.refine_factor < 1) throw InputError("refine factor must be at least 1");
  for (const auto& f : s.polynomials)
    if (f.is_monomial() && s.mode != Mode::newton) throw InputError("a monomial has an empty amoeba");
}

Window auto_window(const std::vector<LaurentPolynomial>& fs, int resolution, double padding) {
  std::vector<Vec2> pts;
  for (const auto& f : fs) {
    if (f.size() < 2) continue;
    const TropicalCurve c = tropical_curve(log_lift(f));
    for (const auto& v : c.vertices) pts.push_back(v.location);
    for (const auto& l : c.lines) pts.push_back(l.point);
  }
  if (pts.empty()) pts.push_back({0.0, 0.0});
  double x0 = pts[0][0], x1 = x0, y0 = pts[0][1], y1 = y0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  const double side = std::max(x1 - x0, y1 - y0) + 2 * padding;
  const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  return {cx - side / 2, cx + side / 2, cy - side / 2, cy + side / 2, resolution, resolution};
}

Window scenario_window(const Scenario& s) {
  if (!s.window) return auto_window(s.polynomials, s.resolution);
  Window w{s.window->x_min, s.window->x_max, s.window->y_min, s.window->y_max, s.resolution, s.resolution};
  w.validate();
  return w;
}

int exit_code_for(const json& verdicts) {
  for (const auto& v : verdicts)
    if (v.at("status") == "fail") return 2;
  return 0;
}

PairAnalysis analyze_pair(const LaurentPolynomial& f1, const LaurentPolynomial& f2, const Window& w, const Scenario& s) {
  PairAnalysis a;
  a.window = w;
  a.r1 = labeled_raster(f1, w, s, 1);
  a.r2 = labeled_raster(f2, w, s, 2);
  a.s1 = build_spine(f1, a.r1, s.quad_n, mix_seed(s.seed, 301));
  a.s2 = build_spine(f2, a.r2, s.quad_n, mix_seed(s.seed, 302));
  a.grid = intersect_rasters(a.r1, a.r2);
  resolve_small_components(a.grid, f1, f2, s.angle_samples, mix_seed(s.seed, 400));
  VertexOptions opt;
  opt.merge_radius_cells = s.merge_radius_cells;
  opt.refine_factor = s.refine_factor;
  opt.angle_samples = s.angle_samples;
  opt.seed = mix_seed(s.seed, 500);
  opt.degenerate_mode = s.degenerate_mode;
  opt.thin = {is_thin(a.r1), is_thin(a.r2)};
  VertexExtraction ex = extract_vertices(a.r1, a.r2, f1, f2, a.grid, opt);
  const AssembleInputs in{a.r1, a.r2, f1, f2, a.s1, a.s2, s.seed, s.degenerate_mode};
  a.report = assemble_components(a.grid, std::move(ex), in);
  order_polytope(a.report, f1, f2);
  genericity_screen(a.report, a.r1, a.r2);
  return a;
}

RunOutput run_scenario(const Scenario& s) {
  check_scenario(s);
  RunOutput out;
  try {
    switch (s.mode) {
      case Mode::newton: out = run_newton(s); break;
      case Mode::tropical: out = run_tropical(s); break;
      case Mode::amoeba: out = run_amoeba(s, scenario_window(s)); break;
      case Mode::spine: out = run_spine(s, scenario_window(s)); break;
      case Mode::intersect:
      case Mode::verify: out = run_pair(s, scenario_window(s)); break;
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  } catch (const DegenerateInput& e) {
    throw InputError(e.what());
  } catch (const std::runtime_error& e) {
    out.report = {{"mode", to_string(s.mode)}, {"error", e.what()}};
    out.report["verdicts"] = json::array({verdict("pipeline", "n/a", VerdictStatus::fail, {{"error", e.what()}})});
    out.svg = SvgCanvas(0, 1, 0, 1, 64).str();
  }
  out.report["schema_version"] = 1;
  out.report["seed"] = s.seed;
  out.exit_code = exit_code_for(out.report["verdicts"]);
  return out;
}

}  // namespace amoeba
