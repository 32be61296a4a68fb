#include "amoeba/spine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "amoeba/util.hpp"

namespace amoeba {

namespace {

using Cells = std::vector<std::uint8_t>;

// Parameter range of p + t d (t in [t0, t1]) inside the window grown by one cell.
std::optional<std::array<double, 2>> clip(const Vec2& p, const Vec2& d, double t0, double t1, const Window& w) {
  const double lo[2] = {w.x_min - w.dx(), w.y_min - w.dy()};
  const double hi[2] = {w.x_max + w.dx(), w.y_max + w.dy()};
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (p[k] < lo[k] || p[k] > hi[k]) return std::nullopt;
      continue;
    }
    double a = (lo[k] - p[k]) / d[k];
    double b = (hi[k] - p[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return std::nullopt;
  return std::array<double, 2>{t0, t1};
}

void paint_piece(Cells& cells, const Window& w, const Vec2& p, const Vec2& d, double t0, double t1) {
  const auto range = clip(p, d, t0, t1, w);
  if (!range) return;
  const double len = std::hypot(d[0], d[1]);
  if (len == 0.0) return;
  const double step = std::min(w.dx(), w.dy()) / (4.0 * len);
  const auto n = static_cast<std::size_t>(std::ceil(((*range)[1] - (*range)[0]) / step));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = std::min((*range)[0] + static_cast<double>(k) * step, (*range)[1]);
    if (const auto c = w.cell_of({p[0] + t * d[0], p[1] + t * d[1]}))
      cells[static_cast<std::size_t>((*c)[1]) * w.nx + (*c)[0]] = 1;
  }
}

Cells dilate_chebyshev(const Cells& in, int nx, int ny, int radius) {
  if (radius <= 0) return in;
  Cells horizontal(in.size(), 0), out(in.size(), 0);
  for (int j = 0; j < ny; ++j) {
    std::vector<int> prefix(static_cast<std::size_t>(nx) + 1, 0);
    for (int i = 0; i < nx; ++i) prefix[i + 1] = prefix[i] + in[static_cast<std::size_t>(j) * nx + i];
    for (int i = 0; i < nx; ++i) {
      const int a = std::max(0, i - radius), b = std::min(nx - 1, i + radius);
      horizontal[static_cast<std::size_t>(j) * nx + i] = prefix[b + 1] - prefix[a] > 0;
    }
  }
  for (int i = 0; i < nx; ++i) {
    std::vector<int> prefix(static_cast<std::size_t>(ny) + 1, 0);
    for (int j = 0; j < ny; ++j) prefix[j + 1] = prefix[j] + horizontal[static_cast<std::size_t>(j) * nx + i];
    for (int j = 0; j < ny; ++j) {
      const int a = std::max(0, j - radius), b = std::min(ny - 1, j + radius);
      out[static_cast<std::size_t>(j) * nx + i] = prefix[b + 1] - prefix[a] > 0;
    }
  }
  return out;
}

}  // namespace

SpineData build_spine(const LaurentPolynomial& f, const AmoebaRaster& r, int quad_n, std::uint64_t seed) {
  if (r.component_id.size() != r.membership.size()) throw std::invalid_argument("build_spine needs a labeled raster");
  SpineData s;
  // largest component per order
  std::map<Exponent, const ComplementComponent*> by_order;
  for (const auto& comp : r.components) {
    if (!comp.resolved) {
      if (comp.touches_edge)
        throw std::runtime_error("unresolved complement component " + std::to_string(comp.id) + " reaches the window edge");
      s.incomplete = true;
      s.warnings.push_back("bounded component " + std::to_string(comp.id) + " unresolved; omitted from the spine");
      continue;
    }
    auto& slot = by_order[comp.order];
    if (!slot || comp.cells > slot->cells) slot = &comp;
  }
  std::vector<const ComplementComponent*> chosen;
  for (const auto& [order, comp] : by_order) {
    if (comp->cells < 3) {
      s.incomplete = true;
      s.warnings.push_back("component of order (" + std::to_string(order[0]) + "," + std::to_string(order[1]) +
                           ") too small to sample; omitted from the spine");
      continue;
    }
    chosen.push_back(comp);
  }
  std::vector<RonkinCoefficient> coefs(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t k) {
    std::vector<std::array<double, 2>> samples;
    for (const auto& cell : deepest_cells(r, chosen[k]->id, kSpineSamplesPerComponent))
      samples.push_back(r.window.center(cell[0], cell[1]));
    coefs[k] = ronkin_coefficient(f, samples, chosen[k]->order, quad_n, kDefaultOrderTrials, mix_seed(seed, k));
  });
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    s.support.push_back(chosen[k]->order);
    s.coefficients.push_back(coefs[k].mean);
    s.spreads.push_back(coefs[k].stddev);
  }
  s.curve = tropical_curve(s.tropical_polynomial());

  const Window& w = r.window;
  auto check = [&](const Vec2& p) {
    const auto c = w.cell_of(p);
    if (c && !r.member((*c)[0], (*c)[1]))
      s.warnings.push_back("raster too coarse: spine point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
                           ") in a non-member cell");
  };
  for (const auto& v : s.curve.vertices) check(v.location);
  for (const auto& e : s.curve.edges) check({(e.from[0] + e.to[0]) / 2, (e.from[1] + e.to[1]) / 2});
  for (const auto& l : s.curve.lines) check(l.point);
  return s;
}

std::vector<std::uint8_t> curve_neighborhood(const TropicalCurve& c, const Window& w, int radius_cells) {
  Cells cells(static_cast<std::size_t>(w.nx) * w.ny, 0);
  const double far = 1e6;
  for (const auto& e : c.edges) paint_piece(cells, w, e.from, {e.to[0] - e.from[0], e.to[1] - e.from[1]}, 0.0, 1.0);
  for (const auto& ray : c.rays)
    paint_piece(cells, w, ray.base, {static_cast<double>(ray.direction[0]), static_cast<double>(ray.direction[1])}, 0.0, far);
  for (const auto& l : c.lines)
    paint_piece(cells, w, l.point, {static_cast<double>(l.direction[0]), static_cast<double>(l.direction[1])}, -far, far);
  for (const auto& v : c.vertices)
    if (const auto cell = w.cell_of(v.location)) cells[static_cast<std::size_t>((*cell)[1]) * w.nx + (*cell)[0]] = 1;
  return dilate_chebyshev(cells, w.nx, w.ny, radius_cells);
}

std::size_t count_components(const std::vector<std::uint8_t>& cells, int nx, int ny) {
  std::vector<std::uint8_t> seen(cells.size(), 0);
  std::vector<std::size_t> stack;
  std::size_t count = 0;
  for (std::size_t start = 0; start < cells.size(); ++start) {
    if (!cells[start] || seen[start]) continue;
    ++count;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
      const std::array<std::array<int, 2>, 4> nbrs{{{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
      for (const auto& [a, b] : nbrs) {
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const std::size_t n = static_cast<std::size_t>(b) * nx + a;
        if (cells[n] && !seen[n]) {
          seen[n] = 1;
          stack.push_back(n);
        }
      }
    }
  }
  return count;
}

RetractionTable retract_experiment(const SpineData& s1, const SpineData& s2, const Window& w,
                                   const std::vector<double>& epsilons, const LatticePolytope& newton1,
                                   const LatticePolytope& newton2, std::uint64_t seed) {
  w.validate();
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw std::invalid_argument("epsilons must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) throw std::invalid_argument("epsilons must be strictly decreasing");
    if (epsilons[k] < w.cell_size())
      throw std::invalid_argument("epsilon " + std::to_string(epsilons[k]) + " is below the raster resolution");
  }
  RetractionTable t;
  for (double eps : epsilons) {
    const int radius = static_cast<int>(std::floor(eps / w.cell_size() + 1e-9));
    const auto n1 = curve_neighborhood(s1.curve, w, radius);
    const auto n2 = curve_neighborhood(s2.curve, w, radius);
    Cells both(n1.size());
    for (std::size_t c = 0; c < both.size(); ++c) both[c] = n1[c] & n2[c];
    t.rows.push_back({eps, count_components(both, w.nx, w.ny)});
  }
  const auto si = stable_intersection(s1.curve, s2.curve, seed);
  t.stable_points = si.points.size();
  for (const auto& p : si.points) t.stable_multiplicity += p.multiplicity;
  t.mixed_volume = mixed_volume(newton1, newton2);
  return t;
}

nlohmann::json to_json(const SpineData& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t k = 0; k < s.support.size(); ++k)
    terms.push_back({{"order", {s.support[k][0], s.support[k][1]}}, {"coefficient", s.coefficients[k]}, {"spread", s.spreads[k]}});
  return {{"support", terms}, {"curve", to_json(s.curve)}, {"incomplete", s.incomplete}, {"warnings", s.warnings}};
}

nlohmann::json to_json(const RetractionTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"epsilon", r.epsilon}, {"components", r.components}});
  return {{"rows", rows},
          {"stable_points", t.stable_points},
          {"stable_multiplicity", t.stable_multiplicity},
          {"mixed_volume", t.mixed_volume.denominator() == 1 ? nlohmann::json(t.mixed_volume.numerator())
                                                             : nlohmann::json(boost::rational_cast<double>(t.mixed_volume))}};
}

}  // namespace amoeba
