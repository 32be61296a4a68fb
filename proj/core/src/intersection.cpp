#include "amoeba/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>

#include "amoeba/util.hpp"

namespace amoeba {

namespace {

using Cells = std::vector<std::uint8_t>;

// sub-cell shift applied to the second contour, in cells
constexpr Vec2 kContourShift{0.0107, 0.0131};
constexpr std::size_t kSharedBoundaryLimit = 5;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double dist(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

std::vector<std::array<int, 2>> neighbors4(int i, int j) { return {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}; }

// Groups of indices whose points are within `radius` of each other (single linkage).
std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Vec2>& pts, double radius) {
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // bucket by radius-sized boxes
  std::map<std::array<long long, 2>, std::vector<std::size_t>> buckets;
  auto key = [&](const Vec2& p) {
    return std::array<long long, 2>{static_cast<long long>(std::floor(p[0] / radius)),
                                    static_cast<long long>(std::floor(p[1] / radius))};
  };
  for (std::size_t k = 0; k < pts.size(); ++k) buckets[key(pts[k])].push_back(k);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto b = key(pts[k]);
    for (long long di = -1; di <= 1; ++di)
      for (long long dj = -1; dj <= 1; ++dj) {
        const auto it = buckets.find({b[0] + di, b[1] + dj});
        if (it == buckets.end()) continue;
        for (std::size_t m : it->second)
          if (m > k && dist(pts[k], pts[m]) <= radius) parent[find(k)] = find(m);
      }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < pts.size(); ++k) groups[find(k)].push_back(k);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

Vec2 centroid(const std::vector<Vec2>& pts, const std::vector<std::size_t>& idx) {
  Vec2 c{0, 0};
  for (std::size_t k : idx) {
    c[0] += pts[k][0];
    c[1] += pts[k][1];
  }
  return {c[0] / static_cast<double>(idx.size()), c[1] / static_cast<double>(idx.size())};
}

// Counterclockwise hull of points; returns indices of extreme points.
std::vector<std::size_t> hull_indices(const std::vector<Vec2>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist(pts[a], pts[b]) < 1e-12; }),
            idx.end());
  if (idx.size() <= 2) return idx;
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  const double tol = 1e-12 * std::max(1.0, scale * scale);
  std::vector<std::size_t> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= tol) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= tol) --k;
    h[k++] = idx[i];
  }
  h.resize(k - 1);
  return h;
}


bool is_newton_vertex(const LatticePolytope& p, const Exponent& e) {
  return std::find(p.vertices.begin(), p.vertices.end(), e) != p.vertices.end();
}

struct ProbeHit {
  Exponent order;
  int component;
  double angle;
};

std::vector<ProbeHit> probe(const AmoebaRaster& r, const LaurentPolynomial& f, const Vec2& p, const VertexOptions& o,
                            std::uint64_t stream) {
  std::vector<ProbeHit> hits;
  const Window& w = r.window;
  for (int k = 0; k < o.probe_count; ++k) {
    const double angle = 2.0 * std::numbers::pi * (k + 0.5) / o.probe_count;
    const Vec2 q{p[0] + o.probe_radius_cells * w.dx() * std::cos(angle),
                 p[1] + o.probe_radius_cells * w.dy() * std::sin(angle)};
    const auto cell = w.cell_of(q);
    if (!cell || r.member((*cell)[0], (*cell)[1])) continue;
    const int comp = r.component_at((*cell)[0], (*cell)[1]);
    std::optional<Exponent> order;
    try {
      order = order_at(f, q, o.trials, mix_seed(stream, static_cast<std::uint64_t>(k)));
    } catch (const PointOnAmoeba&) {
      order = r.order_of_component(comp);
    } catch (const DegenerateInput&) {
      order = r.order_of_component(comp);
    }
    if (order) hits.push_back({*order, comp, angle});
  }
  return hits;
}

struct CandidateResult {
  std::vector<IntersectionVertex> vertices;
  std::vector<VertexIssue> issues;
};

Vec2 refine(const Vec2& c, const LaurentPolynomial& f1, const LaurentPolynomial& f2, const Window& w,
            const VertexOptions& o, std::uint64_t stream, bool& refined) {
  refined = false;
  const double hx = 0.5 * o.patch_cells * w.dx(), hy = 0.5 * o.patch_cells * w.dy();
  Window patch{c[0] - hx, c[0] + hx, c[1] - hy, c[1] + hy, o.patch_cells * o.refine_factor, o.patch_cells * o.refine_factor};
  const int angles = o.angle_samples * o.refine_factor;
  const auto p1 = raster_amoeba(f1, patch, angles, mix_seed(stream, 1));
  const auto p2 = raster_amoeba(f2, patch, angles, mix_seed(stream, 2));
  const auto seg1 = marching_squares(p1.membership, patch);
  const auto seg2 = marching_squares(p2.membership, patch, {kContourShift[0] * patch.dx(), kContourShift[1] * patch.dy()});
  const auto hits = contour_crossings(seg1, seg2, patch);
  if (hits.empty()) return c;
  refined = true;
  return *std::min_element(hits.begin(), hits.end(), [&](const Vec2& a, const Vec2& b) { return dist(a, c) < dist(b, c); });
}

CandidateResult label_candidate(const Vec2& location, const AmoebaRaster& r1, const AmoebaRaster& r2,
                                const LaurentPolynomial& f1, const LaurentPolynomial& f2, const VertexOptions& o,
                                std::uint64_t stream, bool refined) {
  CandidateResult out;
  const std::array<const AmoebaRaster*, 2> rasters{&r1, &r2};
  const std::array<const LaurentPolynomial*, 2> polys{&f1, &f2};
  // per amoeba: order -> (component, mean probe direction)
  struct Side {
    Exponent order;
    int component;
    Vec2 direction;
  };
  std::array<std::vector<ProbeHit>, 2> hits;
  std::array<std::vector<Side>, 2> sides;
  for (int a = 0; a < 2; ++a) {
    hits[a] = probe(*rasters[a], *polys[a], location, o, mix_seed(stream, 10 + a));
    std::map<Exponent, Side> by_order;
    for (const auto& h : hits[a]) {
      auto [it, fresh] = by_order.try_emplace(h.order, Side{h.order, h.component, {0, 0}});
      it->second.direction[0] += std::cos(h.angle);
      it->second.direction[1] += std::sin(h.angle);
    }
    for (auto& [order, side] : by_order) sides[a].push_back(side);
    if (sides[a].empty()) {
      out.issues.push_back({location, a, "vertex swallowed", {}});
      return out;
    }
  }
  auto violation = [&](int a) {
    VertexIssue issue{location, a, "genericity condition (3) violated", {}};
    for (const auto& s : sides[a]) issue.orders.push_back(s.order);
    out.issues.push_back(issue);
  };
  const Window& w = r1.window;
  auto shifted = [&](Vec2 p, const Vec2& d) {
    const double n = std::hypot(d[0], d[1]);
    if (n > 0) {
      p[0] += 0.5 * w.dx() * d[0] / n;
      p[1] += 0.5 * w.dy() * d[1] / n;
    }
    return p;
  };
  const std::array<bool, 2> splittable{o.degenerate_mode && o.thin[0], o.degenerate_mode && o.thin[1]};
  const std::array<bool, 2> ambiguous{sides[0].size() > 1, sides[1].size() > 1};

  // Both ambiguous next to a measure-zero amoeba: pair each of its sides with
  // the other amoeba's order seen from that side.
  if (ambiguous[0] && ambiguous[1] && (splittable[0] || splittable[1])) {
    const int t = splittable[0] ? 0 : 1, other = 1 - t;
    for (const auto& side : sides[t]) {
      std::set<Exponent> seen;
      int component = -1;
      for (const auto& ht : hits[t]) {
        if (ht.order != side.order) continue;
        for (const auto& ho : hits[other])
          if (ho.angle == ht.angle) {
            seen.insert(ho.order);
            component = ho.component;
          }
      }
      if (seen.size() != 1) {
        violation(other);
        return out;
      }
      IntersectionVertex v;
      v.location = shifted(location, side.direction);
      v.order_matrix.rows[t] = side.order;
      v.order_matrix.rows[other] = *seen.begin();
      v.adjacent_component_ids[t] = side.component;
      v.adjacent_component_ids[other] = component;
      v.refined = refined;
      v.split = true;
      out.vertices.push_back(v);
    }
    return out;
  }
  for (int a = 0; a < 2; ++a)
    if (ambiguous[a] && !splittable[a]) {
      violation(a);
      return out;
    }
  for (const auto& s0 : sides[0])
    for (const auto& s1 : sides[1]) {
      IntersectionVertex v;
      v.location = location;
      v.order_matrix.rows = {s0.order, s1.order};
      v.adjacent_component_ids = {s0.component, s1.component};
      v.refined = refined;
      const std::array<const Side*, 2> chosen{&s0, &s1};
      for (int a = 0; a < 2; ++a) {
        if (!ambiguous[a]) continue;
        v.split = true;
        v.location = shifted(v.location, chosen[a]->direction);
      }
      out.vertices.push_back(v);
    }
  return out;
}

int nearest_component(const IntersectionGrid& g, const Vec2& p) {
  const Window& w = g.window;
  const auto cell = w.cell_of(p);
  if (!cell) return -1;
  const int here = g.component_id[static_cast<std::size_t>((*cell)[1]) * w.nx + (*cell)[0]];
  if (here >= 0) return here;
  int best = -1;
  double best_d = 0.0;
  for (int dj = -2; dj <= 2; ++dj)
    for (int di = -2; di <= 2; ++di) {
      const int i = (*cell)[0] + di, j = (*cell)[1] + dj;
      if (i < 0 || j < 0 || i >= w.nx || j >= w.ny) continue;
      const int id = g.component_id[static_cast<std::size_t>(j) * w.nx + i];
      if (id < 0) continue;
      const double d = dist(w.center(i, j), p);
      if (best < 0 || d < best_d) {
        best = id;
        best_d = d;
      }
    }
  return best;
}

// Number of 8-connected groups among the given cells.
std::size_t arcs8(const std::set<std::size_t>& cells, int nx) {
  std::set<std::size_t> seen;
  std::size_t groups = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start : cells) {
    if (seen.count(start)) continue;
    ++groups;
    seen.insert(start);
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const long long i = static_cast<long long>(c % nx), j = static_cast<long long>(c / nx);
      for (long long dj = -1; dj <= 1; ++dj)
        for (long long di = -1; di <= 1; ++di) {
          const long long a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= nx) continue;
          const auto n = static_cast<std::size_t>(b * nx + a);
          if (cells.count(n) && !seen.count(n)) {
            seen.insert(n);
            stack.push_back(n);
          }
        }
    }
  }
  return groups;
}

nlohmann::json vec_json(const Vec2& v) { return {v[0], v[1]}; }
nlohmann::json row_json(const Exponent& e) { return {e[0], e[1]}; }

}  // namespace

std::vector<ContourSegment> marching_squares(const std::vector<std::uint8_t>& cells, const Window& w, const Vec2& offset) {
  std::vector<ContourSegment> out;
  const int nx = w.nx, ny = w.ny;
  auto v = [&](int i, int j) { return cells[static_cast<std::size_t>(j) * nx + i] != 0; };
  auto c = [&](int i, int j) {
    const auto p = w.center(i, j);
    return Vec2{p[0] + offset[0], p[1] + offset[1]};
  };
  auto mid = [](const Vec2& a, const Vec2& b) { return Vec2{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2}; };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const std::array<bool, 4> val{v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)};
      if (val[0] == val[1] && val[1] == val[2] && val[2] == val[3]) continue;
      const std::array<Vec2, 4> corner{c(i, j), c(i + 1, j), c(i + 1, j + 1), c(i, j + 1)};
      std::array<Vec2, 4> edge;
      std::vector<int> crossing;
      for (int k = 0; k < 4; ++k) {
        edge[k] = mid(corner[k], corner[(k + 1) % 4]);
        if (val[k] != val[(k + 1) % 4]) crossing.push_back(k);
      }
      if (crossing.size() == 2) {
        out.push_back({edge[crossing[0]], edge[crossing[1]]});
      } else {
        // saddle: keep the two member corners connected
        for (int k = 0; k < 4; ++k)
          if (!val[k]) out.push_back({edge[(k + 3) % 4], edge[k]});
      }
    }
  return out;
}

std::vector<Vec2> contour_crossings(const std::vector<ContourSegment>& s1, const std::vector<ContourSegment>& s2,
                                    const Window& w) {
  std::unordered_map<long long, std::vector<std::size_t>> buckets;
  auto key = [&](const ContourSegment& s) {
    const long long i = static_cast<long long>(std::floor(((s.a[0] + s.b[0]) / 2 - w.x_min) / w.dx()));
    const long long j = static_cast<long long>(std::floor(((s.a[1] + s.b[1]) / 2 - w.y_min) / w.dy()));
    return std::array<long long, 2>{i, j};
  };
  auto flat = [](long long i, long long j) { return (i + (1LL << 20)) * (1LL << 22) + (j + (1LL << 20)); };
  for (std::size_t k = 0; k < s1.size(); ++k) {
    const auto b = key(s1[k]);
    buckets[flat(b[0], b[1])].push_back(k);
  }
  std::vector<Vec2> out;
  for (const auto& q : s2) {
    const auto b = key(q);
    std::vector<std::size_t> near;
    for (long long dj = -1; dj <= 1; ++dj)
      for (long long di = -1; di <= 1; ++di) {
        const auto it = buckets.find(flat(b[0] + di, b[1] + dj));
        if (it != buckets.end()) near.insert(near.end(), it->second.begin(), it->second.end());
      }
    std::sort(near.begin(), near.end());
    for (std::size_t k : near) {
      const auto& p = s1[k];
      const double d1 = cross(p.a, p.b, q.a), d2 = cross(p.a, p.b, q.b);
      const double d3 = cross(q.a, q.b, p.a), d4 = cross(q.a, q.b, p.b);
      if (!(((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))) continue;
      const double t = d3 / (d3 - d4);
      out.push_back({p.a[0] + t * (p.b[0] - p.a[0]), p.a[1] + t * (p.b[1] - p.a[1])});
    }
  }
  return out;
}

IntersectionGrid intersect_rasters(const AmoebaRaster& r1, const AmoebaRaster& r2) {
  if (!(r1.window == r2.window)) throw std::invalid_argument("intersect_rasters: windows differ");
  IntersectionGrid g;
  g.window = r1.window;
  const int nx = g.window.nx, ny = g.window.ny;
  g.cells.resize(r1.membership.size());
  for (std::size_t c = 0; c < g.cells.size(); ++c) g.cells[c] = r1.membership[c] & r2.membership[c];
  g.component_id.assign(g.cells.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < g.cells.size(); ++start) {
    if (!g.cells[start] || g.component_id[start] != -1) continue;
    ComponentRecord rec;
    rec.id = static_cast<int>(g.components.size());
    g.component_id[start] = rec.id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      rec.cells.push_back(c);
      const int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) rec.bounded = false;
      for (const auto& [a, b] : neighbors4(i, j)) {
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const std::size_t n = static_cast<std::size_t>(b) * nx + a;
        if (g.cells[n] && g.component_id[n] == -1) {
          g.component_id[n] = rec.id;
          stack.push_back(n);
        }
      }
    }
    std::sort(rec.cells.begin(), rec.cells.end());
    g.components.push_back(std::move(rec));
  }
  return g;
}

std::size_t resolve_small_components(IntersectionGrid& grid, const LaurentPolynomial& f1, const LaurentPolynomial& f2,
                                     int angle_samples, std::uint64_t seed, std::size_t max_cells, int factor) {
  const Window& w = grid.window;
  std::size_t changed = 0;
  for (std::size_t k = 0; k < grid.components.size(); ++k) {
    const ComponentRecord& comp = grid.components[k];
    if (comp.cells.size() > max_cells) continue;
    int i0 = w.nx, i1 = -1, j0 = w.ny, j1 = -1;
    for (std::size_t c : comp.cells) {
      const int i = static_cast<int>(c % w.nx), j = static_cast<int>(c / w.nx);
      i0 = std::min(i0, i);
      i1 = std::max(i1, i);
      j0 = std::min(j0, j);
      j1 = std::max(j1, j);
    }
    i0 = std::max(0, i0 - 2);
    j0 = std::max(0, j0 - 2);
    i1 = std::min(w.nx - 1, i1 + 2);
    j1 = std::min(w.ny - 1, j1 + 2);
    const Window patch{w.x_min + i0 * w.dx(), w.x_min + (i1 + 1) * w.dx(), w.y_min + j0 * w.dy(),
                       w.y_min + (j1 + 1) * w.dy(), (i1 - i0 + 1) * factor, (j1 - j0 + 1) * factor};
    const auto p1 = raster_amoeba(f1, patch, angle_samples * factor, mix_seed(seed, 2 * k));
    const auto p2 = raster_amoeba(f2, patch, angle_samples * factor, mix_seed(seed, 2 * k + 1));
    Cells fine(p1.membership.size());
    for (std::size_t c = 0; c < fine.size(); ++c) fine[c] = p1.membership[c] & p2.membership[c];
    // fine 4-connected labels
    std::vector<int> label(fine.size(), -1);
    int labels = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < fine.size(); ++start) {
      if (!fine[start] || label[start] != -1) continue;
      label[start] = labels;
      stack.push_back(start);
      while (!stack.empty()) {
        const std::size_t c = stack.back();
        stack.pop_back();
        const int i = static_cast<int>(c % patch.nx), j = static_cast<int>(c / patch.nx);
        for (const auto& [a, b] : neighbors4(i, j)) {
          if (a < 0 || b < 0 || a >= patch.nx || b >= patch.ny) continue;
          const std::size_t n = static_cast<std::size_t>(b) * patch.nx + a;
          if (fine[n] && label[n] == -1) {
            label[n] = labels;
            stack.push_back(n);
          }
        }
      }
      ++labels;
    }
    auto coarse_id = [&](std::size_t c) {
      const int i = i0 + static_cast<int>(c % patch.nx) / factor, j = j0 + static_cast<int>(c / patch.nx) / factor;
      return grid.component_id[static_cast<std::size_t>(j) * w.nx + i];
    };
    std::set<int> touching;
    for (std::size_t c = 0; c < fine.size(); ++c)
      if (fine[c] && coarse_id(c) == comp.id) touching.insert(label[c]);
    int target = -1;
    if (!touching.empty()) {
      std::set<int> others;
      for (std::size_t c = 0; c < fine.size(); ++c)
        if (fine[c] && touching.count(label[c]) && coarse_id(c) >= 0 && coarse_id(c) != comp.id) others.insert(coarse_id(c));
      if (others.empty()) continue;
      target = *others.begin();
    }
    for (std::size_t c : comp.cells) {
      grid.component_id[c] = target;
      if (target < 0) grid.cells[c] = 0;
    }
    ++changed;
  }
  if (changed == 0) return 0;
  // rebuild records with compact ids, ordered by first cell
  std::map<int, int> renumber;
  std::vector<ComponentRecord> rebuilt;
  for (std::size_t c = 0; c < grid.component_id.size(); ++c) {
    const int id = grid.component_id[c];
    if (id < 0) continue;
    auto [it, fresh] = renumber.try_emplace(id, static_cast<int>(rebuilt.size()));
    if (fresh) {
      rebuilt.emplace_back();
      rebuilt.back().id = it->second;
    }
    ComponentRecord& rec = rebuilt[it->second];
    rec.cells.push_back(c);
    const int i = static_cast<int>(c % w.nx), j = static_cast<int>(c / w.nx);
    if (i == 0 || j == 0 || i == w.nx - 1 || j == w.ny - 1) rec.bounded = false;
    grid.component_id[c] = it->second;
  }
  grid.components = std::move(rebuilt);
  return changed;
}

VertexExtraction extract_vertices(const AmoebaRaster& r1, const AmoebaRaster& r2, const LaurentPolynomial& f1,
                                  const LaurentPolynomial& f2, const IntersectionGrid& grid, const VertexOptions& o) {
  if (!(r1.window == r2.window)) throw std::invalid_argument("extract_vertices: windows differ");
  const Window& w = r1.window;
  const auto seg1 = marching_squares(r1.membership, w);
  const auto seg2 = marching_squares(r2.membership, w, {kContourShift[0] * w.dx(), kContourShift[1] * w.dy()});
  const auto crossings = contour_crossings(seg1, seg2, w);
  const auto groups = single_linkage(crossings, o.merge_radius_cells * w.cell_size());
  VertexExtraction out;
  out.candidates = groups.size();
  std::vector<CandidateResult> results(groups.size());
  parallel_for(groups.size(), [&](std::size_t k) {
    const std::uint64_t stream = mix_seed(o.seed, 0x7e47ULL + k);
    bool refined = false;
    const Vec2 coarse = centroid(crossings, groups[k]);
    const Vec2 location = refine(coarse, f1, f2, w, o, stream, refined);
    results[k] = label_candidate(location, r1, r2, f1, f2, o, stream, refined);
  });
  for (auto& res : results) {
    for (auto& v : res.vertices) {
      const bool duplicate = std::any_of(out.vertices.begin(), out.vertices.end(), [&](const IntersectionVertex& u) {
        return u.order_matrix == v.order_matrix && dist(u.location, v.location) < w.cell_size();
      });
      if (duplicate) continue;
      v.component = nearest_component(grid, v.location);
      out.vertices.push_back(v);
    }
    for (auto& issue : res.issues) out.issues.push_back(issue);
  }
  return out;
}

bool is_thin(const AmoebaRaster& r) {
  const std::size_t members = r.member_count();
  if (members == 0) return true;
  return static_cast<double>(r.interior_member_count()) / static_cast<double>(members) < kThinnessRatio;
}

IntersectionReport assemble_components(IntersectionGrid grid, VertexExtraction extraction, const AssembleInputs& in) {
  IntersectionReport rep;
  rep.window = grid.window;
  rep.degenerate_mode = in.degenerate_mode;
  rep.thin = {is_thin(in.r1), is_thin(in.r2)};
  rep.vertices = std::move(extraction.vertices);
  rep.issues = std::move(extraction.issues);
  rep.components = std::move(grid.components);
  const Window& w = rep.window;
  const int nx = w.nx, ny = w.ny;

  for (std::size_t v = 0; v < rep.vertices.size(); ++v) {
    const int c = rep.vertices[v].component;
    if (c >= 0) rep.components[c].vertices.push_back(v);
    else rep.warnings.push_back("vertex " + std::to_string(v) + " is not next to any intersection component");
  }

  std::vector<Vec2> all;
  for (const auto& v : rep.vertices) all.push_back(v.location);
  rep.hull_vertices = hull_indices(all);
  for (std::size_t k : rep.hull_vertices) rep.hull.push_back(all[k]);

  const LatticePolytope n1 = convex_hull(in.f1.support());
  const LatticePolytope n2 = convex_hull(in.f2.support());
  rep.mixed_volume = mixed_volume(n1, n2);
  rep.bezout_product = total_degree(in.f1) * total_degree(in.f2);
  const bool full = n1.dimension == 2 && n2.dimension == 2;
  if (full) rep.mixed_cones = mixed_cones(common_refinement(normal_fan(n1, 0), normal_fan(n2, 1))).size();

  bool spine_ok = true;
  try {
    const auto si = stable_intersection(in.spine1.curve, in.spine2.curve, in.seed);
    rep.stable_points = si.points;
    rep.spine_mixed_cells = si.mixed_cells;
  } catch (const NonConvergentIntersection& e) {
    spine_ok = false;
    rep.warnings.push_back(e.what());
  }

  const std::array<const AmoebaRaster*, 2> rasters{&in.r1, &in.r2};
  for (auto& comp : rep.components) {
    std::vector<Vec2> locs;
    for (std::size_t v : comp.vertices) locs.push_back(rep.vertices[v].location);
    for (std::size_t k : hull_indices(locs)) {
      comp.polytope.push_back(locs[k]);
      comp.polytope_vertices.push_back(comp.vertices[k]);
    }
    for (const auto& p : rep.stable_points) {
      const auto cell = w.cell_of(p.location);
      if (!cell) continue;
      bool hit = false;
      for (int dj = -1; dj <= 1 && !hit; ++dj)
        for (int di = -1; di <= 1 && !hit; ++di) {
          const int i = (*cell)[0] + di, j = (*cell)[1] + dj;
          if (i >= 0 && j >= 0 && i < nx && j < ny && grid.component_id[static_cast<std::size_t>(j) * nx + i] == comp.id)
            hit = true;
        }
      if (hit) comp.spine_hits.push_back(p.location);
    }
    std::map<std::pair<int, Exponent>, std::set<std::size_t>> labels;
    for (std::size_t c : comp.cells) {
      const int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
      bool interior = true;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a >= 0 && b >= 0 && a < nx && b < ny && grid.component_id[static_cast<std::size_t>(b) * nx + a] != comp.id)
            interior = false;
        }
      if (interior) ++comp.interior_cells;
      for (int am = 0; am < 2; ++am)
        for (const auto& [a, b] : neighbors4(i, j)) {
          if (a < 0 || b < 0 || a >= nx || b >= ny || rasters[am]->member(a, b)) continue;
          if (const auto order = rasters[am]->order_of_component(rasters[am]->component_at(a, b)))
            labels[{am, *order}].insert(c);
        }
    }
    for (const auto& [label, cells] : labels)
      comp.faces.push_back({label.first, label.second, cells.size(), arcs8(cells, nx)});
  }

  // (i) and (ii)
  std::size_t bounded = 0;
  for (const auto& c : rep.components) bounded += c.bounded;
  const double mv = boost::rational_cast<double>(rep.mixed_volume);
  {
    Verdict v{"bernstein", "Thm 3.11"};
    v.status = spine_ok && bounded <= rep.spine_mixed_cells && static_cast<double>(rep.spine_mixed_cells) <= mv
                   ? VerdictStatus::pass
                   : VerdictStatus::fail;
    v.detail = {{"components", rep.components.size()},
                {"bounded_components", bounded},
                {"spine_mixed_cells", rep.spine_mixed_cells},
                {"mixed_volume", mv},
                {"note", "components touching the window edge are excluded from the count"}};
    rep.verdicts.push_back(v);
  }
  {
    Verdict v{"bezout", "Cor 3.12"};
    v.status = static_cast<std::int64_t>(rep.components.size()) <= rep.bezout_product ? VerdictStatus::pass : VerdictStatus::fail;
    v.detail = {{"components", rep.components.size()}, {"bezout_product", rep.bezout_product}};
    rep.verdicts.push_back(v);
  }
  // (iii)
  {
    Verdict v{"spine_hit", "Thm 3.10"};
    nlohmann::json missing = nlohmann::json::array();
    for (const auto& c : rep.components)
      if (c.spine_hits.empty()) missing.push_back(c.id);
    v.status = spine_ok && missing.empty() ? VerdictStatus::pass : VerdictStatus::fail;
    v.detail = {{"stable_points", rep.stable_points.size()}, {"components_without_hit", missing}};
    rep.verdicts.push_back(v);
  }
  // (iv)
  {
    Verdict v{"order_injectivity", "Thm 4.1, Cor 4.5"};
    nlohmann::json clashes = nlohmann::json::array();
    auto check = [&](const std::vector<std::size_t>& idx, const std::string& where) {
      std::set<OrderMatrix> seen;
      for (std::size_t k : idx)
        if (!seen.insert(rep.vertices[k].order_matrix).second) clashes.push_back(where);
    };
    for (const auto& c : rep.components) check(c.polytope_vertices, "component " + std::to_string(c.id));
    check(rep.hull_vertices, "hull of all vertices");
    v.status = clashes.empty() ? VerdictStatus::pass : VerdictStatus::fail;
    v.detail = {{"clashes", clashes}};
    rep.verdicts.push_back(v);
  }
  // (v) and (vi)
  {
    Verdict v{"mixed_cone_correspondence", "Thm 4.4"};
    Verdict cone{"normal_cone_containment", "Prop 4.2"};
    if (!full) {
      v.status = cone.status = VerdictStatus::not_checked;
      v.detail = cone.detail = {{"note", "a Newton polytope is not two-dimensional"}};
    } else {
      std::size_t newton_rows = 0, overlapping = 0;
      nlohmann::json failures = nlohmann::json::array();
      for (std::size_t k : rep.hull_vertices) {
        const auto& m = rep.vertices[k].order_matrix;
        if (!is_newton_vertex(n1, m.rows[0]) || !is_newton_vertex(n2, m.rows[1])) continue;
        ++newton_rows;
        if (cones_overlap(normal_cone(n1, m.rows[0]), normal_cone(n2, m.rows[1]))) ++overlapping;
        else failures.push_back({row_json(m.rows[0]), row_json(m.rows[1])});
      }
      v.status = rep.hull_vertices.size() == rep.mixed_cones && newton_rows == rep.hull_vertices.size()
                     ? VerdictStatus::pass
                     : VerdictStatus::fail;
      v.detail = {{"hull_vertices", rep.hull_vertices.size()},
                  {"mixed_cones", rep.mixed_cones},
                  {"hull_vertices_with_newton_rows", newton_rows}};
      cone.status = failures.empty() ? VerdictStatus::pass : VerdictStatus::fail;
      cone.detail = {{"checked", newton_rows}, {"full_dimensional", overlapping}, {"failures", failures}};
      if (bounded < rep.components.size()) {
        v.status = cone.status = VerdictStatus::not_checked;
        v.detail["note"] = cone.detail["note"] = "a component reaches the window edge";
      }
    }
    rep.verdicts.push_back(v);
    rep.verdicts.push_back(cone);
  }
  // (vii)
  {
    Verdict v{"boundary_orders", "Lemma 3.9"};
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& c : rep.components) {
      std::array<std::set<Exponent>, 2> orders;
      for (const auto& f : c.faces) orders[f.amoeba].insert(f.order);
      if (c.vertices.empty() || (c.bounded && (orders[0].size() < 2 || orders[1].size() < 2)))
        failures.push_back({{"component", c.id},
                            {"vertices", c.vertices.size()},
                            {"orders_f1", orders[0].size()},
                            {"orders_f2", orders[1].size()}});
    }
    v.status = failures.empty() ? VerdictStatus::pass : VerdictStatus::fail;
    v.detail = {{"failures", failures}};
    if (bounded < rep.components.size()) v.detail["note"] = "components reaching the window edge only need a vertex";
    rep.verdicts.push_back(v);
  }
  // (viii)
  {
    Verdict v{"dimension", "Thm 3.3"};
    nlohmann::json missing = nlohmann::json::array();
    for (const auto& c : rep.components)
      if (c.interior_cells == 0) missing.push_back(c.id);
    if (in.degenerate_mode && (rep.thin[0] || rep.thin[1])) {
      v.status = VerdictStatus::not_checked;
      v.detail = {{"note", "measure-zero amoeba in degenerate mode"}, {"components_without_interior", missing}};
    } else {
      v.status = missing.empty() ? VerdictStatus::pass : VerdictStatus::fail;
      v.detail = {{"components_without_interior", missing}};
    }
    rep.verdicts.push_back(v);
  }
  // faces
  {
    Verdict v{"face_labels", "Lemma 3.6"};
    nlohmann::json split = nlohmann::json::array();
    for (const auto& c : rep.components)
      for (const auto& f : c.faces)
        if (f.arcs != 1)
          split.push_back({{"component", c.id}, {"amoeba", f.amoeba + 1}, {"order", row_json(f.order)}, {"arcs", f.arcs}});
    v.status = split.empty() ? VerdictStatus::pass : VerdictStatus::fail;
    v.detail = {{"disconnected_labels", split}};
    rep.verdicts.push_back(v);
  }
  return rep;
}

void order_polytope(IntersectionReport& rep, const LaurentPolynomial& f1, const LaurentPolynomial& f2) {
  const LatticePolytope n1 = convex_hull(f1.support());
  const LatticePolytope n2 = convex_hull(f2.support());
  OrderPolytopeData& op = rep.order_polytope;
  op = {};
  std::set<std::array<std::int64_t, 4>> distinct;
  for (const auto& v : rep.vertices) distinct.insert(v.order_matrix.flattened());
  op.points.assign(distinct.begin(), distinct.end());
  op.product_vertices = n1.vertices.size() * n2.vertices.size();
  std::vector<LatticePoint> pts;
  for (const auto& p : op.points) pts.push_back({p[0], p[1], p[2], p[3]});
  op.is_vertex = pts.empty() ? std::vector<bool>{} : certify_vertices(pts);
  for (std::size_t k = 0; k < op.points.size(); ++k) {
    if (!op.is_vertex[k]) continue;
    ++op.vertex_count;
    const auto& p = op.points[k];
    if (is_newton_vertex(n1, {p[0], p[1]}) && is_newton_vertex(n2, {p[2], p[3]})) ++op.shared_with_product;
  }

  Verdict a{"order_polytope_containment", "Thm 4.7(a)"};
  nlohmann::json outside = nlohmann::json::array();
  for (const auto& p : op.points)
    if (!n1.contains({p[0], p[1]}) || !n2.contains({p[2], p[3]})) outside.push_back(p);
  a.status = outside.empty() ? VerdictStatus::pass : VerdictStatus::fail;
  a.detail = {{"matrices", op.points.size()}, {"outside", outside}};
  rep.verdicts.push_back(a);

  Verdict b{"order_polytope_vertices", "Thm 4.7(b)"};
  if (n1.dimension != 2 || n2.dimension != 2) {
    b.status = VerdictStatus::not_checked;
    b.detail = {{"note", "a Newton polytope is not two-dimensional"}};
  } else {
    std::set<std::array<std::int64_t, 4>> hull_matrices;
    nlohmann::json failures = nlohmann::json::array();
    for (std::size_t k : rep.hull_vertices) {
      const auto flat = rep.vertices[k].order_matrix.flattened();
      hull_matrices.insert(flat);
      const auto pos = static_cast<std::size_t>(std::lower_bound(op.points.begin(), op.points.end(), flat) - op.points.begin());
      const Exponent r0{flat[0], flat[1]}, r1{flat[2], flat[3]};
      const bool vertex = op.is_vertex[pos];
      const bool product = is_newton_vertex(n1, r0) && is_newton_vertex(n2, r1);
      const bool cone = product && cones_overlap(normal_cone(n1, r0), normal_cone(n2, r1));
      if (!vertex || !product || !cone)
        failures.push_back({{"matrix", flat}, {"order_polytope_vertex", vertex}, {"product_vertex", product}, {"cones_meet", cone}});
    }
    b.status = failures.empty() && hull_matrices.size() >= rep.mixed_cones ? VerdictStatus::pass : VerdictStatus::fail;
    b.detail = {{"order_polytope_vertices", op.vertex_count},
                {"shared_with_product", op.shared_with_product},
                {"product_vertices", op.product_vertices},
                {"hull_matrices", hull_matrices.size()},
                {"mixed_cones", rep.mixed_cones},
                {"failures", failures}};
    if (std::any_of(rep.components.begin(), rep.components.end(), [](const ComponentRecord& c) { return !c.bounded; })) {
      b.status = VerdictStatus::not_checked;
      b.detail["note"] = "a component reaches the window edge";
    }
  }
  rep.verdicts.push_back(b);
}

std::size_t longest_shared_boundary(const AmoebaRaster& r1, const AmoebaRaster& r2) {
  const Window& w = r1.window;
  auto boundary = [&](const AmoebaRaster& r, int i, int j) {
    if (!r.member(i, j)) return false;
    for (const auto& [a, b] : neighbors4(i, j))
      if (a >= 0 && b >= 0 && a < w.nx && b < w.ny && !r.member(a, b)) return true;
    return false;
  };
  std::set<std::size_t> shared;
  for (int j = 0; j < w.ny; ++j)
    for (int i = 0; i < w.nx; ++i)
      if (boundary(r1, i, j) && boundary(r2, i, j)) shared.insert(r1.index(i, j));
  std::size_t longest = 0;
  std::set<std::size_t> seen;
  std::vector<std::size_t> stack;
  for (std::size_t start : shared) {
    if (seen.count(start)) continue;
    std::size_t size = 0;
    seen.insert(start);
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      ++size;
      const int i = static_cast<int>(c % w.nx), j = static_cast<int>(c / w.nx);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= w.nx || b >= w.ny) continue;
          const std::size_t n = r1.index(a, b);
          if (shared.count(n) && !seen.count(n)) {
            seen.insert(n);
            stack.push_back(n);
          }
        }
    }
    longest = std::max(longest, size);
  }
  return longest;
}

void genericity_screen(IntersectionReport& rep, const AmoebaRaster& r1, const AmoebaRaster& r2) {
  Verdict irreducible{"genericity_irreducibility", "§3 condition (1)"};
  irreducible.status = VerdictStatus::not_checked;
  irreducible.detail = {{"note", "irreducibility is not checked"}};
  rep.verdicts.push_back(irreducible);

  Verdict thin{"degeneracy", "§3 condition (1)"};
  const std::array<const AmoebaRaster*, 2> rasters{&r1, &r2};
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto* r : rasters) {
    const std::size_t members = r->member_count();
    ratios.push_back(members == 0 ? 0.0 : static_cast<double>(r->interior_member_count()) / static_cast<double>(members));
  }
  thin.status = rep.thin[0] || rep.thin[1] ? VerdictStatus::flagged : VerdictStatus::pass;
  thin.detail = {{"interior_ratio", ratios},
                 {"measure_zero", {rep.thin[0], rep.thin[1]}},
                 {"threshold", kThinnessRatio}};
  rep.verdicts.push_back(thin);

  Verdict codim{"genericity_codimension", "§3 condition (2)"};
  const std::size_t longest = longest_shared_boundary(r1, r2);
  codim.status = longest <= kSharedBoundaryLimit ? VerdictStatus::pass : VerdictStatus::fail;
  codim.detail = {{"longest_shared_boundary_cells", longest}, {"limit", kSharedBoundaryLimit}};
  rep.verdicts.push_back(codim);

  Verdict unique{"genericity_unique_component", "§3 condition (3)"};
  std::size_t violations = 0, swallowed = 0, split = 0;
  for (const auto& i : rep.issues) (i.kind == "vertex swallowed" ? swallowed : violations) += 1;
  for (const auto& v : rep.vertices) split += v.split;
  if (violations > 0) unique.status = VerdictStatus::fail;
  else if (split > 0) unique.status = VerdictStatus::flagged;
  unique.detail = {{"violations", violations}, {"swallowed", swallowed}, {"split_vertices", split}};
  rep.verdicts.push_back(unique);
}

bool IntersectionReport::all_pass() const {
  return std::none_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.status == VerdictStatus::fail; });
}

const Verdict* IntersectionReport::verdict(const std::string& key) const {
  for (const auto& v : verdicts)
    if (v.key == key) return &v;
  return nullptr;
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::flagged: return "flagged";
    case VerdictStatus::not_checked: return "not checked";
  }
  return "unknown";
}

nlohmann::json to_json(const OrderMatrix& m) { return {row_json(m.rows[0]), row_json(m.rows[1])}; }

nlohmann::json to_json(const IntersectionReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["window"] = to_json(r.window);
  j["degenerate_mode"] = r.degenerate_mode;
  j["components"] = r.components.size();
  nlohmann::json records = nlohmann::json::array();
  for (const auto& c : r.components) {
    nlohmann::json faces = nlohmann::json::array();
    for (const auto& f : c.faces)
      faces.push_back({{"amoeba", f.amoeba + 1}, {"order", row_json(f.order)}, {"cells", f.cells}, {"arcs", f.arcs}});
    nlohmann::json poly = nlohmann::json::array();
    for (const auto& p : c.polytope) poly.push_back(vec_json(p));
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& p : c.spine_hits) hits.push_back(vec_json(p));
    records.push_back({{"id", c.id},
                       {"cells", c.cells.size()},
                       {"bounded", c.bounded},
                       {"interior_cells", c.interior_cells},
                       {"vertices", c.vertices},
                       {"polytope", poly},
                       {"polytope_vertices", c.polytope_vertices},
                       {"faces", faces},
                       {"spine_hits", hits}});
  }
  j["component_records"] = records;
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : r.vertices)
    verts.push_back({{"location", vec_json(v.location)},
                     {"order_matrix", to_json(v.order_matrix)},
                     {"adjacent_component_ids", v.adjacent_component_ids},
                     {"component", v.component},
                     {"refined", v.refined},
                     {"split", v.split}});
  j["vertices"] = verts;
  j["hull_vertices"] = r.hull_vertices;
  nlohmann::json opv = nlohmann::json::array();
  for (std::size_t k = 0; k < r.order_polytope.points.size(); ++k)
    opv.push_back({{"matrix", r.order_polytope.points[k]}, {"vertex", static_cast<bool>(r.order_polytope.is_vertex[k])}});
  j["order_polytope"] = {{"points", opv},
                         {"vertices", r.order_polytope.vertex_count},
                         {"shared_with_product", r.order_polytope.shared_with_product},
                         {"product_vertices", r.order_polytope.product_vertices}};
  j["mixed_volume"] = r.mixed_volume.denominator() == 1 ? nlohmann::json(r.mixed_volume.numerator())
                                                        : nlohmann::json(boost::rational_cast<double>(r.mixed_volume));
  j["bezout_product"] = r.bezout_product;
  j["mixed_cones"] = r.mixed_cones;
  j["spine_mixed_cells"] = r.spine_mixed_cells;
  nlohmann::json stable = nlohmann::json::array();
  for (const auto& p : r.stable_points) stable.push_back({{"location", vec_json(p.location)}, {"multiplicity", p.multiplicity}});
  j["stable_points"] = stable;
  nlohmann::json issues = nlohmann::json::array();
  for (const auto& i : r.issues) {
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& o : i.orders) orders.push_back(row_json(o));
    issues.push_back({{"location", vec_json(i.location)}, {"amoeba", i.amoeba + 1}, {"kind", i.kind}, {"orders", orders}});
  }
  j["issues"] = issues;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"key", v.key}, {"theorem", v.anchor}, {"status", to_string(v.status)}, {"detail", v.detail}});
  j["verdicts"] = verdicts;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace amoeba
