#include "amoeba/numerics.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "amoeba/roots.hpp"
#include "amoeba/util.hpp"

namespace amoeba {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryGap = 1e-6;
constexpr double kVanishingNode = 1e-14;
constexpr std::uint64_t kColumnStream = 1ULL << 40;

using Grid = std::vector<std::uint8_t>;

Grid closing(const Grid& g, int nx, int ny) {
  auto at = [&](const Grid& src, int i, int j, std::uint8_t outside) -> std::uint8_t {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return outside;
    return src[static_cast<std::size_t>(j) * nx + i];
  };
  Grid dilated(g.size(), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      std::uint8_t v = 0;
      for (int dj = -1; dj <= 1 && !v; ++dj)
        for (int di = -1; di <= 1 && !v; ++di) v = at(g, i + di, j + dj, 0);
      dilated[static_cast<std::size_t>(j) * nx + i] = v;
    }
  Grid eroded(g.size(), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      std::uint8_t v = 1;
      for (int dj = -1; dj <= 1 && v; ++dj)
        for (int di = -1; di <= 1 && v; ++di) v = at(dilated, i + di, j + dj, 1);
      eroded[static_cast<std::size_t>(j) * nx + i] = v;
    }
  return eroded;
}

// Paints the roots of one family of fibers: free_axis varies, the other
// coordinate is fixed at log-modulus `fixed_log`.
template <typename Mark>
void paint_fiber_family(const LaurentPolynomial& f, int free_axis, double fixed_log, int angle_samples,
                        std::uint64_t stream_seed, Mark mark) {
  const double offset = unit_interval(splitmix64(stream_seed)) * kTwoPi / angle_samples;
  const double modulus = std::exp(fixed_log);
  for (int k = 0; k < angle_samples; ++k) {
    const double theta = offset + kTwoPi * k / angle_samples;
    UnivariatePoly p;
    try {
      p = fiber_restrict(f, free_axis, std::polar(modulus, theta));
    } catch (const DegenerateInput&) {
      continue;
    }
    if (p.degree() < 1) continue;
    for (const Complex& w : polynomial_roots(p.coefficients)) {
      const double m = std::abs(w);
      if (m > 0.0 && std::isfinite(m)) mark(std::log(m));
    }
  }
}

std::vector<int> chebyshev_distance_to_members(const AmoebaRaster& r) {
  const int nx = r.window.nx, ny = r.window.ny;
  const int unreached = std::numeric_limits<int>::max();
  std::vector<int> dist(r.membership.size(), unreached);
  std::deque<std::size_t> queue;
  for (std::size_t c = 0; c < r.membership.size(); ++c)
    if (r.membership[c]) {
      dist[c] = 0;
      queue.push_back(c);
    }
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    const int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int a = i + di, b = j + dj;
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const std::size_t n = r.index(a, b);
        if (dist[n] == unreached) {
          dist[n] = dist[c] + 1;
          queue.push_back(n);
        }
      }
  }
  return dist;
}

int flood_components(AmoebaRaster& r) {
  const int nx = r.window.nx, ny = r.window.ny;
  r.component_id.assign(r.membership.size(), -1);
  r.components.clear();
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < r.membership.size(); ++start) {
    if (r.membership[start] || r.component_id[start] != -1) continue;
    ComplementComponent comp;
    comp.id = next;
    r.component_id[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      ++comp.cells;
      const int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) comp.touches_edge = true;
      const std::array<std::array<int, 2>, 4> nbrs{{{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
      for (const auto& [a, b] : nbrs) {
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const std::size_t n = r.index(a, b);
        if (!r.membership[n] && r.component_id[n] == -1) {
          r.component_id[n] = next;
          stack.push_back(n);
        }
      }
    }
    r.components.push_back(comp);
    ++next;
  }
  return next;
}

}  // namespace

void Window::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max)) throw std::invalid_argument("window must satisfy x_min < x_max and y_min < y_max");
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("window resolution must be positive");
}

std::optional<std::array<int, 2>> Window::cell_of(const std::array<double, 2>& x) const {
  const double fi = std::floor((x[0] - x_min) / dx());
  const double fj = std::floor((x[1] - y_min) / dy());
  if (!(fi >= 0 && fj >= 0 && fi < nx && fj < ny)) return std::nullopt;
  return std::array<int, 2>{static_cast<int>(fi), static_cast<int>(fj)};
}

std::optional<Exponent> AmoebaRaster::order_of_component(int id) const {
  if (id < 0 || id >= static_cast<int>(components.size()) || !components[id].resolved) return std::nullopt;
  return components[id].order;
}

std::size_t AmoebaRaster::member_count() const {
  return static_cast<std::size_t>(std::count(membership.begin(), membership.end(), std::uint8_t{1}));
}

std::size_t AmoebaRaster::interior_member_count() const {
  std::size_t count = 0;
  for (int j = 0; j < window.ny; ++j)
    for (int i = 0; i < window.nx; ++i) {
      if (!member(i, j)) continue;
      bool interior = true;
      for (int dj = -1; dj <= 1 && interior; ++dj)
        for (int di = -1; di <= 1 && interior; ++di) {
          const int a = i + di, b = j + dj;
          if (a >= 0 && b >= 0 && a < window.nx && b < window.ny && !member(a, b)) interior = false;
        }
      if (interior) ++count;
    }
  return count;
}

AmoebaRaster raster_amoeba(const LaurentPolynomial& f, const Window& w, int angle_samples, std::uint64_t seed) {
  w.validate();
  if (angle_samples < 16) throw std::invalid_argument("angle_samples must be at least 16");
  AmoebaRaster r;
  r.window = w;
  const std::size_t cells = static_cast<std::size_t>(w.nx) * w.ny;
  r.membership.assign(cells, 0);
  if (f.is_monomial()) {
    r.warnings.push_back("monomial polynomial: empty amoeba");
    return r;
  }
  Grid rows(cells, 0), cols(cells, 0);
  const double dx = w.dx(), dy = w.dy();
  parallel_for(static_cast<std::size_t>(w.ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    paint_fiber_family(f, 0, w.center(0, j)[1], angle_samples, mix_seed(seed, jj), [&](double x1) {
      const double fi = std::floor((x1 - w.x_min) / dx);
      if (fi >= 0 && fi < w.nx) rows[r.index(static_cast<int>(fi), j)] = 1;
    });
  });
  parallel_for(static_cast<std::size_t>(w.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    paint_fiber_family(f, 1, w.center(i, 0)[0], angle_samples, mix_seed(seed, kColumnStream + ii), [&](double x2) {
      const double fj = std::floor((x2 - w.y_min) / dy);
      if (fj >= 0 && fj < w.ny) cols[r.index(i, static_cast<int>(fj))] = 1;
    });
  });
  Grid both(cells, 0);
  for (std::size_t c = 0; c < cells; ++c) both[c] = rows[c] | cols[c];
  r.membership = closing(both, w.nx, w.ny);
  return r;
}

Exponent order_at(const LaurentPolynomial& f, const std::array<double, 2>& x, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("order_at needs at least one trial");
  Exponent result{};
  SplitMix rng(mix_seed(seed, 0x0de7));
  for (int axis = 0; axis < 2; ++axis) {
    const double other = x[1 - axis];
    std::optional<std::int64_t> agreed;
    for (int t = 0; t < trials; ++t) {
      const double theta = kTwoPi * rng.uniform();
      const UnivariatePoly p = fiber_restrict(f, axis, std::polar(std::exp(other), theta));
      std::int64_t inside = p.shift;
      if (p.degree() >= 1) {
        for (const Complex& w : polynomial_roots(p.coefficients)) {
          const double lm = std::log(std::abs(w));
          if (std::abs(lm - x[axis]) < kBoundaryGap) throw PointOnAmoeba("point on or near amoeba");
          if (lm < x[axis]) ++inside;
        }
      }
      if (agreed && *agreed != inside) throw PointOnAmoeba("point on or near amoeba: root counts disagree");
      agreed = inside;
    }
    result[axis] = *agreed;
  }
  return result;
}

std::vector<std::array<int, 2>> deepest_cells(const AmoebaRaster& r, int component, std::size_t count) {
  const auto dist = chebyshev_distance_to_members(r);
  std::vector<std::size_t> cells;
  int best = -1;
  std::size_t deepest = 0;
  for (std::size_t c = 0; c < r.component_id.size(); ++c) {
    if (r.component_id[c] != component) continue;
    cells.push_back(c);
    if (dist[c] > best) {
      best = dist[c];
      deepest = c;
    }
  }
  std::vector<std::array<int, 2>> out;
  if (cells.empty() || count == 0) return out;
  const int nx = r.window.nx;
  auto cell = [nx](std::size_t c) { return std::array<int, 2>{static_cast<int>(c % nx), static_cast<int>(c / nx)}; };
  out.push_back(cell(deepest));
  // the rest spread over the deeper half of the component
  const int floor_depth = best == std::numeric_limits<int>::max() ? best : std::max(1, (best + 1) / 2);
  std::vector<std::size_t> deep;
  for (std::size_t c : cells)
    if (c != deepest && dist[c] >= floor_depth) deep.push_back(c);
  const std::size_t want = std::min(count - 1, deep.size());
  for (std::size_t k = 0; k < want; ++k) out.push_back(cell(deep[(2 * k + 1) * deep.size() / (2 * want)]));
  return out;
}

void label_components(AmoebaRaster& r, const LaurentPolynomial& f, int trials, std::uint64_t seed,
                      std::size_t pinhole_cells) {
  const LatticePolytope newton = convex_hull(f.support());
  for (int pass = 0;; ++pass) {
    const int n = flood_components(r);
    std::vector<std::vector<std::array<int, 2>>> candidates(static_cast<std::size_t>(n));
    for (int id = 0; id < n; ++id) candidates[id] = deepest_cells(r, id, 6);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t id) {
      ComplementComponent& comp = r.components[id];
      for (const auto& cell : candidates[id]) {
        try {
          const Exponent u = order_at(f, r.window.center(cell[0], cell[1]), trials, mix_seed(seed, id));
          if (!newton.contains(u)) continue;
          comp.order = u;
          comp.sample_cell = cell;
          comp.resolved = true;
          break;
        } catch (const PointOnAmoeba&) {
        } catch (const DegenerateInput&) {
        }
      }
      if (!comp.resolved && !candidates[id].empty()) comp.sample_cell = candidates[id].front();
    });
    if (pass == 2) break;
    bool painted = false;
    for (const auto& comp : r.components)
      if (!comp.resolved && comp.cells <= pinhole_cells) {
        for (std::size_t c = 0; c < r.component_id.size(); ++c)
          if (r.component_id[c] == comp.id) r.membership[c] = 1;
        painted = true;
      }
    if (!painted) break;
  }
  std::set<Exponent> seen;
  for (const auto& comp : r.components) {
    if (!comp.resolved) {
      r.warnings.push_back("component " + std::to_string(comp.id) + " unresolved");
      continue;
    }
    if (!seen.insert(comp.order).second)
      r.warnings.push_back("order (" + std::to_string(comp.order[0]) + "," + std::to_string(comp.order[1]) +
                           ") appears on several components");
  }
  for (const auto& v : newton.vertices)
    if (!seen.count(v))
      r.warnings.push_back("no component with Newton vertex order (" + std::to_string(v[0]) + "," +
                           std::to_string(v[1]) + ") inside the window");
}

RonkinValue ronkin(const LaurentPolynomial& f, const std::array<double, 2>& x, int quad_n) {
  if (quad_n < 64) throw std::invalid_argument("quad_n must be at least 64");
  const auto n = static_cast<std::int64_t>(quad_n);
  std::vector<Complex> unit(static_cast<std::size_t>(n));
  for (std::int64_t m = 0; m < n; ++m) unit[m] = std::polar(1.0, kTwoPi * static_cast<double>(m) / quad_n);
  struct Term {
    Complex scale;
    std::int64_t a1, a2;
  };
  std::vector<Term> terms;
  for (const auto& [e, c] : f.terms())
    terms.push_back({c * std::exp(e[0] * x[0] + e[1] * x[1]), ((e[0] % n) + n) % n, ((e[1] % n) + n) % n});
  RonkinValue out;
  double total = 0.0;
  for (std::int64_t k1 = 0; k1 < n; ++k1) {
    double row = 0.0;
    for (std::int64_t k2 = 0; k2 < n; ++k2) {
      Complex v(0.0, 0.0);
      for (const auto& t : terms) v += t.scale * unit[(t.a1 * k1 + t.a2 * k2) % n];
      const double m = std::abs(v);
      if (m < kVanishingNode) {
        ++out.skipped_nodes;
        continue;
      }
      row += std::log(m);
    }
    total += row;
  }
  const auto used = static_cast<double>(n * n - static_cast<std::int64_t>(out.skipped_nodes));
  out.value = used > 0 ? total / used : 0.0;
  return out;
}

RonkinCoefficient ronkin_coefficient(const LaurentPolynomial& f, const std::vector<std::array<double, 2>>& samples,
                                     const Exponent& alpha, int quad_n, int trials, std::uint64_t seed) {
  if (samples.size() < 3) throw std::invalid_argument("ronkin_coefficient needs at least 3 samples");
  std::vector<double> values;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& x = samples[s];
    if (order_at(f, x, trials, mix_seed(seed, s)) != alpha)
      throw std::invalid_argument("sample point lies outside the component of the requested order");
    values.push_back(ronkin(f, x, quad_n).value - (alpha[0] * x[0] + alpha[1] * x[1]));
  }
  RonkinCoefficient out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(values.size()));
  if (out.stddev >= kRonkinSpreadLimit) throw QuadratureTooCoarse("quadrature too coarse");
  return out;
}

nlohmann::json to_json(const Window& w) {
  return {{"x_min", w.x_min}, {"x_max", w.x_max}, {"y_min", w.y_min}, {"y_max", w.y_max}, {"nx", w.nx}, {"ny", w.ny}};
}

Window window_from_json(const nlohmann::json& j) {
  Window w;
  w.x_min = j.at("x_min").get<double>();
  w.x_max = j.at("x_max").get<double>();
  w.y_min = j.at("y_min").get<double>();
  w.y_max = j.at("y_max").get<double>();
  if (j.contains("nx")) w.nx = j.at("nx").get<int>();
  if (j.contains("ny")) w.ny = j.at("ny").get<int>();
  w.validate();
  return w;
}

nlohmann::json to_json(const AmoebaRaster& r) {
  // runs alternate non-member / member, starting with non-member
  nlohmann::json runs = nlohmann::json::array();
  std::uint8_t current = 0;
  std::size_t length = 0;
  for (std::uint8_t v : r.membership) {
    if (v != current) {
      runs.push_back(length);
      current = v;
      length = 0;
    }
    ++length;
  }
  runs.push_back(length);
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : r.components) {
    nlohmann::json jc = {{"id", c.id}, {"cells", c.cells}, {"touches_edge", c.touches_edge}, {"resolved", c.resolved}};
    jc["order"] = c.resolved ? nlohmann::json{c.order[0], c.order[1]} : nlohmann::json(nullptr);
    comps.push_back(jc);
  }
  return {{"window", to_json(r.window)},
          {"membership_rle", runs},
          {"member_cells", r.member_count()},
          {"components", comps},
          {"warnings", r.warnings}};
}

}  // namespace amoeba
