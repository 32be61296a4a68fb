#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoeba/laurent.hpp"
#include "amoeba/lattice.hpp"

namespace amoeba {

/// Axis-aligned view of the log plane split into nx * ny cells.
struct Window {
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int nx = 400, ny = 400;

  /// Throws std::invalid_argument on an empty box or non-positive resolution.
  void validate() const;
  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
  double cell_size() const { return std::max(dx(), dy()); }
  std::array<double, 2> center(int i, int j) const {
    return {x_min + (i + 0.5) * dx(), y_min + (j + 0.5) * dy()};
  }
  /// Cell containing x, or nothing when x is outside the window.
  std::optional<std::array<int, 2>> cell_of(const std::array<double, 2>& x) const;
  bool operator==(const Window&) const = default;
};

struct ComplementComponent {
  int id = 0;
  std::size_t cells = 0;
  bool touches_edge = false;
  bool resolved = false;
  Exponent order{};
  std::array<int, 2> sample_cell{};  // deepest cell, where the order was evaluated
};

/// Painted amoeba membership plus the labeled complement.
struct AmoebaRaster {
  Window window;
  std::vector<std::uint8_t> membership;  // row-major, index j * nx + i
  std::vector<int> component_id;         // -1 on member cells; filled by label_components
  std::vector<ComplementComponent> components;
  std::vector<std::string> warnings;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * window.nx + i; }
  bool member(int i, int j) const { return membership[index(i, j)] != 0; }
  int component_at(int i, int j) const { return component_id.empty() ? -1 : component_id[index(i, j)]; }
  std::optional<Exponent> order_of_component(int id) const;
  std::size_t member_count() const;
  /// Member cells whose eight neighbors are all members (window edge counts as member).
  std::size_t interior_member_count() const;
};

inline constexpr int kDefaultOrderTrials = 8;

/// Membership only. Each row and column derives its angle offset from
/// (seed, index), so the result does not depend on the worker count.
AmoebaRaster raster_amoeba(const LaurentPolynomial& f, const Window& w, int angle_samples, std::uint64_t seed);

class PointOnAmoeba : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Order of the complement component containing x, by counting fiber roots
/// inside the circle of radius e^{x_j}. Throws PointOnAmoeba when trials
/// disagree or a root lies within 1e-6 (in log modulus) of that circle.
Exponent order_at(const LaurentPolynomial& f, const std::array<double, 2>& x, int trials = kDefaultOrderTrials,
                  std::uint64_t seed = 0);

/// Flood-fills the complement and attaches an order to every component.
/// Unresolvable components of at most `pinhole_cells` cells are painted over.
void label_components(AmoebaRaster& r, const LaurentPolynomial& f, int trials = kDefaultOrderTrials,
                      std::uint64_t seed = 0, std::size_t pinhole_cells = 9);

/// Cells of a component ordered by decreasing distance from the amoeba.
std::vector<std::array<int, 2>> deepest_cells(const AmoebaRaster& r, int component, std::size_t count);

struct RonkinValue {
  double value = 0.0;
  std::size_t skipped_nodes = 0;  // nodes with |f| < 1e-14
};

RonkinValue ronkin(const LaurentPolynomial& f, const std::array<double, 2>& x, int quad_n);

class QuadratureTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RonkinCoefficient {
  double mean = 0.0;
  double stddev = 0.0;
};

inline constexpr double kRonkinSpreadLimit = 5e-3;

/// Mean of R_f(x) - <alpha, x> over samples lying in E_alpha.
RonkinCoefficient ronkin_coefficient(const LaurentPolynomial& f, const std::vector<std::array<double, 2>>& samples,
                                     const Exponent& alpha, int quad_n, int trials = kDefaultOrderTrials,
                                     std::uint64_t seed = 0);

nlohmann::json to_json(const Window& w);
Window window_from_json(const nlohmann::json& j);
/// Window, run-length-encoded membership and the component table.
nlohmann::json to_json(const AmoebaRaster& r);

}  // namespace amoeba
