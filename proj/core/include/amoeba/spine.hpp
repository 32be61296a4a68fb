#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoeba/laurent.hpp"
#include "amoeba/numerics.hpp"
#include "amoeba/tropical.hpp"

namespace amoeba {

struct SpineData {
  std::vector<Exponent> support;    // orders of labeled components
  std::vector<double> coefficients;  // Ronkin coefficients, same order as support
  std::vector<double> spreads;       // sample standard deviations
  TropicalCurve curve;
  /// A bounded component could not be resolved and was left out.
  bool incomplete = false;
  std::vector<std::string> warnings;

  TropicalPoly tropical_polynomial() const { return {support, coefficients}; }
};

inline constexpr int kSpineSamplesPerComponent = 5;

/// Spine from a labeled raster. Throws std::runtime_error when a component
/// reaching the window edge is unresolved.
SpineData build_spine(const LaurentPolynomial& f, const AmoebaRaster& r, int quad_n, std::uint64_t seed = 0);

/// Cells within Chebyshev distance `radius_cells` of the curve.
std::vector<std::uint8_t> curve_neighborhood(const TropicalCurve& c, const Window& w, int radius_cells);

struct RetractionRow {
  double epsilon = 0.0;
  std::size_t components = 0;
};

struct RetractionTable {
  std::vector<RetractionRow> rows;
  std::size_t stable_points = 0;
  std::int64_t stable_multiplicity = 0;
  Rational mixed_volume{0};
};

/// Component counts of the intersected epsilon-neighborhoods of two spines.
/// Epsilons must be positive, strictly decreasing and at least one cell.
RetractionTable retract_experiment(const SpineData& s1, const SpineData& s2, const Window& w,
                                   const std::vector<double>& epsilons, const LatticePolytope& newton1,
                                   const LatticePolytope& newton2, std::uint64_t seed = 0);

/// Number of 4-connected components of set cells.
std::size_t count_components(const std::vector<std::uint8_t>& cells, int nx, int ny);

nlohmann::json to_json(const SpineData& s);
nlohmann::json to_json(const RetractionTable& t);

}  // namespace amoeba
