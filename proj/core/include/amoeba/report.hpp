#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoeba/intersection.hpp"
#include "amoeba/laurent.hpp"
#include "amoeba/numerics.hpp"

namespace amoeba {

enum class Mode { newton, amoeba, spine, tropical, intersect, verify };

std::string to_string(Mode m);
std::optional<Mode> mode_from_string(const std::string& s);

/// Bad scenario file or flags; the CLI exits with status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bounds {
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
};

struct Scenario {
  Mode mode = Mode::verify;
  std::vector<LaurentPolynomial> polynomials;
  std::optional<Bounds> window;  // nothing means automatic
  int resolution = 400;
  int angle_samples = 256;
  int quad_n = 256;
  std::uint64_t seed = 0;
  bool degenerate_mode = false;
  std::vector<double> epsilons;               // empty: chosen from the cell size
  std::vector<std::vector<double>> lifts;     // tropical mode; empty: log |coefficient|
  double merge_radius_cells = 3.0;
  int refine_factor = 4;
};

/// Parses scenario JSON. Syntax errors carry the line and column.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
/// Throws InputError unless the polynomial count suits the mode.
void check_scenario(const Scenario& s);

/// Square window around the vertices of the log|coefficient| tropical
/// curves, padded by `padding` on every side.
Window auto_window(const std::vector<LaurentPolynomial>& fs, int resolution, double padding = 2.0);
Window scenario_window(const Scenario& s);

struct RunOutput {
  nlohmann::json report;
  std::string svg;
  /// 0 when no verdict failed, 2 otherwise.
  int exit_code = 0;
};

/// Runs the mode's pipeline. Input problems throw InputError.
RunOutput run_scenario(const Scenario& s);

/// Status of a verdict list: 2 if any entry failed, else 0.
int exit_code_for(const nlohmann::json& verdicts);

/// Everything the intersect and verify modes compute, kept for callers that
/// need more than the JSON.
struct PairAnalysis {
  Window window;
  AmoebaRaster r1, r2;
  SpineData s1, s2;
  IntersectionGrid grid;
  IntersectionReport report;
};
PairAnalysis analyze_pair(const LaurentPolynomial& f1, const LaurentPolynomial& f2, const Window& w, const Scenario& s);

}  // namespace amoeba
