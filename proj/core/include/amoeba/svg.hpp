#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amoeba/numerics.hpp"
#include "amoeba/tropical.hpp"

namespace amoeba {

/// Minimal SVG 1.1 writer in world coordinates (y pointing up).
/// Output depends only on the calls made, so equal inputs give equal bytes.
class SvgCanvas {
 public:
  SvgCanvas(double x_min, double x_max, double y_min, double y_max, int width_px = 640);
  explicit SvgCanvas(const Window& view, int width_px = 640)
      : SvgCanvas(view.x_min, view.x_max, view.y_min, view.y_max, width_px) {}

  /// Set cells of a row-major mask over `grid`, merged into horizontal runs.
  void cells(const std::vector<std::uint8_t>& mask, const Window& grid, const std::string& fill, double opacity);
  void polyline(const std::vector<Vec2>& points, const std::string& stroke, double width, bool dashed = false,
                bool closed = false);
  void segment(const Vec2& a, const Vec2& b, const std::string& stroke, double width, bool dashed = false);
  /// Edges, rays and lines; rays are cut at the view boundary by the clip path.
  void curve(const TropicalCurve& c, const std::string& stroke, double width, bool dashed);
  void dot(const Vec2& p, double radius_px, const std::string& fill);
  void text(const Vec2& p, const std::string& s, double size_px = 11.0);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  double reach() const;

  double x_min_, x_max_, y_min_, y_max_;
  int width_, height_;
  std::string body_;
};

}  // namespace amoeba
