#include "amoeba/svg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace amoeba {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

SvgCanvas::SvgCanvas(double x_min, double x_max, double y_min, double y_max, int width_px)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width_px) {
  if (!(x_max > x_min) || !(y_max > y_min) || width_px <= 0) throw std::invalid_argument("empty SVG view");
  height_ = std::max(1, static_cast<int>(std::lround(width_px * (y_max - y_min) / (x_max - x_min))));
}

double SvgCanvas::px(double x) const { return (x - x_min_) / (x_max_ - x_min_) * width_; }
double SvgCanvas::py(double y) const { return (y_max_ - y) / (y_max_ - y_min_) * height_; }
double SvgCanvas::reach() const { return 4.0 * std::hypot(x_max_ - x_min_, y_max_ - y_min_); }

void SvgCanvas::cells(const std::vector<std::uint8_t>& mask, const Window& grid, const std::string& fill, double opacity) {
  if (mask.size() != static_cast<std::size_t>(grid.nx) * grid.ny) throw std::invalid_argument("mask does not match grid");
  std::string path;
  for (int j = 0; j < grid.ny; ++j) {
    int i = 0;
    while (i < grid.nx) {
      if (!mask[static_cast<std::size_t>(j) * grid.nx + i]) {
        ++i;
        continue;
      }
      const int start = i;
      while (i < grid.nx && mask[static_cast<std::size_t>(j) * grid.nx + i]) ++i;
      const double x0 = px(grid.x_min + start * grid.dx()), x1 = px(grid.x_min + i * grid.dx());
      const double y0 = py(grid.y_min + (j + 1) * grid.dy()), y1 = py(grid.y_min + j * grid.dy());
      path += "M" + num(x0) + " " + num(y0) + "H" + num(x1) + "V" + num(y1) + "H" + num(x0) + "Z";
    }
  }
  if (path.empty()) return;
  body_ += "<path d=\"" + path + "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) + "\" stroke=\"none\"/>\n";
}

void SvgCanvas::polyline(const std::vector<Vec2>& points, const std::string& stroke, double width, bool dashed,
                         bool closed) {
  if (points.empty()) return;
  std::string pts;
  for (const auto& p : points) pts += (pts.empty() ? "" : " ") + num(px(p[0])) + "," + num(py(p[1]));
  body_ += std::string("<") + (closed ? "polygon" : "polyline") + " points=\"" + pts + "\" fill=\"none\" stroke=\"" +
           stroke + "\" stroke-width=\"" + num(width) + "\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
}

void SvgCanvas::segment(const Vec2& a, const Vec2& b, const std::string& stroke, double width, bool dashed) {
  body_ += "<line x1=\"" + num(px(a[0])) + "\" y1=\"" + num(py(a[1])) + "\" x2=\"" + num(px(b[0])) + "\" y2=\"" +
           num(py(b[1])) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"" +
           (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
}

void SvgCanvas::curve(const TropicalCurve& c, const std::string& stroke, double width, bool dashed) {
  const double far = reach();
  for (const auto& e : c.edges) segment(e.from, e.to, stroke, width, dashed);
  for (const auto& r : c.rays) {
    const double n = std::hypot(static_cast<double>(r.direction[0]), static_cast<double>(r.direction[1]));
    segment(r.base, {r.base[0] + far * r.direction[0] / n, r.base[1] + far * r.direction[1] / n}, stroke, width, dashed);
  }
  for (const auto& l : c.lines) {
    const double n = std::hypot(static_cast<double>(l.direction[0]), static_cast<double>(l.direction[1]));
    const Vec2 d{far * l.direction[0] / n, far * l.direction[1] / n};
    segment({l.point[0] - d[0], l.point[1] - d[1]}, {l.point[0] + d[0], l.point[1] + d[1]}, stroke, width, dashed);
  }
}

void SvgCanvas::dot(const Vec2& p, double radius_px, const std::string& fill) {
  body_ += "<circle cx=\"" + num(px(p[0])) + "\" cy=\"" + num(py(p[1])) + "\" r=\"" + num(radius_px) + "\" fill=\"" +
           fill + "\"/>\n";
}

void SvgCanvas::text(const Vec2& p, const std::string& s, double size_px) {
  body_ += "<text x=\"" + num(px(p[0])) + "\" y=\"" + num(py(p[1])) + "\" font-family=\"sans-serif\" font-size=\"" +
           num(size_px) + "\">" + escape(s) + "</text>\n";
}

std::string SvgCanvas::str() const {
  const std::string w = std::to_string(width_), h = std::to_string(height_);
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n"
         "<defs><clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\"/></clipPath></defs>\n"
         "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"white\"/>\n"
         "<g clip-path=\"url(#view)\">\n" + body_ + "</g>\n</svg>\n";
}

}  // namespace amoeba
