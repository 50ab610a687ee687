#pragma once

#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"
#include "renorm/report/records.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace renorm::report {

/// Largest allowed |norm(vertex) − 1| for a drawn boundary vertex.
inline constexpr double self_check_tol = 1e-3;

using Point2 = std::array<double, 2>;

/// The 2-D section {a·u + b·v}.
struct SectionPlane
{
  CoordVector u;
  CoordVector v;

  void validate() const
  {
    const double uu = u.norm2(), vv = v.norm2();
    const double uv = pairing(as_functional(u), v);
    const double gram = uu * uu * vv * vv - uv * uv;
    if (!(uu > 0.0) || !(vv > 0.0) || !(gram > 1e-12 * uu * uu * vv * vv))
      throw std::invalid_argument("SectionPlane: plane vectors are dependent");
  }

  CoordVector at(double a, double b) const
  {
    CoordVector x = a * u;
    x.axpy(b, v);
    return x;
  }
};

struct SectionCurve
{
  std::string label;
  std::vector<Point2> vertices;
  double max_gauge_error = 0.0;
};

/// Boundary {norm = 1} of the section by polar ray tracing: the ray at angle
/// θ_k = 2πk/resolution meets the sphere at radius 1/norm(direction).
inline SectionCurve trace_section(const NormOracle& norm, const SectionPlane& plane, int resolution)
{
  plane.validate();
  if (resolution < 8) throw std::invalid_argument("trace_section: resolution must be at least 8");
  SectionCurve c;
  c.label = norm.label();
  for (int k = 0; k < resolution; ++k) {
    const double th = 2.0 * std::numbers::pi * k / resolution;
    const double ca = std::cos(th), sa = std::sin(th);
    const double nd = norm(plane.at(ca, sa));
    if (!(nd > 0.0) || !std::isfinite(nd)) throw invariant_error("trace_section: norm vanishes on the plane");
    const Point2 p{ca / nd, sa / nd};
    c.max_gauge_error = std::max(c.max_gauge_error, std::abs(norm(plane.at(p[0], p[1])) - 1.0));
    c.vertices.push_back(p);
  }
  return c;
}

/// max of `outer` over the vertices of a traced curve. For convex balls, a
/// value ≤ 1 means the polygon lies inside the unit ball of `outer`.
inline double max_norm_on(const SectionCurve& c, const SectionPlane& plane, const NormOracle& outer)
{
  double m = 0.0;
  for (const auto& p : c.vertices) m = std::max(m, outer(plane.at(p[0], p[1])));
  return m;
}

inline double min_norm_on(const SectionCurve& c, const SectionPlane& plane, const NormOracle& outer)
{
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : c.vertices) m = std::min(m, outer(plane.at(p[0], p[1])));
  return m;
}

struct Layer
{
  NormOracle norm;
  std::string fill;
  std::string stroke;
};

/// Reference outline drawn dashed on top of the sections (plane coordinates).
struct Guide
{
  std::string label;
  std::vector<Point2> points;
  bool closed = true;
  std::string stroke = "#c0392b";
};

struct SectionFigure
{
  std::vector<SectionCurve> curves;
  double max_gauge_error = 0.0;
  std::string svg;
};

namespace detail {

inline std::string fmt3(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string xml_escape(const std::string& s)
{
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

} // namespace detail

/// Traces every layer, checks each vertex against the 1e−3 gauge tolerance
/// and writes the overlay to `path` (layers drawn in order, first at the back).
/// Throws invariant_error, without writing, if a vertex fails the check.
inline SectionFigure render_section_svg(const std::vector<Layer>& layers, const SectionPlane& plane, int resolution,
                                        const std::filesystem::path& path, const std::vector<Guide>& guides = {},
                                        const std::string& title = "")
{
  if (layers.empty()) throw std::invalid_argument("render_section_svg: no layers");
  SectionFigure fig;
  double extent = 0.0;
  for (const auto& layer : layers) {
    auto c = trace_section(layer.norm, plane, resolution);
    if (!(c.max_gauge_error <= self_check_tol))
      throw invariant_error("render_section_svg: boundary self-check failed for " + c.label + " (error " +
                            format_double(c.max_gauge_error) + ")");
    fig.max_gauge_error = std::max(fig.max_gauge_error, c.max_gauge_error);
    for (const auto& p : c.vertices) extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
    fig.curves.push_back(std::move(c));
  }
  for (const auto& g : guides)
    for (const auto& p : g.points) extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
  extent *= 1.1;

  constexpr double size = 480.0;
  const double scale = 0.5 * size / extent;
  auto X = [&](double a) { return detail::fmt3(0.5 * size + scale * a); };
  auto Y = [&](double b) { return detail::fmt3(0.5 * size - scale * b); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  if (!title.empty()) s += "<title>" + detail::xml_escape(title) + "</title>\n";
  s += "<desc>resolution=" + std::to_string(resolution) + " max_gauge_error=" + format_double(fig.max_gauge_error) +
       " self_check_tol=" + format_double(self_check_tol) + "</desc>\n";
  s += "<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
  s += "<line x1=\"0\" y1=\"" + Y(0) + "\" x2=\"480\" y2=\"" + Y(0) + "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  s += "<line x1=\"" + X(0) + "\" y1=\"0\" x2=\"" + X(0) + "\" y2=\"480\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  for (std::size_t i = 0; i < layers.size(); ++i) {
    s += "<polygon data-label=\"" + detail::xml_escape(fig.curves[i].label) + "\" fill=\"" + layers[i].fill +
         "\" stroke=\"" + layers[i].stroke + "\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < fig.curves[i].vertices.size(); ++k) {
      const auto& p = fig.curves[i].vertices[k];
      s += (k ? " " : "") + X(p[0]) + "," + Y(p[1]);
    }
    s += "\"/>\n";
  }
  for (const auto& g : guides) {
    s += std::string(g.closed ? "<polygon" : "<polyline") + " data-label=\"" + detail::xml_escape(g.label) +
         "\" fill=\"none\" stroke=\"" + g.stroke + "\" stroke-width=\"1\" stroke-dasharray=\"4 3\" points=\"";
    for (std::size_t k = 0; k < g.points.size(); ++k) s += (k ? " " : "") + X(g.points[k][0]) + "," + Y(g.points[k][1]);
    s += "\"/>\n";
  }
  double y = 16.0;
  for (std::size_t i = 0; i < layers.size(); ++i, y += 16.0)
    s += "<text x=\"8\" y=\"" + detail::fmt3(y) + "\" font-size=\"12\" fill=\"" + layers[i].stroke + "\">" +
         detail::xml_escape(fig.curves[i].label) + "</text>\n";
  for (const auto& g : guides) {
    s += "<text x=\"8\" y=\"" + detail::fmt3(y) + "\" font-size=\"12\" fill=\"" + g.stroke + "\">" +
         detail::xml_escape(g.label) + "</text>\n";
    y += 16.0;
  }
  s += "</svg>\n";
  fig.svg = s;
  write_text(path, s);
  return fig;
}

/// Single-norm section.
inline SectionFigure render_section_svg(const NormOracle& norm, const SectionPlane& plane, int resolution,
                                        const std::filesystem::path& path)
{
  return render_section_svg({Layer{norm, "#bbbbbb", "#333333"}}, plane, resolution, path);
}

/// Axis-parallel square of half-width r, as a guide.
inline Guide square_guide(std::string label, double r, std::string stroke = "#c0392b")
{
  return {std::move(label), {{r, r}, {-r, r}, {-r, -r}, {r, -r}}, true, std::move(stroke)};
}

} // namespace renorm::report
