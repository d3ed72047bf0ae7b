#include "rpe/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace rpe {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

class Canvas {
 public:
  explicit Canvas(const Box& b) : box_(b) {
    scale_ = 800.0 / std::max(b.width(), b.height());
  }

  double width() const { return box_.width() * scale_ + 2 * kMargin; }
  double height() const { return box_.height() * scale_ + 2 * kMargin; }
  std::string x(double v) const { return num((v - box_.min_x) * scale_ + kMargin); }
  std::string y(double v) const { return num((box_.max_y - v) * scale_ + kMargin); }

  std::string ring_path(const Ring& ring) const {
    std::string d;
    for (std::size_t i = 0; i < ring.size(); ++i) d += (i ? " L " : "M ") + x(ring[i].x) + " " + y(ring[i].y);
    return d + " Z";
  }

 private:
  static constexpr double kMargin = 20.0;
  Box box_;
  double scale_{1.0};
};

}  // namespace

std::string render_svg(const Environment& env, const SvgLayers& layers) {
  const Canvas c(env.bounds());
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(c.width()) + "\" height=\"" + num(c.height()) +
         "\" viewBox=\"0 0 " + num(c.width()) + " " + num(c.height()) + "\">\n";
  std::string d = c.ring_path(env.outer());
  for (const Ring& h : env.holes()) d += " " + c.ring_path(h);
  out += "  <path d=\"" + d + "\" fill=\"#f4f4f4\" fill-rule=\"evenodd\" stroke=\"#222\" stroke-width=\"2\"/>\n";

  if (!layers.walk.empty()) {
    std::string pts;
    for (std::size_t i : layers.walk) {
      const Point p = layers.web_points[i];
      pts += (pts.empty() ? "" : " ") + c.x(p.x) + "," + c.y(p.y);
    }
    out += "  <polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (const Point& p : layers.web_points) {
    out += "  <circle cx=\"" + c.x(p.x) + "\" cy=\"" + c.y(p.y) + "\" r=\"3\" fill=\"#555\"/>\n";
  }

  if (layers.solution && !layers.solution->waypoints.empty()) {
    const auto& wps = layers.solution->waypoints;
    for (std::size_t i = 0; i < wps.front().size(); ++i) {
      const char* colour = kPalette[i % std::size(kPalette)];
      std::string pts;
      for (const Jpc& w : wps) {
        pts += (pts.empty() ? "" : " ") + c.x(w.positions[i].x) + "," + c.y(w.positions[i].y);
      }
      out += "  <polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colour +
             "\" stroke-width=\"2\" stroke-opacity=\"0.8\"/>\n";
      const Point start = wps.front().positions[i];
      const Point end = wps.back().positions[i];
      out += "  <circle cx=\"" + c.x(start.x) + "\" cy=\"" + c.y(start.y) + "\" r=\"5\" fill=\"" + colour + "\"/>\n";
      out += "  <rect x=\"" + num(std::stod(c.x(end.x)) - 4) + "\" y=\"" + num(std::stod(c.y(end.y)) - 4) +
             "\" width=\"8\" height=\"8\" fill=\"" + colour + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace rpe
