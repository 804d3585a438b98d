#include "barter/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "barter/solvers.hpp"

namespace barter {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Data coordinates to SVG pixels; SVG y grows downward.
struct Viewport {
  double x_min, x_max, y_min, y_max;
  double left, top, width, height;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + (y_max - y) / (y_max - y_min) * height; }
};

Viewport fit(const PointCloud& cloud, const PlotOptions& opts) {
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  for (const auto& cp : cloud.points) {
    const double x = cp.point.u_x.to_double();
    const double y = cp.point.u_y.to_double();
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (x_max - x_min <= 0) x_max = x_min + 1;
  if (y_max - y_min <= 0) y_max = y_min + 1;
  const double pad_x = (x_max - x_min) * 0.05;
  const double pad_y = (y_max - y_min) * 0.05;
  const double margin = 50;
  return {x_min - pad_x,          x_max + pad_x,          y_min - pad_y, y_max + pad_y, margin, margin,
          opts.width - 2 * margin, opts.height - 2 * margin};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string label_of(const ChosenPoint& c) {
  if (c.exact) return "(" + c.exact->u_x.decimal(2) + ", " + c.exact->u_y.decimal(2) + ")";
  return "(" + num(c.u_x) + ", " + num(c.u_y) + ")";
}

void marker(std::ostringstream& out, const Viewport& vp, const SolutionReport& report, const std::string& cls,
            const std::string& name) {
  if (report.no_trade) return;
  const ChosenPoint& c = report.headline();
  const double x = vp.px(c.u_x);
  const double y = vp.py(c.u_y);
  out << "  <g class=\"marker " << cls << "\">\n"
      << "    <rect x=\"" << num(x - 5) << "\" y=\"" << num(y - 5) << "\" width=\"10\" height=\"10\"/>\n"
      << "    <text x=\"" << num(x + 8) << "\" y=\"" << num(y - 8) << "\">" << escape(name + " " + label_of(c))
      << "</text>\n"
      << "  </g>\n";
}

}  // namespace

std::string render_svg(const PointCloud& cloud, const Periphery& per, const PlotOptions& opts,
                       std::optional<NoTradeKind> no_trade_kind) {
  const Viewport vp = fit(cloud, opts);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n"
      << "  <style>\n"
      << "    .cloud { fill: #9aa5b1; }\n"
      << "    .periphery { fill: #1f77b4; stroke: #0b3d66; stroke-width: 1; }\n"
      << "    .anchor { fill: none; stroke: #1f77b4; stroke-width: 1.5; }\n"
      << "    .axis { stroke: #333333; stroke-width: 1; }\n"
      << "    .hull { fill: none; stroke: #d62728; stroke-width: 1.5; }\n"
      << "    .marker rect { fill: none; stroke-width: 2; }\n"
      << "    .nash rect { stroke: #2ca02c; }\n"
      << "    .median rect { stroke: #ff7f0e; }\n"
      << "    .hull-nash rect { stroke: #d62728; }\n"
      << "    text { font-family: sans-serif; font-size: 11px; }\n"
      << "  </style>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" fill=\"#ffffff\"/>\n";

  const double ox = vp.px(0);
  const double oy = vp.py(0);
  out << "  <line class=\"axis\" x1=\"" << num(vp.left) << "\" y1=\"" << num(oy) << "\" x2=\""
      << num(vp.left + vp.width) << "\" y2=\"" << num(oy) << "\"/>\n"
      << "  <line class=\"axis\" x1=\"" << num(ox) << "\" y1=\"" << num(vp.top) << "\" x2=\"" << num(ox)
      << "\" y2=\"" << num(vp.top + vp.height) << "\"/>\n"
      << "  <text x=\"" << num(vp.left + vp.width - 20) << "\" y=\"" << num(oy - 6) << "\">U_x</text>\n"
      << "  <text x=\"" << num(ox + 6) << "\" y=\"" << num(vp.top + 10) << "\">U_y</text>\n";

  auto is_anchor = [&](const OutcomePoint& pt) {
    return (per.x_anchor && per.x_anchor->point == pt) || (per.y_anchor && per.y_anchor->point == pt);
  };
  for (const auto& cp : cloud.points) {
    const bool on_periphery = per.contains(cp.point);
    const char* cls = on_periphery ? "periphery" : is_anchor(cp.point) ? "anchor" : "cloud";
    const char* radius = on_periphery || is_anchor(cp.point) ? "4" : "2";
    out << "  <circle class=\"" << cls << "\" cx=\"" << num(vp.px(cp.point.u_x.to_double())) << "\" cy=\""
        << num(vp.py(cp.point.u_y.to_double())) << "\" r=\"" << radius << "\"/>\n";
  }

  if (opts.hull && !per.empty()) {
    out << "  <polyline class=\"hull\" points=\"";
    const LotteryHull hull = lottery_hull(per);
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
      const auto& pt = hull.vertices[i].point;
      out << (i ? " " : "") << num(vp.px(pt.u_x.to_double())) << "," << num(vp.py(pt.u_y.to_double()));
    }
    out << "\"/>\n";
  }

  if (opts.annotate && !per.empty()) {
    marker(out, vp, nash_solution(per), "nash", "Nash");
    marker(out, vp, median_solution(per), "median", "median");
    if (opts.hull) marker(out, vp, solve(Algorithm::HullNash, per), "hull-nash", "hull Nash");
  }

  if (per.empty()) {
    std::string caption = "No trade: no exchange benefits both players";
    if (no_trade_kind && *no_trade_kind != NoTradeKind::None) caption += " (" + std::string(to_string(*no_trade_kind)) + ")";
    out << "  <text class=\"caption\" x=\"" << num(vp.left) << "\" y=\"" << num(vp.top - 15) << "\">"
        << escape(caption) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace barter
