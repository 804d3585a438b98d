#pragma once

#include <optional>
#include <string>

#include "barter/enumeration.hpp"
#include "barter/notrade.hpp"

namespace barter {

struct PlotOptions {
  bool hull = false;      // draw the lottery hull polyline
  bool annotate = false;  // label the Nash, median and hull-Nash choices
  int width = 640;
  int height = 480;
};

/// Standalone SVG scatter of the cloud. Every distinct point is one
/// <circle> whose class is "cloud", "periphery" or "anchor". Output bytes
/// depend only on the inputs.
std::string render_svg(const PointCloud& cloud, const Periphery& per, const PlotOptions& opts,
                       std::optional<NoTradeKind> no_trade_kind = std::nullopt);

}  // namespace barter
