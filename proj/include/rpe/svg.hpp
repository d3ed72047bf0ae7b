#pragma once

#include <span>
#include <string>
#include <vector>

#include "rpe/geometry.hpp"
#include "rpe/rspeg.hpp"

namespace rpe {

struct SvgLayers {
  const Solution* solution{nullptr};
  std::span<const Point> web_points;
  std::vector<std::size_t> walk;  // indices into web_points, drawn as a polyline
};

/// Environment with optional pursuer paths (one colour per pursuer) and web
/// points. Output depends only on the inputs.
std::string render_svg(const Environment& env, const SvgLayers& layers = {});

}  // namespace rpe
