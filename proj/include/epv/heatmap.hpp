#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epv/pitch.hpp"

namespace epv {

struct HeatZone {
    int id = 0;
    std::vector<Rect> bounds;
    std::optional<double> value;  // no value: drawn grey
};

struct HeatPanel {
    std::string title;
    std::vector<HeatZone> zones;
};

enum class ColorScale {
    sequential,  // pale yellow at the minimum to dark red at the maximum
    diverging,   // blue below zero, white at zero, red above; symmetric range
};

struct HeatmapStyle {
    ColorScale scale = ColorScale::sequential;
    double px_per_m = 5.0;
    int panels_per_row = 4;
    /// Zone ids and values are printed when a panel has at most this many zones.
    int label_limit = 30;
};

/// SVG with one pitch per panel, attack pointing up the page. The scale is
/// shared by every panel. Output depends only on the arguments.
std::string render_heatmap(std::span<const HeatPanel> panels, const HeatmapStyle& style = {});

/// RGB hex colour ("#rrggbb") for t in [0, 1] on the given scale.
std::string scale_color(ColorScale scale, double t);

}  // namespace epv
