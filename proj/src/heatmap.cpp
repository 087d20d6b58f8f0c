#include "epv/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "epv/errors.hpp"

namespace epv {

namespace {

constexpr double kWidth = 68.0;
constexpr double kYTop = 100.0;
constexpr double kYBottom = -10.0;
constexpr double kMargin = 20.0;
constexpr double kTitle = 22.0;
constexpr double kLegend = 46.0;

struct Rgb {
    double r, g, b;
};

constexpr std::array<Rgb, 3> kSequential{{{255, 255, 204}, {253, 141, 60}, {128, 0, 38}}};
constexpr std::array<Rgb, 3> kDiverging{{{33, 102, 172}, {247, 247, 247}, {178, 24, 43}}};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
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

}  // namespace

std::string scale_color(ColorScale scale, double t) {
    const auto& stops = scale == ColorScale::sequential ? kSequential : kDiverging;
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * 2.0;
    const auto i = static_cast<std::size_t>(std::min(pos, 1.0));
    const double f = pos - static_cast<double>(i);
    const Rgb& a = stops[i];
    const Rgb& b = stops[i + 1];
    auto channel = [f](double x, double y) { return static_cast<int>(std::lround(x + (y - x) * f)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(a.r, b.r), channel(a.g, b.g), channel(a.b, b.b));
    return buf;
}

std::string render_heatmap(std::span<const HeatPanel> panels, const HeatmapStyle& style) {
    if (panels.empty()) throw ContractViolation("heatmap needs at least one panel");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : panels) {
        for (const auto& z : p.zones) {
            if (z.bounds.empty()) throw MissingGeometry("zone " + std::to_string(z.id) + " has no bounds");
            if (z.value) {
                lo = std::min(lo, *z.value);
                hi = std::max(hi, *z.value);
            }
        }
    }
    const bool any = lo <= hi;
    if (style.scale == ColorScale::diverging && any) {
        const double m = std::max(std::abs(lo), std::abs(hi));
        lo = -m;
        hi = m;
    }
    auto position = [&](double v) {
        if (!any || hi == lo) return style.scale == ColorScale::diverging ? 0.5 : 0.0;
        return (v - lo) / (hi - lo);
    };

    const double s = style.px_per_m;
    const double pitch_w = kWidth * s;
    const double pitch_h = (kYTop - kYBottom) * s;
    const double cell_w = pitch_w + 2 * kMargin;
    const double cell_h = pitch_h + kTitle + kMargin;
    const int per_row = std::max(1, std::min(style.panels_per_row, static_cast<int>(panels.size())));
    const int n_rows = (static_cast<int>(panels.size()) + per_row - 1) / per_row;
    const double width = per_row * cell_w;
    const double height = n_rows * cell_h + kLegend + kMargin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\" font-family=\"sans-serif\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" fill=\"#ffffff\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const double ox = static_cast<double>(static_cast<int>(p) % per_row) * cell_w + kMargin;
        const double oy = static_cast<double>(static_cast<int>(p) / per_row) * cell_h + kTitle;
        auto px = [&](double x) { return ox + x * s; };
        auto py = [&](double y) { return oy + (kYTop - y) * s; };

        svg << "<g id=\"panel-" << p + 1 << "\">\n";
        svg << "<text x=\"" << fmt(ox) << "\" y=\"" << fmt(oy - 6) << "\" font-size=\"13\">" << escape(panel.title)
            << "</text>\n";
        for (const auto& z : panel.zones) {
            const std::string fill = z.value ? scale_color(style.scale, position(*z.value)) : "#bdbdbd";
            for (const auto& r : z.bounds) {
                svg << "<rect x=\"" << fmt(px(r.x0)) << "\" y=\"" << fmt(py(r.y1)) << "\" width=\""
                    << fmt((r.x1 - r.x0) * s) << "\" height=\"" << fmt((r.y1 - r.y0) * s) << "\" fill=\"" << fill
                    << "\" stroke=\"#ffffff\" stroke-width=\"0.5\"><title>zone " << z.id << ": "
                    << (z.value ? fmt_value(*z.value) : "no data") << "</title></rect>\n";
            }
        }
        // try lines, 20m lines and halfway
        for (double y : {0.0, 100.0, 20.0, 80.0, 50.0}) {
            const bool try_line = y == 0.0 || y == 100.0;
            svg << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(px(kWidth))
                << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"#252525\" stroke-width=\"" << (try_line ? "2" : "1")
                << '"' << (y == 20.0 || y == 80.0 ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        }
        svg << "<rect x=\"" << fmt(px(0)) << "\" y=\"" << fmt(py(kYTop)) << "\" width=\"" << fmt(pitch_w)
            << "\" height=\"" << fmt(pitch_h) << "\" fill=\"none\" stroke=\"#252525\" stroke-width=\"1\"/>\n";

        if (static_cast<int>(panel.zones.size()) <= style.label_limit) {
            for (const auto& z : panel.zones) {
                const auto biggest = std::max_element(z.bounds.begin(), z.bounds.end(),
                                                      [](const Rect& a, const Rect& b) { return a.area() < b.area(); });
                const double cx = px((biggest->x0 + biggest->x1) / 2);
                const double cy = py((biggest->y0 + biggest->y1) / 2);
                svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy) << "\" font-size=\"10\" text-anchor=\"middle\">"
                    << z.id << "</text>\n";
                if (z.value) {
                    svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy + 11)
                        << "\" font-size=\"9\" text-anchor=\"middle\">" << fmt_value(*z.value) << "</text>\n";
                }
            }
        }
        svg << "</g>\n";
    }

    // colour bar
    const double ly = n_rows * cell_h + 8;
    const double lw = std::min(width - 2 * kMargin, 300.0);
    constexpr int kSteps = 20;
    for (int i = 0; i < kSteps; ++i) {
        const double t = (i + 0.5) / kSteps;
        svg << "<rect x=\"" << fmt(kMargin + lw * i / kSteps) << "\" y=\"" << fmt(ly) << "\" width=\""
            << fmt(lw / kSteps + 0.5) << "\" height=\"12\" fill=\"" << scale_color(style.scale, t) << "\"/>\n";
    }
    svg << "<text x=\"" << fmt(kMargin) << "\" y=\"" << fmt(ly + 26) << "\" font-size=\"11\">"
        << (any ? fmt_value(lo) : "no data") << "</text>\n";
    svg << "<text x=\"" << fmt(kMargin + lw) << "\" y=\"" << fmt(ly + 26)
        << "\" font-size=\"11\" text-anchor=\"end\">" << (any ? fmt_value(hi) : "") << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace epv
