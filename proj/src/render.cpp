#include "gasket/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gasket/io.hpp"

namespace gasket {

namespace {

constexpr std::array<const char*, 4> kHeightPalette = {
    "#e8e6e1",  // 0
    "#7fb069",  // 1
    "#e6aa68",  // 2
    "#ca3c25",  // 3
};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string num(double v) { return format_double(round2(v)); }

}  // namespace

std::string render_svg(const PrefractalGraph& graph, const Overlay& overlay,
                       const RenderOptions& options,
                       const PrefractalGraph* rotor_view) {
    const PrefractalGraph& resolver = rotor_view != nullptr ? *rotor_view : graph;
    // validate overlays before emitting anything
    if (overlay.kind == OverlayKind::Rotors) {
        for (const auto& [v, index] : overlay.rotors) {
            if (!graph.contains(v)) {
                throw config_error("rotor overlay vertex not in the drawn graph");
            }
            const std::uint32_t i = resolver.index_of(v);
            if (index >= resolver.neighbors(i).size()) {
                throw config_error("rotor overlay index out of range");
            }
        }
    } else if (overlay.kind == OverlayKind::Heights) {
        for (const LatticeCoord v : graph.vertices()) {
            if (overlay.heights.find(v) == overlay.heights.end()) {
                throw config_error("height overlay must cover every vertex");
            }
        }
    } else if (overlay.kind == OverlayKind::Odometer) {
        for (const LatticeCoord v : graph.vertices()) {
            if (overlay.odometer.find(v) == overlay.odometer.end()) {
                throw config_error("odometer overlay must cover every vertex");
            }
        }
    }

    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool first = true;
    for (const LatticeCoord v : graph.vertices()) {
        const auto [x, y] = to_euclidean(v);
        if (first) {
            min_x = max_x = x;
            min_y = max_y = y;
            first = false;
        } else {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    }
    const double margin = 2.0 * options.scale / 3.0 + options.vertex_radius;
    const double width = (max_x - min_x) * options.scale + 2.0 * margin;
    const double height = (max_y - min_y) * options.scale + 2.0 * margin;
    auto sx = [&](double x) { return (x - min_x) * options.scale + margin; };
    auto sy = [&](double y) { return (max_y - y) * options.scale + margin; };
    auto point = [&](LatticeCoord v) {
        const auto [x, y] = to_euclidean(v);
        return std::pair{sx(x), sy(y)};
    };

    double max_odometer = 0.0;
    if (overlay.kind == OverlayKind::Odometer) {
        for (const auto& [v, u] : overlay.odometer) max_odometer = std::max(max_odometer, u);
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
        << num(width) << ' ' << num(height) << "\">\n";
    svg << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
           "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">"
           "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c2181b\"/></marker></defs>\n";

    svg << "<g stroke=\"#555555\" stroke-width=\"" << num(options.stroke_width) << "\">\n";
    for (std::uint32_t i = 0; i < graph.vertex_count(); ++i) {
        for (const std::uint32_t k : graph.neighbors(i)) {
            if (i >= k) continue;
            const auto [x1, y1] = point(graph.coord_of(i));
            const auto [x2, y2] = point(graph.coord_of(k));
            svg << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
                << "\" y2=\"" << num(y2) << "\"/>\n";
        }
    }
    svg << "</g>\n";

    svg << "<g stroke=\"#333333\" stroke-width=\"1\">\n";
    for (const LatticeCoord v : graph.vertices()) {
        const auto [x, y] = point(v);
        std::string fill = "#ffffff";
        std::string extra;
        if (overlay.kind == OverlayKind::Heights) {
            const std::int64_t h =
                std::clamp<std::int64_t>(overlay.heights.at(v), 0, 3);
            fill = kHeightPalette[static_cast<std::size_t>(h)];
        } else if (overlay.kind == OverlayKind::Odometer) {
            fill = "#c2181b";
            const double u = overlay.odometer.at(v);
            const double intensity =
                max_odometer > 0.0 ? std::log1p(u) / std::log1p(max_odometer) : 0.0;
            extra = " fill-opacity=\"" + num(intensity) + "\"";
        }
        svg << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\""
            << num(options.vertex_radius) << "\" fill=\"" << fill << "\"" << extra << "/>\n";
    }
    svg << "</g>\n";

    if (overlay.kind == OverlayKind::Rotors) {
        // iterate vertices in canonical order so the byte stream is stable
        svg << "<g class=\"rotors\" stroke=\"#c2181b\" stroke-width=\""
            << num(options.stroke_width * 1.2) << "\" marker-end=\"url(#arrow)\">\n";
        for (const LatticeCoord v : graph.vertices()) {
            const auto it = overlay.rotors.find(v);
            if (it == overlay.rotors.end()) continue;
            const std::uint32_t i = resolver.index_of(v);
            const LatticeCoord target =
                resolver.coord_of(resolver.neighbors(i)[it->second]);
            const auto [x1, y1] = point(v);
            const auto [x2, y2] = point(target);
            const double frac = 0.55;
            svg << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
                << num(x1 + frac * (x2 - x1)) << "\" y2=\"" << num(y1 + frac * (y2 - y1))
                << "\"/>\n";
        }
        svg << "</g>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gasket
