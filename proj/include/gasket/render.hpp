#pragma once

#include <string>
#include <unordered_map>

#include "gasket/graph.hpp"
#include "gasket/rotor.hpp"

namespace gasket {

enum class OverlayKind { None, Rotors, Heights, Odometer };

/// What to draw on top of the graph skeleton. Rotor overlays may be partial
/// (arrows only where a rotor is given); height and odometer overlays must
/// cover every vertex.
struct Overlay {
    OverlayKind kind = OverlayKind::None;
    RotorConfig rotors;
    std::unordered_map<LatticeCoord, std::int64_t, CoordHash> heights;
    std::unordered_map<LatticeCoord, double, CoordHash> odometer;
};

struct RenderOptions {
    double scale = 48.0;
    double stroke_width = 1.5;
    double vertex_radius = 4.0;
};

/// Deterministic SVG of the graph at its Euclidean embedding: same inputs,
/// same bytes. Heights use the 4-colour palette for 0..3 (clamped above);
/// odometer values map to log-scaled opacity; rotors draw as arrows toward
/// the pointed neighbour.
///
/// Rotor indices are resolved against `rotor_view` when given (an embedding
/// of the drawn graph), so boundary rotors that point outside the drawn
/// level render exactly as the ambient walk would move.
std::string render_svg(const PrefractalGraph& graph, const Overlay& overlay,
                       const RenderOptions& options = {},
                       const PrefractalGraph* rotor_view = nullptr);

}  // namespace gasket
