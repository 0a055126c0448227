#pragma once

#include <string>
#include <vector>

#include "tfr/field.hpp"

namespace tfr {

struct LayoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rectangular heat source, axis-aligned, SI units. The rectangle must lie
/// fully inside the domain and may not overlap any other source.
struct HeatSource {
    int id = 0;
    double x_center = 0.0;  // m
    double y_center = 0.0;  // m
    double width = 0.0;     // extent along x, m
    double height = 0.0;    // extent along y, m
    double phi_max = 30000.0;  // upper bound of the intensity range, W/m^2
};

/// Isothermal sink segment on the bottom boundary.
struct Sink {
    double center = 0.05;       // x position, m
    double length = 0.01;       // m
    double temperature = 298.0; // K
};

/// Immutable problem definition: square domain, conductivity, heat sources,
/// sink segment, grid resolution. Nodes are node-centered: node (j,k) sits at
/// (k*h, j*h) with h = L/(N-1), row 0 on the bottom edge.
struct Layout {
    double domain_size = 0.1;   // L, m
    double conductivity = 1.0;  // W/(m K)
    int grid_n = 200;           // nodes per side
    Sink sink;
    std::vector<HeatSource> sources;

    double h() const { return domain_size / (grid_n - 1); }
    double node_x(int col) const { return col * h(); }
    double node_y(int row) const { return row * h(); }
    int n_sources() const { return static_cast<int>(sources.size()); }

    /// Bottom-row columns covered by the sink: |x - center| <= length/2
    /// (inclusive, with a relative epsilon guard against rounding).
    std::vector<int> sink_cols() const;

    /// Nearest grid node to a physical point; ties break toward lower index.
    GridIndex nearest_node(double x, double y) const;

    /// Checks every invariant; throws LayoutError naming the offender.
    void validate() const;

    /// Canonical re-serialization of the semantic content (defaults filled).
    std::string canonical_text() const;

    /// SHA-256 hex of canonical_text(); binds derived artifacts to a layout.
    std::string hash() const;
};

/// Parse and validate a layout from structured config text.
Layout parse_layout(const std::string& text);
Layout load_layout_file(const std::string& path);

/// Rasterize per-source intensities onto the grid. Node (j,k) receives phi_i
/// iff its coordinate lies inside source i (closed on the low edge, open on
/// the high edge); all other nodes are 0.
Grid rasterize_power(const Layout& layout, const std::vector<double>& powers);

/// True on nodes covered by any heat source (same membership rule as
/// rasterize_power). Used for the component-constrained error metric.
std::vector<std::uint8_t> component_mask(const Layout& layout);

}  // namespace tfr
