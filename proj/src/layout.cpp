#include "tfr/layout.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include "tfr/sha256.hpp"
#include "tfr/textcfg.hpp"

namespace tfr {

namespace {

// Closed-low / open-high membership keeps rasterization deterministic when a
// rectangle edge coincides with a node line.
bool in_rect(double x, double y, const HeatSource& s) {
    const double x0 = s.x_center - 0.5 * s.width;
    const double x1 = s.x_center + 0.5 * s.width;
    const double y0 = s.y_center - 0.5 * s.height;
    const double y1 = s.y_center + 0.5 * s.height;
    return x >= x0 && x < x1 && y >= y0 && y < y1;
}

bool intervals_overlap(double a0, double a1, double b0, double b1) {
    return a0 < b1 && b0 < a1;
}

}  // namespace

std::vector<int> Layout::sink_cols() const {
    std::vector<int> cols;
    const double eps = 1e-9 * domain_size;
    const double half = 0.5 * sink.length;
    for (int k = 0; k < grid_n; ++k) {
        if (std::abs(node_x(k) - sink.center) <= half + eps) cols.push_back(k);
    }
    return cols;
}

GridIndex Layout::nearest_node(double x, double y) const {
    const double hh = h();
    auto snap = [&](double v) {
        int lo = static_cast<int>(std::floor(v / hh));
        lo = std::max(0, std::min(grid_n - 1, lo));
        int hi = std::min(grid_n - 1, lo + 1);
        // ties toward the lower index
        return (std::abs(v - hi * hh) < std::abs(v - lo * hh)) ? hi : lo;
    };
    return GridIndex{snap(y), snap(x)};
}

void Layout::validate() const {
    if (domain_size <= 0.0) throw LayoutError("layout: domain_size must be positive");
    if (conductivity <= 0.0) throw LayoutError("layout: conductivity must be positive");
    if (grid_n < 16) throw LayoutError("layout: grid_n must be at least 16");
    if (sink.length <= 0.0) throw LayoutError("layout: sink.length must be positive");
    const double eps = 1e-12 * domain_size;
    if (sink.center - 0.5 * sink.length < -eps || sink.center + 0.5 * sink.length > domain_size + eps)
        throw LayoutError("layout: sink segment extends outside [0, L]");
    if (sink_cols().size() < 2)
        throw LayoutError("layout: sink covers fewer than 2 grid nodes at this resolution");

    for (const auto& s : sources) {
        std::string tag = "source id " + std::to_string(s.id);
        if (s.width <= 0.0 || s.height <= 0.0) throw LayoutError(tag + ": width and height must be positive");
        if (s.phi_max <= 0.0) throw LayoutError(tag + ": phi_max must be positive");
        if (s.x_center - 0.5 * s.width < -eps || s.x_center + 0.5 * s.width > domain_size + eps)
            throw LayoutError(tag + ": rectangle protrudes outside the domain in x");
        if (s.y_center - 0.5 * s.height < -eps || s.y_center + 0.5 * s.height > domain_size + eps)
            throw LayoutError(tag + ": rectangle protrudes outside the domain in y");
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            const auto& a = sources[i];
            const auto& b = sources[j];
            bool x_ov = intervals_overlap(a.x_center - 0.5 * a.width, a.x_center + 0.5 * a.width,
                                          b.x_center - 0.5 * b.width, b.x_center + 0.5 * b.width);
            bool y_ov = intervals_overlap(a.y_center - 0.5 * a.height, a.y_center + 0.5 * a.height,
                                          b.y_center - 0.5 * b.height, b.y_center + 0.5 * b.height);
            if (x_ov && y_ov)
                throw LayoutError("source id " + std::to_string(a.id) + " overlaps source id " +
                                  std::to_string(b.id));
        }
    }
}

std::string Layout::canonical_text() const {
    ConfigValue root = ConfigValue::table();
    root.set("domain_size", ConfigValue::number(domain_size));
    root.set("conductivity", ConfigValue::number(conductivity));
    root.set("grid_n", ConfigValue::number(grid_n));
    ConfigValue sk = ConfigValue::table();
    sk.set("center", ConfigValue::number(sink.center));
    sk.set("length", ConfigValue::number(sink.length));
    sk.set("temperature", ConfigValue::number(sink.temperature));
    root.set("sink", std::move(sk));
    ConfigValue arr = ConfigValue::array();
    for (const auto& s : sources) {
        ConfigValue t = ConfigValue::table();
        t.set("id", ConfigValue::number(s.id));
        t.set("x", ConfigValue::number(s.x_center));
        t.set("y", ConfigValue::number(s.y_center));
        t.set("w", ConfigValue::number(s.width));
        t.set("h", ConfigValue::number(s.height));
        t.set("phi_max", ConfigValue::number(s.phi_max));
        arr.push_back(std::move(t));
    }
    root.set("sources", std::move(arr));
    return root.serialize();
}

std::string Layout::hash() const { return sha256_hex(canonical_text()); }

Layout parse_layout(const std::string& text) {
    ConfigValue root = parse_config(text);
    Layout layout;
    layout.domain_size = root.get_number_or("domain_size", 0.1, "");
    layout.conductivity = root.get_number_or("conductivity", 1.0, "");
    if (root.has("grid_n")) layout.grid_n = static_cast<int>(root.get("grid_n", "").as_int("grid_n"));
    layout.sink.center = 0.5 * layout.domain_size;
    if (root.has("sink")) {
        const ConfigValue& sk = root.get("sink", "");
        layout.sink.center = sk.get_number_or("center", layout.sink.center, "sink");
        layout.sink.length = sk.get_number_or("length", layout.sink.length, "sink");
        layout.sink.temperature = sk.get_number_or("temperature", layout.sink.temperature, "sink");
    }
    const ConfigValue& sources = root.get("sources", "");
    int auto_id = 1;
    for (const ConfigValue& sv : sources.as_array("sources")) {
        HeatSource s;
        std::string tag = "sources[" + std::to_string(auto_id - 1) + "]";
        s.id = sv.has("id") ? static_cast<int>(sv.get("id", tag).as_int(tag + ".id")) : auto_id;
        s.x_center = sv.get("x", tag).as_number(tag + ".x");
        s.y_center = sv.get("y", tag).as_number(tag + ".y");
        s.width = sv.get("w", tag).as_number(tag + ".w");
        s.height = sv.get("h", tag).as_number(tag + ".h");
        s.phi_max = sv.get_number_or("phi_max", 30000.0, tag);
        layout.sources.push_back(s);
        ++auto_id;
    }
    layout.validate();
    return layout;
}

Layout load_layout_file(const std::string& path) {
    ConfigValue root = parse_config_file(path);
    return parse_layout(root.serialize());
}

Grid rasterize_power(const Layout& layout, const std::vector<double>& powers) {
    if (static_cast<int>(powers.size()) != layout.n_sources())
        throw LayoutError("rasterize_power: expected " + std::to_string(layout.n_sources()) +
                          " power values, got " + std::to_string(powers.size()));
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] < 0.0 || powers[i] > layout.sources[i].phi_max)
            throw LayoutError("rasterize_power: power for source id " +
                              std::to_string(layout.sources[i].id) + " outside [0, phi_max]");
    }
    Grid g(layout.grid_n, 0.0);
    for (std::size_t i = 0; i < layout.sources.size(); ++i) {
        const auto& s = layout.sources[i];
        if (powers[i] == 0.0) continue;
        // Disjointness is a layout invariant, so plain assignment cannot clobber
        // another source's cells.
        for (int j = 0; j < layout.grid_n; ++j) {
            const double y = layout.node_y(j);
            if (y < s.y_center - 0.5 * s.height || y >= s.y_center + 0.5 * s.height) continue;
            for (int k = 0; k < layout.grid_n; ++k) {
                if (in_rect(layout.node_x(k), y, s)) g.at(j, k) = powers[i];
            }
        }
    }
    return g;
}

std::vector<std::uint8_t> component_mask(const Layout& layout) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(layout.grid_n) * layout.grid_n, 0);
    for (const auto& s : layout.sources) {
        for (int j = 0; j < layout.grid_n; ++j) {
            for (int k = 0; k < layout.grid_n; ++k) {
                if (in_rect(layout.node_x(k), layout.node_y(j), s))
                    mask[static_cast<std::size_t>(j) * layout.grid_n + k] = 1;
            }
        }
    }
    return mask;
}

}  // namespace tfr
