#pragma once

#include <string>
#include <vector>

#include "tfr/field.hpp"

namespace tfr {

struct ImageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Renders a field as a PNG heat map (viridis ramp), y axis pointing up.
/// Each node becomes a `scale` x `scale` pixel block.
void write_field_png(const std::string& path, const Grid& field, double vmin, double vmax,
                     int scale = 4);

/// One named curve of a line plot.
struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Simple SVG line plot with axes, ticks and a legend.
void write_line_svg(const std::string& path, const std::vector<Series>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title);

/// Grouped SVG bar chart: one group per label, one bar per series.
void write_bars_svg(const std::string& path, const std::vector<std::string>& group_labels,
                    const std::vector<std::string>& series_names,
                    const std::vector<std::vector<double>>& values, const std::string& y_label,
                    const std::string& title);

}  // namespace tfr
