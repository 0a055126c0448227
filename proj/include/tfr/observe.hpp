#pragma once

#include <string>
#include <vector>

#include "tfr/field.hpp"
#include "tfr/layout.hpp"

namespace tfr {

struct ObserveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SelectStrategy { uniform, random, physics };

std::string to_string(SelectStrategy s);
SelectStrategy strategy_from_string(const std::string& name);

/// Fixed sensor locations. The point order is part of the contract: it defines
/// the observation-vector layout every downstream consumer sees.
struct ObservationPlan {
    SelectStrategy strategy = SelectStrategy::uniform;
    std::uint64_t seed = 0;
    std::string layout_hash;
    std::vector<GridIndex> points;

    int m() const { return static_cast<int>(points.size()); }

    /// In-range and duplicate-free against a grid resolution.
    void validate(int grid_n) const;

    std::string serialize() const;
};

ObservationPlan parse_plan(const std::string& text);
ObservationPlan load_plan_file(const std::string& path);
void save_plan_file(const ObservationPlan& plan, const std::string& path);

/// Sensor placement.
///   uniform: m must be a perfect square r^2; block centers of an r x r
///            partition, ordered by row then column.
///   random:  m distinct interior nodes (outermost ring excluded), drawn
///            without replacement from the seeded stream.
///   physics: one sensor at each component center first (m >= n required),
///            then boundary nodes: the two bottom-row nodes immediately
///            outside the sink ends, the top/left/right edge midpoints, the
///            two bottom-edge quarter points, then successive binary
///            subdivision of the four edges (top, left, right, bottom),
///            skipping nodes already taken.
ObservationPlan select_points(SelectStrategy strategy, int m, const Layout& layout,
                              std::uint64_t seed = 0);

/// Per-sample readings in plan order.
struct ObservationSet {
    std::vector<double> values;  // kelvin
    int m() const { return static_cast<int>(values.size()); }
};

/// values_i = field[plan.points_i]. When `field_layout_hash` is non-empty it
/// must equal the plan's hash.
ObservationSet extract_observations(const Grid& field, const ObservationPlan& plan,
                                    const std::string& field_layout_hash = {});

/// Affine normalization shared by model inputs and targets:
/// normalized = (T - t_ref) / scale. The zero fill value of sparse images then
/// coincides with the ambient baseline.
struct FieldNorm {
    double t_ref = 298.0;  // K
    double scale = 50.0;   // K
    double normalize(double kelvin) const { return (kelvin - t_ref) / scale; }
    double denormalize(double v) const { return v * scale + t_ref; }
};

/// Full-grid image carrying normalized readings at plan points, 0 elsewhere.
Grid to_sparse_image(const ObservationSet& obs, const ObservationPlan& plan, int grid_n,
                     const FieldNorm& norm);

}  // namespace tfr
