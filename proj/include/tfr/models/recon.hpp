#pragma once

#include <string>
#include <vector>

#include "tfr/field.hpp"
#include "tfr/layout.hpp"
#include "tfr/models/mlp.hpp"
#include "tfr/models/unet.hpp"
#include "tfr/observe.hpp"

namespace tfr {

/// Cells whose reconstruction the patch regressor owns. The default geometry
/// is the run of bottom-row nodes centered on the sink, clipped to the grid;
/// the width p equals the regressor's output layer.
struct PatchSpec {
    std::vector<GridIndex> cells;

    int p() const { return static_cast<int>(cells.size()); }
    void validate(int grid_n) const;
    std::string serialize() const;

    static PatchSpec bottom_row(const Layout& layout, int p = 52);
    static PatchSpec parse(const std::string& text);
};

/// Overwrite spec cells of the global field with patch values; all other
/// cells pass through bit-identical.
Grid stitch(const Grid& unet_field, const std::vector<double>& patch, const PatchSpec& spec);

/// Trained reconstructor state: global net, patch regressor, normalization
/// constants and the plan both were trained under.
struct ReconModel {
    AdaptiveUNet unet{nullptr};
    PatchMLP mlp{nullptr};
    UNetConfig unet_cfg;
    MLPConfig mlp_cfg;
    FieldNorm norm;
    ObservationPlan plan;
    PatchSpec patch;
    int grid_n = 0;

    /// s * net(normalized sparse image) + T_ref, shape preserved.
    Grid unet_forward(const Grid& sparse_normalized) const;

    /// Denormalized patch prediction in spec-cell order.
    std::vector<double> mlp_forward(const ObservationSet& obs) const;

    /// stitch(unet(sparse(obs)), mlp(obs)); pure function of (model, obs).
    Grid reconstruct(const ObservationSet& obs) const;
};

}  // namespace tfr
