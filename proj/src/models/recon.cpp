#include "tfr/models/recon.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "tfr/textcfg.hpp"

namespace tfr {

void PatchSpec::validate(int grid_n) const {
    std::unordered_set<std::int64_t> seen;
    for (const auto& c : cells) {
        if (c.row < 0 || c.row >= grid_n || c.col < 0 || c.col >= grid_n)
            throw std::invalid_argument("patch cell outside the grid");
        if (!seen.insert(static_cast<std::int64_t>(c.row) * grid_n + c.col).second)
            throw std::invalid_argument("patch contains duplicate cells");
    }
}

std::string PatchSpec::serialize() const {
    ConfigValue root = ConfigValue::table();
    ConfigValue arr = ConfigValue::array();
    for (const auto& c : cells) {
        ConfigValue t = ConfigValue::table();
        t.set("row", ConfigValue::number(c.row));
        t.set("col", ConfigValue::number(c.col));
        arr.push_back(std::move(t));
    }
    root.set("cells", std::move(arr));
    return root.serialize();
}

PatchSpec PatchSpec::parse(const std::string& text) {
    ConfigValue root = parse_config(text);
    PatchSpec spec;
    int idx = 0;
    for (const ConfigValue& cv : root.get("cells", "").as_array("cells")) {
        std::string tag = "cells[" + std::to_string(idx++) + "]";
        spec.cells.push_back(GridIndex{static_cast<int>(cv.get("row", tag).as_int(tag + ".row")),
                                       static_cast<int>(cv.get("col", tag).as_int(tag + ".col"))});
    }
    return spec;
}

PatchSpec PatchSpec::bottom_row(const Layout& layout, int p) {
    if (p < 1) throw std::invalid_argument("patch width must be positive");
    if (p > layout.grid_n) p = layout.grid_n;
    const GridIndex center = layout.nearest_node(layout.sink.center, 0.0);
    int start = center.col - p / 2;
    start = std::clamp(start, 0, layout.grid_n - p);
    PatchSpec spec;
    spec.cells.reserve(p);
    for (int k = start; k < start + p; ++k) spec.cells.push_back(GridIndex{0, k});
    return spec;
}

Grid stitch(const Grid& unet_field, const std::vector<double>& patch, const PatchSpec& spec) {
    if (patch.size() != spec.cells.size())
        throw std::invalid_argument("stitch: patch length does not match the spec");
    spec.validate(unet_field.n);
    Grid out = unet_field;
    for (std::size_t i = 0; i < spec.cells.size(); ++i)
        out.at(spec.cells[i].row, spec.cells[i].col) = patch[i];
    return out;
}

Grid ReconModel::unet_forward(const Grid& sparse_normalized) const {
    torch::NoGradGuard no_grad;
    unet->eval();
    const int n = sparse_normalized.n;
    auto x = torch::empty({1, 1, n, n}, torch::kFloat32);
    float* dst = x.data_ptr<float>();
    for (std::size_t i = 0; i < sparse_normalized.a.size(); ++i)
        dst[i] = static_cast<float>(sparse_normalized.a[i]);
    auto y = unet->forward(x).squeeze(0).squeeze(0).contiguous();
    Grid out(n, 0.0);
    const float* src = y.data_ptr<float>();
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = norm.denormalize(src[i]);
    return out;
}

std::vector<double> ReconModel::mlp_forward(const ObservationSet& obs) const {
    if (obs.m() != mlp_cfg.input)
        throw std::invalid_argument("mlp_forward: observation length does not match the model");
    torch::NoGradGuard no_grad;
    mlp->eval();
    auto x = torch::empty({1, obs.m()}, torch::kFloat32);
    float* dst = x.data_ptr<float>();
    for (int i = 0; i < obs.m(); ++i) dst[i] = static_cast<float>(norm.normalize(obs.values[i]));
    auto y = mlp->forward(x).squeeze(0).contiguous();
    std::vector<double> out(static_cast<std::size_t>(y.size(0)));
    const float* src = y.data_ptr<float>();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = norm.denormalize(src[i]);
    return out;
}

Grid ReconModel::reconstruct(const ObservationSet& obs) const {
    if (obs.m() != plan.m())
        throw std::invalid_argument("reconstruct: observation length does not match the plan");
    const Grid sparse = to_sparse_image(obs, plan, grid_n, norm);
    return stitch(unet_forward(sparse), mlp_forward(obs), patch);
}

}  // namespace tfr
