#include "tfr/models/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "TFRC container assumes a little-endian host");

namespace tfr {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'R', 'C'};
constexpr std::uint32_t kVersion = 1;

using json = nlohmann::json;

json unet_cfg_json(const UNetConfig& c) {
    return {{"in_channels", c.in_channels}, {"out_channels", c.out_channels},
            {"base_width", c.base_width},   {"depth", c.depth},
            {"norm_groups", c.norm_groups}};
}

UNetConfig unet_cfg_from(const json& j) {
    UNetConfig c;
    c.in_channels = j.at("in_channels");
    c.out_channels = j.at("out_channels");
    c.base_width = j.at("base_width");
    c.depth = j.at("depth");
    c.norm_groups = j.at("norm_groups");
    return c;
}

json mlp_cfg_json(const MLPConfig& c) {
    return {{"input", c.input}, {"hidden", c.hidden}, {"output", c.output}};
}

MLPConfig mlp_cfg_from(const json& j) {
    MLPConfig c;
    c.input = j.at("input");
    c.hidden = j.at("hidden").get<std::vector<int>>();
    c.output = j.at("output");
    return c;
}

json nn_cfg_json(const NNBaselineConfig& c) {
    return {{"input", c.input}, {"hidden", c.hidden}, {"coarse_n", c.coarse_n}, {"out_n", c.out_n}};
}

NNBaselineConfig nn_cfg_from(const json& j) {
    NNBaselineConfig c;
    c.input = j.at("input");
    c.hidden = j.at("hidden");
    c.coarse_n = j.at("coarse_n");
    c.out_n = j.at("out_n");
    return c;
}

json train_cfg_json(const TrainConfig& c) {
    return {{"epochs", c.epochs},         {"lr", c.lr},
            {"lr_final", c.lr_final},     {"batch_size", c.batch_size},
            {"lambda_reg", c.lambda_reg}, {"seed", c.seed}};
}

TrainConfig train_cfg_from(const json& j) {
    TrainConfig c;
    c.epochs = j.at("epochs");
    c.lr = j.at("lr");
    c.lr_final = j.at("lr_final");
    c.batch_size = j.at("batch_size");
    c.lambda_reg = j.at("lambda_reg");
    c.seed = j.at("seed");
    return c;
}

/// Parameters and buffers in name order; names make the blob layout stable.
std::vector<std::pair<std::string, torch::Tensor>> named_state(const torch::nn::Module& net) {
    std::vector<std::pair<std::string, torch::Tensor>> state;
    for (const auto& p : net.named_parameters(/*recurse=*/true))
        state.emplace_back(p.key(), p.value());
    for (const auto& b : net.named_buffers(/*recurse=*/true))
        state.emplace_back(b.key(), b.value());
    std::sort(state.begin(), state.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return state;
}

}  // namespace

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::unet: return "unet";
        case ModelKind::patch_mlp: return "patch_mlp";
        case ModelKind::nn_baseline: return "nn_baseline";
    }
    return "?";
}

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const torch::nn::Module& net) {
    json j;
    j["kind"] = to_string(meta.kind);
    j["grid_n"] = meta.grid_n;
    j["norm"] = {{"t_ref", meta.norm.t_ref}, {"scale", meta.norm.scale}};
    j["train"] = train_cfg_json(meta.train_cfg);
    j["plan"] = meta.plan.serialize();
    j["dataset_hash"] = meta.dataset_hash;
    switch (meta.kind) {
        case ModelKind::unet: j["unet"] = unet_cfg_json(meta.unet_cfg); break;
        case ModelKind::patch_mlp:
            j["mlp"] = mlp_cfg_json(meta.mlp_cfg);
            j["patch"] = meta.patch.serialize();
            break;
        case ModelKind::nn_baseline: j["nn"] = nn_cfg_json(meta.nn_cfg); break;
    }

    const auto state = named_state(net);
    json tensors = json::array();
    for (const auto& [name, t] : state) {
        if (t.dtype() != torch::kFloat32)
            throw CheckpointError("checkpoint: tensor " + name + " is not float32");
        tensors.push_back({{"name", name},
                           {"shape", std::vector<std::int64_t>(t.sizes().begin(), t.sizes().end())}});
    }
    j["tensors"] = tensors;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint: " + path);
    const std::string header = j.dump();
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    const std::uint64_t len = header.size();
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& [name, t] : state) {
        auto c = t.detach().contiguous().cpu();
        out.write(reinterpret_cast<const char*>(c.data_ptr<float>()),
                  static_cast<std::streamsize>(c.numel() * sizeof(float)));
    }
    if (!out.flush()) throw CheckpointError("failed writing checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError("bad magic in " + path + " (not a TFRC checkpoint)");
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (version != kVersion)
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 8);
    std::string header(len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(len));
    if (!in) throw CheckpointError("truncated checkpoint header in " + path);

    json j = json::parse(header);
    LoadedCheckpoint ck;
    const std::string kind = j.at("kind");
    ck.meta.grid_n = j.at("grid_n");
    ck.meta.norm.t_ref = j.at("norm").at("t_ref");
    ck.meta.norm.scale = j.at("norm").at("scale");
    ck.meta.train_cfg = train_cfg_from(j.at("train"));
    ck.meta.plan = parse_plan(j.at("plan").get<std::string>());
    ck.meta.dataset_hash = j.value("dataset_hash", "");

    torch::nn::Module* net = nullptr;
    if (kind == "unet") {
        ck.meta.kind = ModelKind::unet;
        ck.meta.unet_cfg = unet_cfg_from(j.at("unet"));
        ck.unet = AdaptiveUNet(ck.meta.unet_cfg);
        net = ck.unet.get();
    } else if (kind == "patch_mlp") {
        ck.meta.kind = ModelKind::patch_mlp;
        ck.meta.mlp_cfg = mlp_cfg_from(j.at("mlp"));
        ck.meta.patch = PatchSpec::parse(j.at("patch").get<std::string>());
        ck.mlp = PatchMLP(ck.meta.mlp_cfg);
        net = ck.mlp.get();
    } else if (kind == "nn_baseline") {
        ck.meta.kind = ModelKind::nn_baseline;
        ck.meta.nn_cfg = nn_cfg_from(j.at("nn"));
        ck.nn = NNBaseline(ck.meta.nn_cfg);
        net = ck.nn.get();
    } else {
        throw CheckpointError("unknown model kind in checkpoint: " + kind);
    }

    auto state = named_state(*net);
    const auto& tensors = j.at("tensors");
    if (tensors.size() != state.size())
        throw CheckpointError("checkpoint tensor count does not match the architecture");
    torch::NoGradGuard no_grad;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const std::string name = tensors[i].at("name");
        const auto shape = tensors[i].at("shape").get<std::vector<std::int64_t>>();
        if (name != state[i].first)
            throw CheckpointError("checkpoint tensor order mismatch at " + name);
        auto& dst = state[i].second;
        if (std::vector<std::int64_t>(dst.sizes().begin(), dst.sizes().end()) != shape)
            throw CheckpointError("checkpoint tensor shape mismatch at " + name);
        auto buf = torch::empty(shape, torch::kFloat32);
        in.read(reinterpret_cast<char*>(buf.data_ptr<float>()),
                static_cast<std::streamsize>(buf.numel() * sizeof(float)));
        if (!in) throw CheckpointError("truncated checkpoint payload at " + name);
        dst.copy_(buf);
    }
    return ck;
}

ReconModel assemble_recon_model(const LoadedCheckpoint& unet_ck, const LoadedCheckpoint& mlp_ck) {
    if (unet_ck.meta.kind != ModelKind::unet || mlp_ck.meta.kind != ModelKind::patch_mlp)
        throw CheckpointError("assemble_recon_model: expected a unet and a patch_mlp checkpoint");
    if (unet_ck.meta.grid_n != mlp_ck.meta.grid_n)
        throw CheckpointError("assemble_recon_model: checkpoints trained on different grids");
    if (unet_ck.meta.plan.serialize() != mlp_ck.meta.plan.serialize())
        throw CheckpointError("assemble_recon_model: checkpoints trained under different plans");
    if (unet_ck.meta.norm.t_ref != mlp_ck.meta.norm.t_ref ||
        unet_ck.meta.norm.scale != mlp_ck.meta.norm.scale)
        throw CheckpointError("assemble_recon_model: normalization constants differ");
    ReconModel model;
    model.unet = unet_ck.unet;
    model.mlp = mlp_ck.mlp;
    model.unet_cfg = unet_ck.meta.unet_cfg;
    model.mlp_cfg = mlp_ck.meta.mlp_cfg;
    model.norm = unet_ck.meta.norm;
    model.plan = unet_ck.meta.plan;
    model.patch = mlp_ck.meta.patch;
    model.grid_n = unet_ck.meta.grid_n;
    return model;
}

}  // namespace tfr
