#pragma once

#include <string>

#include "tfr/models/mlp.hpp"
#include "tfr/models/recon.hpp"
#include "tfr/models/train.hpp"
#include "tfr/models/unet.hpp"
#include "tfr/observe.hpp"

namespace tfr {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModelKind { unet, patch_mlp, nn_baseline };

std::string to_string(ModelKind k);

/// Everything needed to rebuild and audit a trained model: architecture and
/// training configs, normalization constants, the observation plan (and patch
/// spec for the regressor) and the training seed.
struct CheckpointMeta {
    ModelKind kind = ModelKind::unet;
    UNetConfig unet_cfg;
    MLPConfig mlp_cfg;
    NNBaselineConfig nn_cfg;
    TrainConfig train_cfg;
    FieldNorm norm;
    ObservationPlan plan;
    PatchSpec patch;  // patch_mlp checkpoints only
    int grid_n = 0;
    std::string dataset_hash;  // sha256 of the training dataset file
};

/// Self-describing container: "TFRC" magic, JSON metadata (including a tensor
/// index), then raw float32 little-endian parameter blobs. Round trips are
/// byte-exact.
void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const torch::nn::Module& net);

struct LoadedCheckpoint {
    CheckpointMeta meta;
    AdaptiveUNet unet{nullptr};
    PatchMLP mlp{nullptr};
    NNBaseline nn{nullptr};
};

LoadedCheckpoint load_checkpoint(const std::string& path);

/// Combines a trained UNet and patch MLP into the stitched reconstructor;
/// both checkpoints must share plan, grid and normalization.
ReconModel assemble_recon_model(const LoadedCheckpoint& unet_ck, const LoadedCheckpoint& mlp_ck);

}  // namespace tfr
