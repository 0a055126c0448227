#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfr/dataset.hpp"
#include "tfr/models/mlp.hpp"
#include "tfr/models/recon.hpp"
#include "tfr/models/unet.hpp"
#include "tfr/observe.hpp"

namespace tfr {

struct TrainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainConfig {
    int epochs = 200;
    double lr = 0.01;        // initial Adam learning rate
    double lr_final = 1e-4;  // cosine decay target
    int batch_size = 16;
    double lambda_reg = 0.1;  // gradient-loss weight
    std::uint64_t seed = 0;

    void validate() const;
};

/// One loss-history row (the loss CSV schema).
struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;       // optimized objective, normalized units
    double field_component = 0.0;  // normalized units
    double grad_component = 0.0;   // normalized units
    double val_mae = 0.0;          // kelvin, held-out split
};

void write_loss_csv(const std::string& path, const std::vector<EpochStats>& history);

/// Training tensors materialized from a TFR1 dataset: normalized sparse
/// images, normalized targets, observation vectors and patch targets.
struct TensorData {
    torch::Tensor sparse;  // [n, 1, N, N] float32
    torch::Tensor truth;   // [n, 1, N, N] float32
    torch::Tensor obs;     // [n, m] float32
    torch::Tensor patch;   // [n, p] float32
    int grid_n = 0;
    double norm_scale = 50.0;  // kelvin per normalized unit, for val reporting

    std::int64_t count() const { return sparse.size(0); }
};

/// Loads samples [begin, end) of a dataset file.
TensorData load_tensor_data(const std::string& dataset_path, const ObservationPlan& plan,
                            const PatchSpec& patch, const FieldNorm& norm, std::uint64_t begin,
                            std::uint64_t end);

/// Adam + cosine learning-rate decay over the epoch budget. Deterministic for
/// a fixed seed: the module is constructed inside after seeding and batch
/// order comes from a seeded stream. `progress`, when given, receives one
/// line per epoch.
std::pair<AdaptiveUNet, std::vector<EpochStats>> train_unet(const UNetConfig& ucfg,
                                                            const TrainConfig& tcfg,
                                                            const TensorData& train,
                                                            const TensorData& val,
                                                            std::ostream* progress = nullptr);

std::pair<PatchMLP, std::vector<EpochStats>> train_patch_mlp(const MLPConfig& mcfg,
                                                             const TrainConfig& tcfg,
                                                             const TensorData& train,
                                                             const TensorData& val,
                                                             std::ostream* progress = nullptr);

std::pair<NNBaseline, std::vector<EpochStats>> train_nn_baseline(const NNBaselineConfig& bcfg,
                                                                 const TrainConfig& tcfg,
                                                                 const TensorData& train,
                                                                 const TensorData& val,
                                                                 std::ostream* progress = nullptr);

}  // namespace tfr
