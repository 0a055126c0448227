#pragma once

#include <torch/torch.h>

#include <vector>

namespace tfr {

/// Shallow patch regressor: m -> 32 -> 32 -> p, rectified-linear hidden
/// layers, identity output.
struct MLPConfig {
    int input = 16;                     // observation count m
    std::vector<int> hidden = {32, 32};
    int output = 52;                    // patch width p

    void validate() const;
};

class PatchMLPImpl : public torch::nn::Module {
public:
    explicit PatchMLPImpl(MLPConfig cfg = {});
    torch::Tensor forward(torch::Tensor x);  // [B, m] -> [B, p]
    const MLPConfig& config() const { return cfg_; }

private:
    MLPConfig cfg_;
    torch::nn::Sequential layers_{nullptr};
};

TORCH_MODULE(PatchMLP);

/// Non-convolutional comparison model: fully connected m -> 256 -> 256 ->
/// coarse_n^2, reshaped and bilinearly upsampled to the output grid.
struct NNBaselineConfig {
    int input = 16;
    int hidden = 256;
    int coarse_n = 50;
    int out_n = 200;

    void validate() const;
};

class NNBaselineImpl : public torch::nn::Module {
public:
    explicit NNBaselineImpl(NNBaselineConfig cfg = {});
    torch::Tensor forward(torch::Tensor x);  // [B, m] -> [B, 1, out_n, out_n]
    const NNBaselineConfig& config() const { return cfg_; }

private:
    NNBaselineConfig cfg_;
    torch::nn::Sequential layers_{nullptr};
};

TORCH_MODULE(NNBaseline);

}  // namespace tfr
