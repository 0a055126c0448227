#pragma once

#include <torch/torch.h>

#include <vector>

namespace tfr {

/// Encoder-decoder configuration. The expansive path upsamples by bilinear
/// interpolation (no transposed convolutions) and every 3x3 convolution is
/// followed by group normalization.
struct UNetConfig {
    int in_channels = 1;
    int out_channels = 1;
    int base_width = 64;  // desk-scale runs use 32
    int depth = 4;        // downsampling levels
    int norm_groups = 8;

    void validate() const;
};

/// Smallest multiple of 2^depth that is >= n; inputs are reflect-padded to
/// this size and the output cropped back.
int padded_size(int n, int depth);

class AdaptiveUNetImpl : public torch::nn::Module {
public:
    explicit AdaptiveUNetImpl(UNetConfig cfg = {});

    /// [B, in_channels, N, N] -> [B, out_channels, N, N] for any N >= 16.
    torch::Tensor forward(torch::Tensor x);

    const UNetConfig& config() const { return cfg_; }

private:
    UNetConfig cfg_;
    std::vector<torch::nn::Sequential> enc_;
    torch::nn::Sequential bottleneck_{nullptr};
    std::vector<torch::nn::Sequential> dec_;
    torch::nn::Conv2d head_{nullptr};
};

TORCH_MODULE(AdaptiveUNet);

}  // namespace tfr
