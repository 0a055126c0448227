#include "tfr/models/unet.hpp"

#include <stdexcept>
#include <string>

namespace tfr {

namespace F = torch::nn::functional;

void UNetConfig::validate() const {
    if (in_channels < 1 || out_channels < 1 || base_width < 1 || depth < 1)
        throw std::invalid_argument("unet config: channel counts and depth must be positive");
    if (norm_groups < 1) throw std::invalid_argument("unet config: norm_groups must be positive");
    for (int s = 0; s <= depth; ++s) {
        const int width = base_width << s;
        if (width % norm_groups != 0)
            throw std::invalid_argument("unet config: norm_groups (" + std::to_string(norm_groups) +
                                        ") does not divide stage width " + std::to_string(width));
    }
}

int padded_size(int n, int depth) {
    const int unit = 1 << depth;
    return (n + unit - 1) / unit * unit;
}

namespace {

torch::nn::Sequential double_conv(int in, int out, int groups) {
    return torch::nn::Sequential(
        torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 3).padding(1).bias(false)),
        torch::nn::GroupNorm(torch::nn::GroupNormOptions(groups, out)),
        torch::nn::ReLU(torch::nn::ReLUOptions().inplace(true)),
        torch::nn::Conv2d(torch::nn::Conv2dOptions(out, out, 3).padding(1).bias(false)),
        torch::nn::GroupNorm(torch::nn::GroupNormOptions(groups, out)),
        torch::nn::ReLU(torch::nn::ReLUOptions().inplace(true)));
}

}  // namespace

AdaptiveUNetImpl::AdaptiveUNetImpl(UNetConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    int in = cfg_.in_channels;
    for (int s = 0; s < cfg_.depth; ++s) {
        const int out = cfg_.base_width << s;
        enc_.push_back(register_module("enc" + std::to_string(s), double_conv(in, out, cfg_.norm_groups)));
        in = out;
    }
    bottleneck_ = register_module("bottleneck",
                                  double_conv(in, cfg_.base_width << cfg_.depth, cfg_.norm_groups));
    for (int s = cfg_.depth - 1; s >= 0; --s) {
        const int skip = cfg_.base_width << s;
        const int from_below = skip * 2;
        dec_.push_back(register_module("dec" + std::to_string(s),
                                       double_conv(from_below + skip, skip, cfg_.norm_groups)));
    }
    head_ = register_module(
        "head", torch::nn::Conv2d(torch::nn::Conv2dOptions(cfg_.base_width, cfg_.out_channels, 1)));
}

torch::Tensor AdaptiveUNetImpl::forward(torch::Tensor x) {
    if (x.dim() != 4 || x.size(1) != cfg_.in_channels)
        throw std::invalid_argument("unet forward: expected [B, " + std::to_string(cfg_.in_channels) +
                                    ", N, N] input");
    if (x.size(2) != x.size(3))
        throw std::invalid_argument("unet forward: input must be square");
    const int n = static_cast<int>(x.size(2));
    const int padded = padded_size(n, cfg_.depth);
    const int lo = (padded - n) / 2;
    const int hi = padded - n - lo;
    if (lo + hi > 0)
        x = F::pad(x, F::PadFuncOptions({lo, hi, lo, hi}).mode(torch::kReflect));

    std::vector<torch::Tensor> skips;
    skips.reserve(enc_.size());
    for (auto& stage : enc_) {
        x = stage->forward(x);
        skips.push_back(x);
        x = F::max_pool2d(x, F::MaxPool2dFuncOptions(2));
    }
    x = bottleneck_->forward(x);
    for (std::size_t i = 0; i < dec_.size(); ++i) {
        x = F::interpolate(x, F::InterpolateFuncOptions()
                                  .scale_factor(std::vector<double>{2.0, 2.0})
                                  .mode(torch::kBilinear)
                                  .align_corners(false));
        x = torch::cat({skips[skips.size() - 1 - i], x}, 1);
        x = dec_[i]->forward(x);
    }
    x = head_->forward(x);
    if (lo + hi > 0) x = x.slice(2, lo, lo + n).slice(3, lo, lo + n);
    return x;
}

}  // namespace tfr
