#include "tfr/models/mlp.hpp"

#include <stdexcept>
#include <string>

namespace tfr {

namespace F = torch::nn::functional;

void MLPConfig::validate() const {
    if (input < 1 || output < 1) throw std::invalid_argument("mlp config: widths must be positive");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("mlp config: hidden widths must be positive");
}

PatchMLPImpl::PatchMLPImpl(MLPConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    layers_ = torch::nn::Sequential();
    int in = cfg_.input;
    for (int h : cfg_.hidden) {
        layers_->push_back(torch::nn::Linear(in, h));
        layers_->push_back(torch::nn::ReLU(torch::nn::ReLUOptions().inplace(true)));
        in = h;
    }
    layers_->push_back(torch::nn::Linear(in, cfg_.output));
    register_module("layers", layers_);
}

torch::Tensor PatchMLPImpl::forward(torch::Tensor x) {
    if (x.size(-1) != cfg_.input)
        throw std::invalid_argument("patch mlp: expected observation vectors of length " +
                                    std::to_string(cfg_.input));
    return layers_->forward(x);
}

void NNBaselineConfig::validate() const {
    if (input < 1 || hidden < 1 || coarse_n < 2 || out_n < 2)
        throw std::invalid_argument("nn baseline config: widths must be positive");
}

NNBaselineImpl::NNBaselineImpl(NNBaselineConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    layers_ = torch::nn::Sequential(
        torch::nn::Linear(cfg_.input, cfg_.hidden),
        torch::nn::ReLU(torch::nn::ReLUOptions().inplace(true)),
        torch::nn::Linear(cfg_.hidden, cfg_.hidden),
        torch::nn::ReLU(torch::nn::ReLUOptions().inplace(true)),
        torch::nn::Linear(cfg_.hidden, cfg_.coarse_n * cfg_.coarse_n));
    register_module("layers", layers_);
}

torch::Tensor NNBaselineImpl::forward(torch::Tensor x) {
    if (x.size(-1) != cfg_.input)
        throw std::invalid_argument("nn baseline: expected observation vectors of length " +
                                    std::to_string(cfg_.input));
    const bool batched = x.dim() == 2;
    if (!batched) x = x.unsqueeze(0);
    auto y = layers_->forward(x).view({x.size(0), 1, cfg_.coarse_n, cfg_.coarse_n});
    y = F::interpolate(y, F::InterpolateFuncOptions()
                              .size(std::vector<std::int64_t>{cfg_.out_n, cfg_.out_n})
                              .mode(torch::kBilinear)
                              .align_corners(false));
    return batched ? y : y.squeeze(0);
}

}  // namespace tfr
