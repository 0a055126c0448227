#include "tfr/models/losses.hpp"

#include <stdexcept>

namespace tfr {

namespace {

void check_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* op) {
    if (!a.sizes().equals(b.sizes()))
        throw std::invalid_argument(std::string(op) + ": shape mismatch between prediction and truth");
}

}  // namespace

torch::Tensor field_loss(const torch::Tensor& pred, const torch::Tensor& truth) {
    check_same_shape(pred, truth, "field_loss");
    return (pred - truth).abs().mean();
}

torch::Tensor gradient_loss(const torch::Tensor& pred, const torch::Tensor& truth) {
    check_same_shape(pred, truth, "gradient_loss");
    if (pred.dim() < 2 || pred.size(-1) < 2 || pred.size(-2) < 2)
        throw std::invalid_argument("gradient_loss: fields must be at least 2x2");
    const auto h = pred.size(-2);
    const auto w = pred.size(-1);
    const auto batch = pred.numel() / (h * w);

    auto row_mag = [](const torch::Tensor& t) {
        return (t.slice(-2, 1) - t.slice(-2, 0, -1)).abs();
    };
    auto col_mag = [](const torch::Tensor& t) {
        return (t.slice(-1, 1) - t.slice(-1, 0, -1)).abs();
    };
    const auto row_term = (row_mag(pred) - row_mag(truth)).abs().sum();
    const auto col_term = (col_mag(pred) - col_mag(truth)).abs().sum();
    return (row_term + col_term) / static_cast<double>(h * w * batch);
}

torch::Tensor total_loss(const torch::Tensor& pred, const torch::Tensor& truth, double lambda_reg) {
    if (lambda_reg < 0) throw std::invalid_argument("total_loss: lambda_reg must be nonnegative");
    if (lambda_reg == 0) return field_loss(pred, truth);
    return field_loss(pred, truth) + lambda_reg * gradient_loss(pred, truth);
}

torch::Tensor patch_loss(const torch::Tensor& pred, const torch::Tensor& truth) {
    check_same_shape(pred, truth, "patch_loss");
    return (pred - truth).abs().mean();
}

}  // namespace tfr
