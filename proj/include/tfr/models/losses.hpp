#pragma once

#include <torch/torch.h>

namespace tfr {

/// Training losses. All four accept [..., H, W] (field losses) or [..., P]
/// (patch loss) tensors of any floating dtype and reduce to a scalar; batched
/// inputs average over the batch.

/// Mean absolute deviation over every node.
torch::Tensor field_loss(const torch::Tensor& pred, const torch::Tensor& truth);

/// Mismatch of forward-difference gradient magnitudes, summed over both axes
/// and normalized by H*W. The last row/column has no forward neighbor and
/// contributes no terms.
torch::Tensor gradient_loss(const torch::Tensor& pred, const torch::Tensor& truth);

/// field_loss + lambda_reg * gradient_loss.
torch::Tensor total_loss(const torch::Tensor& pred, const torch::Tensor& truth, double lambda_reg);

/// Mean absolute deviation over the patch cells.
torch::Tensor patch_loss(const torch::Tensor& pred, const torch::Tensor& truth);

}  // namespace tfr
