#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "tfr/field.hpp"
#include "tfr/layout.hpp"
#include "tfr/observe.hpp"

namespace tfr {

struct InterpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordinary kriging with a Gaussian covariance k(r) = exp(-r^2 / (2 l^2))
/// (unit sill; kriging weights are invariant to the sill). The nugget is a
/// small diagonal addition trading exactness at sensors for conditioning.
struct KrigingConfig {
    double length_scale = 0.03;  // m
    double nugget = 1e-8;        // relative to the unit sill
};

/// Weights for one target: solves the bordered (m+1) system with the
/// unbiasedness constraint. Returns m weights followed by the Lagrange
/// multiplier. Solved in extended precision; the Gaussian Gram matrix is
/// ill-conditioned for clustered sensors.
Eigen::VectorXd kriging_weights(const std::vector<std::array<double, 2>>& sensors,
                                const std::array<double, 2>& target, const KrigingConfig& cfg);

/// Precomputes per-node weights once per plan (sensors are fixed), then each
/// reconstruction is a weighted sum over readings.
class KrigingInterpolator {
public:
    KrigingInterpolator(const ObservationPlan& plan, const Layout& layout, KrigingConfig cfg = {});
    Grid reconstruct(const ObservationSet& obs) const;
    const Eigen::MatrixXd& node_weights() const { return weights_; }

private:
    int grid_n_;
    int m_;
    Eigen::MatrixXd weights_;  // (N^2) x m, rows sum to 1
};

/// Normalized Gaussian-kernel weighting of all readings at every node.
struct GaussInterpConfig {
    double bandwidth = 0.025;  // m
};

class GaussInterpolator {
public:
    GaussInterpolator(const ObservationPlan& plan, const Layout& layout, GaussInterpConfig cfg = {});
    Grid reconstruct(const ObservationSet& obs) const;

private:
    int grid_n_;
    int m_;
    Eigen::MatrixXd weights_;  // (N^2) x m, convex rows
};

}  // namespace tfr
