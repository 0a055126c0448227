#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>
#include <string>
#include <vector>

#include "tfr/field.hpp"
#include "tfr/layout.hpp"

namespace tfr {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discretization of -lambda * div(grad T) = phi on the layout grid.
///
/// 5-point stencil, zero-flux (mirror) treatment on all boundary nodes, sink
/// nodes eliminated as Dirichlet unknowns. Boundary rows are scaled by 1/2 and
/// corner rows by 1/4 so the assembled matrix is symmetric positive definite.
struct LinearSystem {
    Eigen::SparseMatrix<double> A;     // unknowns only, SPD
    Eigen::VectorXd b;                 // source term + Dirichlet elimination
    Eigen::VectorXd b_dirichlet;       // Dirichlet contribution alone
    Eigen::VectorXd row_weight;        // 1, 1/2 or 1/4 per unknown
    std::vector<std::int32_t> dof;     // grid index -> unknown index, -1 on sink nodes
    std::vector<int> dirichlet_nodes;  // grid indices of sink nodes
};

/// Assemble the system for a rasterized power field with the sink held at the
/// layout's T0.
LinearSystem assemble_system(const Layout& layout, const Grid& power);

/// Assemble with an arbitrary nodal source field and per-sink-node boundary
/// values (`sink_values` aligned with layout.sink_cols()). This is the entry
/// point manufactured-solution tests drive directly.
LinearSystem assemble_poisson(const Layout& layout, const Grid& source,
                              const std::vector<double>& sink_values);

/// Steady solver with a cached factorization; the matrix depends only on the
/// layout, so bulk generation factorizes once and back-substitutes per sample.
/// solve() is const and safe to call from several threads concurrently.
class SteadySolver {
public:
    explicit SteadySolver(const Layout& layout);
    ~SteadySolver();
    SteadySolver(SteadySolver&&) noexcept;
    SteadySolver& operator=(SteadySolver&&) noexcept;

    /// Ground-truth field for one power vector; sink nodes exactly T0.
    Grid solve(const std::vector<double>& powers) const;

    /// General right-hand side: nodal source field + sink boundary values.
    Grid solve_source(const Grid& source, const std::vector<double>& sink_values) const;

    /// Relative residual of the last solve on this thread is not retained;
    /// every solve enforces ||A t - b|| / ||b|| <= tolerance() or throws.
    double tolerance() const { return 1e-8; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrappers.
Grid solve_steady(const Layout& layout, const std::vector<double>& powers);
Grid solve_poisson(const Layout& layout, const Grid& source, const std::vector<double>& sink_values);

/// Discrete heat outflow through the sink, W per meter of depth: second-order
/// one-sided normal gradient at each sink node, integrated with trapezoid
/// weights along the segment.
double sink_flux(const Grid& field, const Layout& layout);

}  // namespace tfr
