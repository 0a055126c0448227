#include "tfr/thermal.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace tfr {

namespace {

constexpr int kDirectSolveMaxN = 256;

struct StencilTerm {
    int row_off;
    int col_off;
};

// Mirror a neighbor offset back into the grid; returns the reflected index.
int mirror(int idx, int n) {
    if (idx < 0) return -idx;
    if (idx >= n) return 2 * (n - 1) - idx;
    return idx;
}

double row_weight_for(int j, int k, int n) {
    const bool ej = (j == 0 || j == n - 1);
    const bool ek = (k == 0 || k == n - 1);
    if (ej && ek) return 0.25;
    if (ej || ek) return 0.5;
    return 1.0;
}

LinearSystem assemble_impl(const Layout& layout, const Grid& source,
                           const std::vector<double>& sink_values) {
    const int n = layout.grid_n;
    if (source.n != n) throw SolverError("assemble: source grid shape does not match layout grid_n");
    const auto sink = layout.sink_cols();
    if (sink_values.size() != sink.size())
        throw SolverError("assemble: expected " + std::to_string(sink.size()) + " sink values, got " +
                          std::to_string(sink_values.size()));

    LinearSystem sys;
    sys.dof.assign(static_cast<std::size_t>(n) * n, 0);
    std::vector<double> dirichlet_value(static_cast<std::size_t>(n) * n, 0.0);
    for (std::size_t i = 0; i < sink.size(); ++i) {
        const int idx = sink[i];  // row 0
        sys.dof[idx] = -1;
        dirichlet_value[idx] = sink_values[i];
        sys.dirichlet_nodes.push_back(idx);
    }
    int n_unknown = 0;
    for (auto& d : sys.dof)
        if (d == 0) d = n_unknown++; else d = -1;

    const double lambda = layout.conductivity;
    const double inv_h2 = 1.0 / (layout.h() * layout.h());
    const StencilTerm offsets[4] = {{0, -1}, {0, 1}, {-1, 0}, {1, 0}};

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(5) * n_unknown);
    sys.b = Eigen::VectorXd::Zero(n_unknown);
    sys.b_dirichlet = Eigen::VectorXd::Zero(n_unknown);
    sys.row_weight = Eigen::VectorXd::Zero(n_unknown);

    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const int r = sys.dof[static_cast<std::size_t>(j) * n + k];
            if (r < 0) continue;
            const double w = row_weight_for(j, k, n);
            sys.row_weight[r] = w;
            trips.emplace_back(r, r, 4.0 * w * lambda * inv_h2);
            for (const auto& off : offsets) {
                const int nj = mirror(j + off.row_off, n);
                const int nk = mirror(k + off.col_off, n);
                const double coef = w * lambda * inv_h2;  // one unit per stencil arm
                const int nb = sys.dof[static_cast<std::size_t>(nj) * n + nk];
                if (nb >= 0) {
                    trips.emplace_back(r, nb, -coef);
                } else {
                    sys.b_dirichlet[r] += coef * dirichlet_value[static_cast<std::size_t>(nj) * n + nk];
                }
            }
            sys.b[r] = w * source.at(j, k);
        }
    }
    sys.b += sys.b_dirichlet;
    sys.A.resize(n_unknown, n_unknown);
    sys.A.setFromTriplets(trips.begin(), trips.end());
    sys.A.makeCompressed();
    return sys;
}

}  // namespace

LinearSystem assemble_system(const Layout& layout, const Grid& power) {
    std::vector<double> sink_values(layout.sink_cols().size(), layout.sink.temperature);
    return assemble_poisson(layout, power, sink_values);
}

LinearSystem assemble_poisson(const Layout& layout, const Grid& source,
                              const std::vector<double>& sink_values) {
    return assemble_impl(layout, source, sink_values);
}

struct SteadySolver::Impl {
    Layout layout;
    LinearSystem sys;  // assembled with zero source, T0 sink: b_dirichlet reused
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> direct;
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    bool use_direct = true;

    explicit Impl(const Layout& l) : layout(l) {
        layout.validate();
        Grid zero(layout.grid_n, 0.0);
        std::vector<double> t0(layout.sink_cols().size(), layout.sink.temperature);
        sys = assemble_impl(layout, zero, t0);
        use_direct = layout.grid_n <= kDirectSolveMaxN;
        if (use_direct) {
            direct.compute(sys.A);
            if (direct.info() != Eigen::Success)
                throw SolverError("steady solver: sparse factorization failed");
        } else {
            cg.setTolerance(1e-10);
            cg.setMaxIterations(20L * layout.grid_n * layout.grid_n);
            cg.compute(sys.A);
        }
    }

    Grid run(const Grid& source, const std::vector<double>& sink_values) const {
        const int n = layout.grid_n;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.A.rows());
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int r = sys.dof[static_cast<std::size_t>(j) * n + k];
                if (r >= 0) b[r] = sys.row_weight[r] * source.at(j, k);
            }
        const auto cols = layout.sink_cols();
        const bool uniform_t0 = sink_values.size() == cols.size() &&
                                std::all_of(sink_values.begin(), sink_values.end(), [&](double v) {
                                    return v == layout.sink.temperature;
                                });
        if (uniform_t0) {
            b += sys.b_dirichlet;
        } else {
            // general boundary values: rebuild the Dirichlet contribution
            LinearSystem tmp = assemble_impl(layout, source, sink_values);
            b = tmp.b;
        }

        Eigen::VectorXd t;
        if (use_direct) {
            t = direct.solve(b);
        } else {
            t = cg.solve(b);
        }
        const double bn = b.norm();
        const double rel = (sys.A * t - b).norm() / (bn > 0.0 ? bn : 1.0);
        if (!t.allFinite() || rel > 1e-8)
            throw SolverError("steady solver: residual " + std::to_string(rel) +
                              " exceeds tolerance 1e-8");

        Grid out(n, 0.0);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int r = sys.dof[static_cast<std::size_t>(j) * n + k];
                out.at(j, k) = r >= 0 ? t[r] : 0.0;
            }
        for (std::size_t i = 0; i < cols.size(); ++i) out.at(0, cols[i]) = sink_values[i];
        return out;
    }
};

SteadySolver::SteadySolver(const Layout& layout) : impl_(std::make_unique<Impl>(layout)) {}
SteadySolver::~SteadySolver() = default;
SteadySolver::SteadySolver(SteadySolver&&) noexcept = default;
SteadySolver& SteadySolver::operator=(SteadySolver&&) noexcept = default;

Grid SteadySolver::solve(const std::vector<double>& powers) const {
    Grid source = rasterize_power(impl_->layout, powers);
    std::vector<double> t0(impl_->layout.sink_cols().size(), impl_->layout.sink.temperature);
    return impl_->run(source, t0);
}

Grid SteadySolver::solve_source(const Grid& source, const std::vector<double>& sink_values) const {
    return impl_->run(source, sink_values);
}

Grid solve_steady(const Layout& layout, const std::vector<double>& powers) {
    return SteadySolver(layout).solve(powers);
}

Grid solve_poisson(const Layout& layout, const Grid& source, const std::vector<double>& sink_values) {
    return SteadySolver(layout).solve_source(source, sink_values);
}

double sink_flux(const Grid& field, const Layout& layout) {
    if (field.n != layout.grid_n) throw SolverError("sink_flux: field shape does not match layout");
    const auto cols = layout.sink_cols();
    const double h = layout.h();
    double flux = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const int k = cols[i];
        const double dTdy =
            (-3.0 * field.at(0, k) + 4.0 * field.at(1, k) - field.at(2, k)) / (2.0 * h);
        const double wq = (i == 0 || i + 1 == cols.size()) ? 0.5 : 1.0;
        flux += layout.conductivity * dTdy * wq * h;
    }
    return flux;
}

}  // namespace tfr
