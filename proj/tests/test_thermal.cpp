#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfr/layout.hpp"
#include "tfr/thermal.hpp"

using namespace tfr;

namespace {

Layout desk_layout(int n = 64) {
    Layout l = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case1.layout");
    l.grid_n = n;
    l.validate();
    return l;
}

// Manufactured solution compatible with the adiabatic boundaries:
// T*(x, y) = T0 + cos(pi x / L) cos(pi y / L), source = -lambda lap T*.
struct Manufactured {
    const Layout& layout;
    double t_star(double x, double y) const {
        const double L = layout.domain_size;
        return layout.sink.temperature +
               std::cos(std::numbers::pi * x / L) * std::cos(std::numbers::pi * y / L);
    }
    Grid source() const {
        Grid s(layout.grid_n, 0.0);
        const double L = layout.domain_size;
        const double c = 2.0 * layout.conductivity * std::pow(std::numbers::pi / L, 2);
        for (int j = 0; j < layout.grid_n; ++j)
            for (int k = 0; k < layout.grid_n; ++k)
                s.at(j, k) = c * std::cos(std::numbers::pi * layout.node_x(k) / L) *
                             std::cos(std::numbers::pi * layout.node_y(j) / L);
        return s;
    }
    std::vector<double> sink_values() const {
        std::vector<double> vals;
        for (int k : layout.sink_cols()) vals.push_back(t_star(layout.node_x(k), 0.0));
        return vals;
    }
    double max_error(const Grid& t) const {
        double e = 0.0;
        for (int j = 0; j < layout.grid_n; ++j)
            for (int k = 0; k < layout.grid_n; ++k)
                e = std::max(e, std::abs(t.at(j, k) - t_star(layout.node_x(k), layout.node_y(j))));
        return e;
    }
};

double mms_error(int n) {
    Layout l = desk_layout(n);
    Manufactured mms{l};
    Grid t = solve_poisson(l, mms.source(), mms.sink_values());
    return mms.max_error(t);
}

}  // namespace

TEST_CASE("interior stencil rows match the textbook 5-point form") {
    Layout l = desk_layout(32);
    Grid power = rasterize_power(l, std::vector<double>(10, 12345.0));
    LinearSystem sys = assemble_system(l, power);
    const int n = l.grid_n;
    const double lambda_h2 = l.conductivity / (l.h() * l.h());

    const int j = 10, k = 17;  // interior, away from the sink
    const int r = sys.dof[static_cast<std::size_t>(j) * n + k];
    REQUIRE(r >= 0);
    CHECK(sys.A.coeff(r, r) == doctest::Approx(4.0 * lambda_h2));
    for (auto [dj, dk] : {std::pair{0, 1}, {0, -1}, {1, 0}, {-1, 0}}) {
        const int nb = sys.dof[static_cast<std::size_t>(j + dj) * n + (k + dk)];
        CHECK(sys.A.coeff(r, nb) == doctest::Approx(-lambda_h2));
    }
    CHECK(sys.b[r] == doctest::Approx(power.at(j, k)));
}

TEST_CASE("A annihilates constants on rows untouched by the sink") {
    Layout l = desk_layout(32);
    Grid zero(l.grid_n, 0.0);
    LinearSystem sys = assemble_system(l, zero);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.A.rows());
    Eigen::VectorXd r = sys.A * ones;

    const auto sink = l.sink_cols();
    auto near_sink = [&](int j, int k) {
        for (int c : sink) {
            if (j <= 1 && std::abs(k - c) <= 1) return true;  // conservative halo
        }
        return false;
    };
    for (int j = 0; j < l.grid_n; ++j)
        for (int k = 0; k < l.grid_n; ++k) {
            const int dof = sys.dof[static_cast<std::size_t>(j) * l.grid_n + k];
            if (dof < 0 || near_sink(j, k)) continue;
            CHECK(std::abs(r[dof]) < 1e-9);
        }
}

TEST_CASE("Dirichlet elimination feeds lambda*T0/h^2 to the node above a sink node") {
    Layout l = desk_layout(32);
    Grid zero(l.grid_n, 0.0);
    LinearSystem sys = assemble_system(l, zero);
    const double lambda_h2 = l.conductivity / (l.h() * l.h());
    const auto sink = l.sink_cols();
    const int k = sink[sink.size() / 2];  // interior sink column
    const int above = sys.dof[static_cast<std::size_t>(1) * l.grid_n + k];
    REQUIRE(above >= 0);
    CHECK(sys.b_dirichlet[above] == doctest::Approx(lambda_h2 * l.sink.temperature));
    CHECK(sys.b[above] == doctest::Approx(sys.b_dirichlet[above]));
}

TEST_CASE("assembled matrix is symmetric") {
    Layout l = desk_layout(24);
    Grid zero(l.grid_n, 0.0);
    LinearSystem sys = assemble_system(l, zero);
    Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(sys.A.transpose()) - sys.A;
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-12);
    // 5 or fewer nonzeros per row
    for (int r = 0; r < sys.A.outerSize(); ++r) {
        int nnz = 0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, r); it; ++it) ++nnz;
        CHECK(nnz <= 5);
    }
}

TEST_CASE("zero powers give the uniform sink temperature") {
    Layout l = desk_layout(64);
    Grid t = solve_steady(l, std::vector<double>(10, 0.0));
    CHECK(std::abs(t.max() - 298.0) < 1e-6);
    CHECK(std::abs(t.min() - 298.0) < 1e-6);
}

TEST_CASE("manufactured solution converges at second order") {
    const double e50 = mms_error(50);
    const double e100 = mms_error(100);
    const double e200 = mms_error(200);
    // h ratios are (49/99) and (99/199); use the exact ratio in the order
    const double o1 = std::log(e50 / e100) / std::log(99.0 / 49.0);
    const double o2 = std::log(e100 / e200) / std::log(199.0 / 99.0);
    CHECK(o1 > 1.7);
    CHECK(o1 < 2.3);
    CHECK(o2 > 1.7);
    CHECK(o2 < 2.3);
}

TEST_CASE("solver agrees with an independent Gauss-Seidel relaxation") {
    Layout l = desk_layout(40);
    std::vector<double> powers(10);
    for (int i = 0; i < 10; ++i) powers[i] = 2500.0 * (i + 1);
    Grid direct = solve_steady(l, powers);

    // independent route: relax the assembled system to high precision
    Grid power = rasterize_power(l, powers);
    LinearSystem sys = assemble_system(l, power);
    Eigen::VectorXd t = Eigen::VectorXd::Constant(sys.A.rows(), l.sink.temperature);
    for (int sweep = 0; sweep < 40000; ++sweep) {
        for (int r = 0; r < sys.A.outerSize(); ++r) {
            double diag = 0.0, acc = sys.b[r];
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, r); it; ++it) {
                if (it.row() == r)
                    diag = it.value();
                else
                    acc -= it.value() * t[it.row()];
            }
            t[r] = acc / diag;
        }
        if (sweep % 500 == 0 && (sys.A * t - sys.b).norm() < 1e-10 * sys.b.norm()) break;
    }
    REQUIRE((sys.A * t - sys.b).norm() < 1e-8 * sys.b.norm());
    double max_diff = 0.0;
    for (int j = 0; j < l.grid_n; ++j)
        for (int k = 0; k < l.grid_n; ++k) {
            const int r = sys.dof[static_cast<std::size_t>(j) * l.grid_n + k];
            if (r >= 0) max_diff = std::max(max_diff, std::abs(direct.at(j, k) - t[r]));
        }
    CHECK(max_diff < 1e-5);
}

TEST_CASE("case1 at full power sits hundreds of kelvin above T0 and is monotone in power") {
    Layout l = desk_layout(64);
    Grid full = solve_steady(l, std::vector<double>(10, 30000.0));
    const double rise = full.max() - 298.0;
    CHECK(rise > 100.0);
    CHECK(rise < 2000.0);
    Grid half = solve_steady(l, std::vector<double>(10, 15000.0));
    CHECK(half.max() < full.max());
    for (std::size_t i = 0; i < full.a.size(); ++i) CHECK(half.a[i] <= full.a[i] + 1e-9);
}

TEST_CASE("superposition holds nodewise") {
    Layout l = desk_layout(48);
    std::vector<double> p(10, 0.0), q(10, 0.0);
    p[2] = 20000.0;
    q[7] = 10000.0;
    std::vector<double> combo(10, 0.0);
    const double a = 0.75, c = 0.5;
    for (int i = 0; i < 10; ++i) combo[i] = a * p[i] + c * q[i];
    SteadySolver solver(l);
    Grid tp = solver.solve(p), tq = solver.solve(q), tc = solver.solve(combo);
    double worst = 0.0;
    for (std::size_t i = 0; i < tc.a.size(); ++i) {
        const double expect = a * (tp.a[i] - 298.0) + c * (tq.a[i] - 298.0) + 298.0;
        worst = std::max(worst, std::abs(tc.a[i] - expect));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("discrete maximum principle: minimum sits on the sink at T0") {
    Layout l = desk_layout(56);
    RngStream rng(11);
    std::vector<double> p(10);
    for (auto& v : p) v = 30000.0 * rng.next_double();
    Grid t = solve_steady(l, p);
    CHECK(t.min() >= 298.0 - 1e-9);
    const auto cols = l.sink_cols();
    for (int k : cols) CHECK(t.at(0, k) == doctest::Approx(298.0));
}

TEST_CASE("mirror-symmetric layout yields a mirror-symmetric field") {
    Layout l;
    l.grid_n = 65;  // odd: exact mirror nodes
    l.sources = {
        {1, 0.03, 0.06, 0.02, 0.02, 30000.0},
        {2, 0.07, 0.06, 0.02, 0.02, 30000.0},
        {3, 0.05, 0.025, 0.016, 0.016, 30000.0},
    };
    l.validate();
    Grid t = solve_steady(l, {24000.0, 24000.0, 12000.0});
    double worst = 0.0;
    for (int j = 0; j < l.grid_n; ++j)
        for (int k = 0; k < l.grid_n; ++k)
            worst = std::max(worst, std::abs(t.at(j, k) - t.at(j, l.grid_n - 1 - k)));
    CHECK(worst < 1e-6);
}

TEST_CASE("sink flux vanishes without sources and is linear in power") {
    Layout l = desk_layout(64);
    Grid cold = solve_steady(l, std::vector<double>(10, 0.0));
    CHECK(std::abs(sink_flux(cold, l)) < 1e-9);

    std::vector<double> p(10, 0.0);
    p[4] = 10000.0;
    std::vector<double> p2(10, 0.0);
    p2[4] = 20000.0;
    SteadySolver solver(l);
    const double f1 = sink_flux(solver.solve(p), l);
    const double f2 = sink_flux(solver.solve(p2), l);
    CHECK(f2 == doctest::Approx(2.0 * f1).epsilon(1e-9));
}

TEST_CASE("sink flux balances injected power, improving with resolution") {
    std::vector<double> rel_err;
    for (int n : {50, 100, 200}) {
        Layout l = desk_layout(n);
        std::vector<double> p(10, 0.0);
        p[4] = 25000.0;  // single mid-domain source
        Grid t = solve_steady(l, p);
        Grid raster = rasterize_power(l, p);
        double injected = 0.0;
        for (double v : raster.a) injected += v * l.h() * l.h();
        const double flux = sink_flux(t, l);
        rel_err.push_back(std::abs(flux - injected) / injected);
    }
    CHECK(rel_err[2] < 0.05);
    CHECK(rel_err[1] < rel_err[0]);
    CHECK(rel_err[2] < rel_err[1]);
}
