#include "tfr/interp.hpp"

#include <cmath>
#include <limits>

namespace tfr {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

long double gauss_cov(long double r2, long double l) { return std::exp(-r2 / (2.0L * l * l)); }

std::vector<std::array<double, 2>> plan_coords(const ObservationPlan& plan, const Layout& layout) {
    std::vector<std::array<double, 2>> xy;
    xy.reserve(plan.points.size());
    for (const auto& p : plan.points) xy.push_back({layout.node_x(p.col), layout.node_y(p.row)});
    return xy;
}

LongMatrix bordered_gram(const std::vector<std::array<double, 2>>& sensors,
                         const KrigingConfig& cfg) {
    const int m = static_cast<int>(sensors.size());
    LongMatrix K(m + 1, m + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const long double dx = sensors[i][0] - sensors[j][0];
            const long double dy = sensors[i][1] - sensors[j][1];
            K(i, j) = gauss_cov(dx * dx + dy * dy, cfg.length_scale);
        }
        K(i, i) += cfg.nugget;
        K(i, m) = 1.0L;
        K(m, i) = 1.0L;
    }
    K(m, m) = 0.0L;
    return K;
}

[[noreturn]] void report_singular(const std::vector<std::array<double, 2>>& sensors) {
    int bi = 0, bj = 1;
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < sensors.size(); ++i)
        for (std::size_t j = i + 1; j < sensors.size(); ++j) {
            const double dx = sensors[i][0] - sensors[j][0];
            const double dy = sensors[i][1] - sensors[j][1];
            const double d = std::hypot(dx, dy);
            if (d < best) {
                best = d;
                bi = static_cast<int>(i);
                bj = static_cast<int>(j);
            }
        }
    throw InterpError("kriging matrix is singular; sensors " + std::to_string(bi) + " and " +
                      std::to_string(bj) + " are duplicate or near-duplicate (distance " +
                      std::to_string(best) + " m)");
}

}  // namespace

Eigen::VectorXd kriging_weights(const std::vector<std::array<double, 2>>& sensors,
                                const std::array<double, 2>& target, const KrigingConfig& cfg) {
    const int m = static_cast<int>(sensors.size());
    if (m < 2) throw InterpError("kriging needs at least 2 sensors");
    Eigen::FullPivLU<LongMatrix> lu(bordered_gram(sensors, cfg));
    if (!lu.isInvertible()) report_singular(sensors);
    LongVector rhs(m + 1);
    for (int i = 0; i < m; ++i) {
        const long double dx = sensors[i][0] - target[0];
        const long double dy = sensors[i][1] - target[1];
        rhs(i) = gauss_cov(dx * dx + dy * dy, cfg.length_scale);
    }
    rhs(m) = 1.0L;
    LongVector w = lu.solve(rhs);
    return w.cast<double>();
}

KrigingInterpolator::KrigingInterpolator(const ObservationPlan& plan, const Layout& layout,
                                         KrigingConfig cfg)
    : grid_n_(layout.grid_n), m_(plan.m()) {
    if (m_ < 2) throw InterpError("kriging needs at least 2 sensors");
    plan.validate(grid_n_);
    const auto sensors = plan_coords(plan, layout);
    Eigen::FullPivLU<LongMatrix> lu(bordered_gram(sensors, cfg));
    if (!lu.isInvertible()) report_singular(sensors);

    const std::size_t nodes = static_cast<std::size_t>(grid_n_) * grid_n_;
    weights_.resize(static_cast<Eigen::Index>(nodes), m_);
    LongVector rhs(m_ + 1);
    for (int j = 0; j < grid_n_; ++j) {
        const long double y = layout.node_y(j);
        for (int k = 0; k < grid_n_; ++k) {
            const long double x = layout.node_x(k);
            for (int i = 0; i < m_; ++i) {
                const long double dx = sensors[i][0] - x;
                const long double dy = sensors[i][1] - y;
                rhs(i) = gauss_cov(dx * dx + dy * dy, cfg.length_scale);
            }
            rhs(m_) = 1.0L;
            LongVector w = lu.solve(rhs);
            const Eigen::Index r = static_cast<Eigen::Index>(j) * grid_n_ + k;
            for (int i = 0; i < m_; ++i) weights_(r, i) = static_cast<double>(w(i));
        }
    }
}

Grid KrigingInterpolator::reconstruct(const ObservationSet& obs) const {
    if (obs.m() != m_) throw InterpError("kriging: observation length does not match the plan");
    // Weights sum to 1, so predicting on centered readings only sharpens the
    // floating-point path; the result is algebraically identical.
    double mean = 0.0;
    for (double v : obs.values) mean += v;
    mean /= static_cast<double>(m_);
    Eigen::VectorXd centered(m_);
    for (int i = 0; i < m_; ++i) centered(i) = obs.values[i] - mean;
    Eigen::VectorXd pred = weights_ * centered;
    Grid out(grid_n_, 0.0);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = pred(static_cast<Eigen::Index>(i)) + mean;
    return out;
}

GaussInterpolator::GaussInterpolator(const ObservationPlan& plan, const Layout& layout,
                                     GaussInterpConfig cfg)
    : grid_n_(layout.grid_n), m_(plan.m()) {
    if (m_ < 1) throw InterpError("gaussian interpolation needs at least 1 sensor");
    if (cfg.bandwidth <= 0) throw InterpError("gaussian interpolation: bandwidth must be positive");
    plan.validate(grid_n_);
    const auto sensors = plan_coords(plan, layout);
    const std::size_t nodes = static_cast<std::size_t>(grid_n_) * grid_n_;
    weights_.resize(static_cast<Eigen::Index>(nodes), m_);
    std::vector<double> logw(m_);
    for (int j = 0; j < grid_n_; ++j) {
        const double y = layout.node_y(j);
        for (int k = 0; k < grid_n_; ++k) {
            const double x = layout.node_x(k);
            double top = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double dx = sensors[i][0] - x;
                const double dy = sensors[i][1] - y;
                logw[i] = -(dx * dx + dy * dy) / (2.0 * cfg.bandwidth * cfg.bandwidth);
                top = std::max(top, logw[i]);
            }
            double denom = 0.0;
            for (int i = 0; i < m_; ++i) denom += std::exp(logw[i] - top);
            const Eigen::Index r = static_cast<Eigen::Index>(j) * grid_n_ + k;
            for (int i = 0; i < m_; ++i) weights_(r, i) = std::exp(logw[i] - top) / denom;
        }
    }
}

Grid GaussInterpolator::reconstruct(const ObservationSet& obs) const {
    if (obs.m() != m_)
        throw InterpError("gaussian interpolation: observation length does not match the plan");
    Eigen::VectorXd readings(m_);
    for (int i = 0; i < m_; ++i) readings(i) = obs.values[i];
    Eigen::VectorXd pred = weights_ * readings;
    Grid out(grid_n_, 0.0);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = pred(static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace tfr
