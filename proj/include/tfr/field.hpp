#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tfr {

/// Square node-centered scalar field on an N x N grid.
/// Row-major storage, row 0 is the bottom edge (y = 0), column k is x = k*h.
struct Grid {
    int n = 0;
    std::vector<double> a;

    Grid() = default;
    explicit Grid(int n_, double fill = 0.0) : n(n_), a(static_cast<std::size_t>(n_) * n_, fill) {}

    double& at(int row, int col) { return a[static_cast<std::size_t>(row) * n + col]; }
    double at(int row, int col) const { return a[static_cast<std::size_t>(row) * n + col]; }

    std::size_t size() const { return a.size(); }

    double min() const { return *std::min_element(a.begin(), a.end()); }
    double max() const { return *std::max_element(a.begin(), a.end()); }

    double mean() const {
        double s = 0.0;
        for (double v : a) s += v;
        return s / static_cast<double>(a.size());
    }
};

inline void require_same_shape(const Grid& a, const Grid& b) {
    if (a.n != b.n) throw std::invalid_argument("grid shape mismatch");
}

/// Largest absolute cellwise difference.
inline double linf_diff(const Grid& a, const Grid& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

/// Grid index of one node, (row, col) with row 0 at the bottom edge.
struct GridIndex {
    int row = 0;
    int col = 0;
    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

}  // namespace tfr
