#include "tfr/observe.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tfr/rng.hpp"
#include "tfr/textcfg.hpp"

namespace tfr {

std::string to_string(SelectStrategy s) {
    switch (s) {
        case SelectStrategy::uniform: return "uniform";
        case SelectStrategy::random: return "random";
        case SelectStrategy::physics: return "physics";
    }
    return "?";
}

SelectStrategy strategy_from_string(const std::string& name) {
    if (name == "uniform") return SelectStrategy::uniform;
    if (name == "random") return SelectStrategy::random;
    if (name == "physics" || name == "physics-informed") return SelectStrategy::physics;
    throw ObserveError("unknown selection strategy: " + name);
}

void ObservationPlan::validate(int grid_n) const {
    std::unordered_set<std::int64_t> seen;
    for (const auto& p : points) {
        if (p.row < 0 || p.row >= grid_n || p.col < 0 || p.col >= grid_n)
            throw ObserveError("plan point (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                               ") outside the " + std::to_string(grid_n) + "^2 grid");
        if (!seen.insert(static_cast<std::int64_t>(p.row) * grid_n + p.col).second)
            throw ObserveError("plan contains a duplicate point (" + std::to_string(p.row) + ", " +
                               std::to_string(p.col) + ")");
    }
}

std::string ObservationPlan::serialize() const {
    ConfigValue root = ConfigValue::table();
    root.set("strategy", ConfigValue::string(to_string(strategy)));
    root.set("m", ConfigValue::number(m()));
    root.set("seed", ConfigValue::number(static_cast<double>(seed)));
    root.set("layout_hash", ConfigValue::string(layout_hash));
    ConfigValue arr = ConfigValue::array();
    for (const auto& p : points) {
        ConfigValue t = ConfigValue::table();
        t.set("row", ConfigValue::number(p.row));
        t.set("col", ConfigValue::number(p.col));
        arr.push_back(std::move(t));
    }
    root.set("points", std::move(arr));
    return root.serialize();
}

ObservationPlan parse_plan(const std::string& text) {
    ConfigValue root = parse_config(text);
    ObservationPlan plan;
    plan.strategy = strategy_from_string(root.get("strategy", "").as_string("strategy"));
    plan.seed = static_cast<std::uint64_t>(root.get_number_or("seed", 0, ""));
    plan.layout_hash = root.get("layout_hash", "").as_string("layout_hash");
    int idx = 0;
    for (const ConfigValue& pv : root.get("points", "").as_array("points")) {
        std::string tag = "points[" + std::to_string(idx++) + "]";
        plan.points.push_back(GridIndex{static_cast<int>(pv.get("row", tag).as_int(tag + ".row")),
                                        static_cast<int>(pv.get("col", tag).as_int(tag + ".col"))});
    }
    if (root.has("m") && root.get("m", "").as_int("m") != plan.m())
        throw ObserveError("plan: declared m does not match the point list length");
    return plan;
}

ObservationPlan load_plan_file(const std::string& path) {
    return parse_plan(parse_config_file(path).serialize());
}

void save_plan_file(const ObservationPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ObserveError("cannot write plan file: " + path);
    out << plan.serialize();
    if (!out.flush()) throw ObserveError("failed writing plan file: " + path);
}

namespace {

std::vector<GridIndex> uniform_points(int m, int n) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (r * r != m)
        throw ObserveError("uniform selection needs a perfect-square m, got " + std::to_string(m));
    std::vector<int> centers(r);
    for (int i = 0; i < r; ++i)
        centers[i] = static_cast<int>((2 * i + 1) * static_cast<std::int64_t>(n) / (2 * r));
    std::vector<GridIndex> pts;
    pts.reserve(m);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) pts.push_back(GridIndex{centers[i], centers[j]});
    return pts;
}

std::vector<GridIndex> random_points(int m, int n, std::uint64_t seed) {
    const std::int64_t interior = static_cast<std::int64_t>(n - 2) * (n - 2);
    if (m > interior) throw ObserveError("random selection: m exceeds interior node count");
    RngStream rng(seed);
    std::unordered_set<std::int64_t> taken;
    std::vector<GridIndex> pts;
    pts.reserve(m);
    while (static_cast<int>(pts.size()) < m) {
        const std::int64_t flat = static_cast<std::int64_t>(rng.next_below(interior));
        if (!taken.insert(flat).second) continue;
        const int row = 1 + static_cast<int>(flat / (n - 2));
        const int col = 1 + static_cast<int>(flat % (n - 2));
        pts.push_back(GridIndex{row, col});
    }
    return pts;
}

std::vector<GridIndex> physics_points(int m, const Layout& layout) {
    const int n = layout.grid_n;
    if (m < layout.n_sources())
        throw ObserveError("physics-informed selection needs m >= n_sources (" +
                           std::to_string(layout.n_sources()) + "), got " + std::to_string(m));
    std::vector<GridIndex> pts;
    std::unordered_set<std::int64_t> taken;
    auto try_add = [&](GridIndex p) {
        if (static_cast<int>(pts.size()) >= m) return;
        if (p.row < 0 || p.row >= n || p.col < 0 || p.col >= n) return;
        if (!taken.insert(static_cast<std::int64_t>(p.row) * n + p.col).second) return;
        pts.push_back(p);
    };

    for (const auto& s : layout.sources) {
        GridIndex c = layout.nearest_node(s.x_center, s.y_center);
        const std::size_t before = pts.size();
        try_add(c);
        if (pts.size() == before)
            throw ObserveError("physics-informed selection: component centers of two sources land on "
                               "the same grid node (source id " + std::to_string(s.id) + ")");
    }

    // Boundary sequence (deterministic): sink-adjacent pair, then edge
    // midpoints, bottom quarter points, then binary subdivision of each edge.
    const auto sink = layout.sink_cols();
    try_add(GridIndex{0, sink.front() - 1});
    try_add(GridIndex{0, sink.back() + 1});
    const int mid = (n - 1) / 2;
    try_add(GridIndex{n - 1, mid});  // top
    try_add(GridIndex{mid, 0});      // left
    try_add(GridIndex{mid, n - 1});  // right
    try_add(GridIndex{0, (n - 1) / 4});
    try_add(GridIndex{0, 3 * (n - 1) / 4});

    for (int level = 2; static_cast<int>(pts.size()) < m && level < 16; ++level) {
        const int denom = 1 << level;
        for (int odd = 1; odd < denom; odd += 2) {
            const int p = static_cast<int>(static_cast<std::int64_t>(n - 1) * odd / denom);
            try_add(GridIndex{n - 1, p});
            try_add(GridIndex{p, 0});
            try_add(GridIndex{p, n - 1});
            try_add(GridIndex{0, p});
        }
    }
    if (static_cast<int>(pts.size()) < m)
        throw ObserveError("physics-informed selection: not enough boundary nodes for m = " +
                           std::to_string(m));
    return pts;
}

}  // namespace

ObservationPlan select_points(SelectStrategy strategy, int m, const Layout& layout,
                              std::uint64_t seed) {
    if (m < 1) throw ObserveError("select_points: m must be at least 1");
    ObservationPlan plan;
    plan.strategy = strategy;
    plan.seed = seed;
    plan.layout_hash = layout.hash();
    switch (strategy) {
        case SelectStrategy::uniform: plan.points = uniform_points(m, layout.grid_n); break;
        case SelectStrategy::random: plan.points = random_points(m, layout.grid_n, seed); break;
        case SelectStrategy::physics: plan.points = physics_points(m, layout); break;
    }
    plan.validate(layout.grid_n);
    return plan;
}

ObservationSet extract_observations(const Grid& field, const ObservationPlan& plan,
                                    const std::string& field_layout_hash) {
    if (!field_layout_hash.empty() && !plan.layout_hash.empty() &&
        field_layout_hash != plan.layout_hash)
        throw ObserveError("extract_observations: field layout hash does not match the plan's");
    plan.validate(field.n);
    ObservationSet obs;
    obs.values.reserve(plan.points.size());
    for (const auto& p : plan.points) obs.values.push_back(field.at(p.row, p.col));
    return obs;
}

Grid to_sparse_image(const ObservationSet& obs, const ObservationPlan& plan, int grid_n,
                     const FieldNorm& norm) {
    if (obs.m() != plan.m())
        throw ObserveError("to_sparse_image: observation length does not match the plan");
    plan.validate(grid_n);
    Grid img(grid_n, 0.0);
    for (int i = 0; i < plan.m(); ++i)
        img.at(plan.points[i].row, plan.points[i].col) = norm.normalize(obs.values[i]);
    return img;
}

}  // namespace tfr
