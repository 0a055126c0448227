#include <doctest.h>

#include <cmath>

#include "tfr/layout.hpp"

using namespace tfr;

namespace {

const char* kMinimal =
    "sources = [\n  { id = 1, x = 0.05, y = 0.05, w = 0.02, h = 0.02 },\n]\n";

Layout minimal() { return parse_layout(kMinimal); }

}  // namespace

TEST_CASE("minimal config applies defaults") {
    Layout l = minimal();
    CHECK(l.n_sources() == 1);
    CHECK(l.grid_n == 200);
    CHECK(l.domain_size == doctest::Approx(0.1));
    CHECK(l.conductivity == doctest::Approx(1.0));
    CHECK(l.sink.center == doctest::Approx(0.05));
    CHECK(l.sink.length == doctest::Approx(0.01));
    CHECK(l.sink.temperature == doctest::Approx(298.0));
    CHECK(l.sources[0].phi_max == doctest::Approx(30000.0));
}

TEST_CASE("source protruding past the left edge is rejected") {
    const char* text = "sources = [\n  { id = 7, x = 0.0, y = 0.05, w = 0.02, h = 0.02 },\n]\n";
    CHECK_THROWS_WITH_AS(parse_layout(text), doctest::Contains("source id 7"), LayoutError);
}

TEST_CASE("overlapping sources are rejected pairwise") {
    const char* text =
        "sources = [\n"
        "  { id = 1, x = 0.050, y = 0.05, w = 0.02, h = 0.02 },\n"
        "  { id = 2, x = 0.062, y = 0.05, w = 0.02, h = 0.02 },\n"
        "]\n";
    CHECK_THROWS_WITH_AS(parse_layout(text), doctest::Contains("overlaps"), LayoutError);
}

TEST_CASE("touching edges are not an overlap") {
    const char* text =
        "sources = [\n"
        "  { id = 1, x = 0.040, y = 0.05, w = 0.02, h = 0.02 },\n"
        "  { id = 2, x = 0.060, y = 0.05, w = 0.02, h = 0.02 },\n"
        "]\n";
    CHECK_NOTHROW(parse_layout(text));
}

TEST_CASE("shipped case layouts parse with 10 sources") {
    Layout c1 = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case1.layout");
    CHECK(c1.n_sources() == 10);
    CHECK(c1.grid_n == 200);
    Layout c2 = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case2.layout");
    CHECK(c2.n_sources() == 10);
}

TEST_CASE("identical text gives identical hash; different text differs") {
    Layout a = minimal();
    Layout b = minimal();
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 64);
    Layout c = a;
    c.sources[0].x_center = 0.051;
    CHECK(a.hash() != c.hash());
    // canonical text round-trips through the parser
    Layout d = parse_layout(a.canonical_text());
    CHECK(d.hash() == a.hash());
}

TEST_CASE("zero powers rasterize to the zero field") {
    Layout l = minimal();
    Grid g = rasterize_power(l, {0.0});
    CHECK(g.max() == 0.0);
    CHECK(g.min() == 0.0);
}

TEST_CASE("rectangle covering nodes 90..109 squared yields 400 cells") {
    // Geometry chosen so the closed-low/open-high rule admits exactly nodes
    // 90..109 along each axis: [89.5h, 109.5h) with h = L/199.
    Layout l = minimal();
    const double h = l.h();
    l.sources[0].x_center = 99.5 * h;
    l.sources[0].y_center = 99.5 * h;
    l.sources[0].width = 20.0 * h;
    l.sources[0].height = 20.0 * h;
    l.validate();
    Grid g = rasterize_power(l, {30000.0});

    // brute-force point-in-rectangle oracle
    int count = 0;
    int mismatches = 0;
    for (int j = 0; j < l.grid_n; ++j)
        for (int k = 0; k < l.grid_n; ++k) {
            const double x = l.node_x(k), y = l.node_y(j);
            const bool inside = x >= l.sources[0].x_center - 10.0 * h &&
                                x < l.sources[0].x_center + 10.0 * h &&
                                y >= l.sources[0].y_center - 10.0 * h &&
                                y < l.sources[0].y_center + 10.0 * h;
            if (inside) ++count;
            if (inside != (g.at(j, k) != 0.0)) ++mismatches;
        }
    CHECK(count == 400);
    CHECK(mismatches == 0);
    int nonzero = 0;
    for (double v : g.a)
        if (v != 0.0) ++nonzero;
    CHECK(nonzero == 400);
}

TEST_CASE("rasterized area matches analytic area within one boundary layer") {
    Layout l = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case1.layout");
    std::vector<double> powers(10);
    for (int i = 0; i < 10; ++i) powers[i] = 3000.0 * (i + 1);
    Grid g = rasterize_power(l, powers);
    const double cell = l.h() * l.h();
    double raster_integral = 0.0;
    for (double v : g.a) raster_integral += v * cell;
    double analytic = 0.0;
    double layer_bound = 0.0;
    for (int i = 0; i < 10; ++i) {
        analytic += powers[i] * l.sources[i].width * l.sources[i].height;
        layer_bound += powers[i] * 2.0 * (l.sources[i].width + l.sources[i].height) * l.h();
    }
    CHECK(std::abs(raster_integral - analytic) <= layer_bound);
}

TEST_CASE("rasterization is linear in the powers") {
    Layout l = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case1.layout");
    std::vector<double> p(10);
    for (int i = 0; i < 10; ++i) p[i] = 1000.0 + 700.0 * i;
    std::vector<double> p3 = p;
    for (auto& v : p3) v *= 3.0;
    Grid a = rasterize_power(l, p);
    Grid b = rasterize_power(l, p3);
    for (std::size_t i = 0; i < a.a.size(); ++i) CHECK(b.a[i] == doctest::Approx(3.0 * a.a[i]));
}

TEST_CASE("every nonzero node belongs to exactly one source") {
    Layout l = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case2.layout");
    std::vector<double> powers(10, 30000.0);
    Grid g = rasterize_power(l, powers);
    for (int j = 0; j < l.grid_n; ++j)
        for (int k = 0; k < l.grid_n; ++k) {
            int owners = 0;
            for (const auto& s : l.sources) {
                const double x = l.node_x(k), y = l.node_y(j);
                if (x >= s.x_center - 0.5 * s.width && x < s.x_center + 0.5 * s.width &&
                    y >= s.y_center - 0.5 * s.height && y < s.y_center + 0.5 * s.height)
                    ++owners;
            }
            CHECK(owners <= 1);
            CHECK((g.at(j, k) != 0.0) == (owners == 1));
        }
}

TEST_CASE("power bounds are enforced") {
    Layout l = minimal();
    CHECK_THROWS_AS(rasterize_power(l, {-1.0}), LayoutError);
    CHECK_THROWS_AS(rasterize_power(l, {30001.0}), LayoutError);
    CHECK_THROWS_AS(rasterize_power(l, {1.0, 2.0}), LayoutError);
}

TEST_CASE("component mask matches rasterization support") {
    Layout l = load_layout_file(std::string(TFR_ASSETS_DIR) + "/case1.layout");
    auto mask = component_mask(l);
    Grid g = rasterize_power(l, std::vector<double>(10, 30000.0));
    for (std::size_t i = 0; i < mask.size(); ++i) CHECK((mask[i] != 0) == (g.a[i] != 0.0));
}

TEST_CASE("sink node count follows the geometric rule") {
    Layout l = minimal();  // N=200, L=0.1, delta=0.01, center 0.05
    const auto cols = l.sink_cols();
    // |k*h - 0.05| <= 0.005 with h = 0.1/199 admits k = 90..109.
    REQUIRE(cols.size() == 20);
    CHECK(cols.front() == 90);
    CHECK(cols.back() == 109);
}
