#include <doctest.h>

#include "tfr/textcfg.hpp"

using namespace tfr;

TEST_CASE("scalar assignments with comments") {
    auto root = parse_config("a = 1.5  # trailing comment\nname = \"hello\"\nword = bare\n");
    CHECK(root.get("a", "").as_number("a") == doctest::Approx(1.5));
    CHECK(root.get("name", "").as_string("name") == "hello");
    CHECK(root.get("word", "").as_string("word") == "bare");
}

TEST_CASE("nested tables and arrays") {
    auto root = parse_config(
        "sink = { center = 0.05, length = 0.01 }\n"
        "xs = [ 1, 2, 3, ]\n"
        "rows = [\n  { a = 1 },\n  { a = 2 },\n]\n");
    CHECK(root.get("sink", "").get("center", "sink").as_number("") == doctest::Approx(0.05));
    CHECK(root.get("xs", "").as_array("xs").size() == 3);
    const auto& rows = root.get("rows", "").as_array("rows");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].get("a", "rows[1]").as_int("rows[1].a") == 2);
}

TEST_CASE("errors name the problem") {
    CHECK_THROWS_WITH_AS(parse_config("a 1\n"), doctest::Contains("expected '='"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = 1..2\n"), ConfigError);
    auto root = parse_config("a = 1\n");
    CHECK_THROWS_WITH_AS(root.get("missing", "").as_number(""), doctest::Contains("missing"),
                         ConfigError);
    CHECK_THROWS_AS(root.get("a", "").as_string("a"), ConfigError);
}

TEST_CASE("serialize/parse round trip preserves values") {
    const std::string text =
        "grid_n = 200\nsink = { center = 0.05, length = 0.01 }\n"
        "sources = [\n  { id = 1, x = 0.25 },\n]\n";
    auto a = parse_config(text);
    auto b = parse_config(a.serialize());
    CHECK(a.serialize() == b.serialize());
    CHECK(b.get("sources", "").as_array("")[0].get("x", "").as_number("") == doctest::Approx(0.25));
}

TEST_CASE("integers are checked") {
    auto root = parse_config("n = 2.5\n");
    CHECK_THROWS_AS(root.get("n", "").as_int("n"), ConfigError);
}
