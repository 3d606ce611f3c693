#include <catch_amalgamated.hpp>

#include "mtip/io/config.hpp"

using namespace mtip;
using namespace mtip::io;

namespace {

std::string key_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigValidationError& e) {
        return e.key();
    }
    return "<accepted>";
}

}  // namespace

TEST_CASE("empty documents resolve to the defaults") {
    for (const char* text : {"", "  \n", "{}", "// nothing\n{}"}) {
        const auto c = parse_config(text);
        CHECK(c.kappa == 11.0);
        CHECK(c.tau == 0.953);
        CHECK(c.window == 200.0);
        CHECK(c.q_max == 40);
        CHECK(c.simulate.dt == 1e-3);
        CHECK(c.hysteresis.rate == 1e-6);
        CHECK(c.hysteresis.eps == 0.0005);
        CHECK(c.hysteresis.seeds.size() == 5);
        CHECK(c.tongue.c_grid.size() == 81);
        CHECK(c.tongue.tau_grid == std::vector<double>{0.953});
        CHECK(c.intermittency.dt == 2.5e-4);
        CHECK(c.intermittency.deltas == std::vector<double>{0.003, 0.0045, 0.006});
        CHECK(c.intermittency.seeds.size() == 10);
        CHECK(c.multistability.trials == 30);
    }
}

TEST_CASE("invalid values are reported under their key") {
    CHECK(key_of(R"({"eps": -1})") == "eps");
    CHECK(key_of(R"({"c": -0.5})") == "c");
    CHECK(key_of(R"({"dt": 2})") == "dt");
    CHECK(key_of(R"({"dt": 0.0007})") == "dt");
    CHECK(key_of(R"({"foo": 1})") == "foo");
    CHECK(key_of(R"({"hysteresis": {"foo": 1}})") == "hysteresis.foo");
    CHECK(key_of(R"({"hysteresis": {"c_max": 2.0}})") == "hysteresis.c_max");
    CHECK(key_of(R"({"hysteresis": {"seeds": [1, -2]}})") == "hysteresis.seeds");
    CHECK(key_of(R"({"tongue": {"c_grid": [2.9, 2.8]}})") == "tongue.c_grid");
    CHECK(key_of(R"({"tongue": {"c_grid": {"start": 1, "stop": 2}}})") == "tongue.c_grid");
    CHECK(key_of(R"({"multistability": {"trials": 9}})") == "multistability.trials");
    CHECK(key_of(R"({"intermittency": {"t_total": 100}})") == "intermittency.t_total");
    CHECK(key_of(R"({"simulate": {"eps": "x"}})") == "simulate.eps");
    CHECK(key_of(R"({"threads": 0})") == "threads");
    CHECK(key_of(R"({"seed": 1.5})") == "seed");
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_config("{\n  \"c\": 2.9,\n  \"eps\": ,\n}");
        FAIL("expected a syntax error");
    } catch (const ConfigSyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 10);
    }
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigSyntaxError);
}

TEST_CASE("section values override top-level values, which override defaults") {
    const auto c = parse_config(R"({
        "c": 2.95, "eps": 0.002, "dt": 0.0005,
        "simulate": {"c": 2.9},
        "intermittency": {"eps": 0.0}
    })");
    CHECK(c.simulate.c == 2.9);
    CHECK(c.simulate.eps == 0.002);
    CHECK(c.simulate.dt == 0.0005);
    CHECK(c.intermittency.c == 2.95);
    CHECK(c.intermittency.eps == 0.0);
    CHECK(c.multistability.c == 2.95);
    CHECK(c.hysteresis.eps == 0.002);
    CHECK(c.tongue.dt == 0.0005);
}

TEST_CASE("top-level tau seeds the tongue row") {
    CHECK(parse_config(R"({"tau": 0.9})").tongue.tau_grid == std::vector<double>{0.9});
    CHECK(parse_config(R"({"tau": 0.9, "tongue": {"tau_grid": [0.8, 0.85]}})").tongue.tau_grid ==
          std::vector<double>{0.8, 0.85});
}

TEST_CASE("grids accept ranges") {
    const auto c = parse_config(R"({"tongue": {"c_grid": {"start": 2.9, "stop": 3.0, "num": 11}}})");
    REQUIRE(c.tongue.c_grid.size() == 11);
    CHECK(c.tongue.c_grid.front() == 2.9);
    CHECK(c.tongue.c_grid.back() == 3.0);
    CHECK(c.tongue.c_grid[5] == Catch::Approx(2.95));
}

TEST_CASE("to_json round-trips") {
    const auto c = parse_config(R"({
        "seed": 7, "threads": 2, "q_max": 30,
        "hysteresis": {"seeds": [3, 9], "c_min": 2.9, "c_max": 3.0},
        "tongue": {"c_grid": [2.96, 2.97], "tau_grid": [0.9, 0.953]},
        "multistability": {"h0_range": [-0.1, 0.3]}
    })");
    const auto j = to_json(c);
    const auto again = parse_config(j.dump());
    CHECK(to_json(again) == j);
    CHECK(again.hysteresis.seeds == std::vector<std::uint64_t>{3, 9});
    CHECK(again.multistability.h0_min == -0.1);
    CHECK(again.tongue.tau_grid == std::vector<double>{0.9, 0.953});
    RunConfig defaults;
    defaults.tongue.c_grid = default_tongue_c_grid();
    CHECK(to_json(parse_config("")) == to_json(defaults));
}
