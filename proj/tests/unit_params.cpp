#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cavcool/config.hpp"
#include "cavcool/params.hpp"

using namespace cavcool;

TEST_CASE("defaults satisfy every invariant", "[params]") {
    REQUIRE_NOTHROW(validate(SystemParams{}));
}

TEST_CASE("validation reports violations by field name", "[params]") {
    SystemParams p;
    p.kappa = 0.0;
    REQUIRE_THROWS_WITH(validate(p), Catch::Matchers::ContainsSubstring("kappa must be positive"));

    p = SystemParams{};
    p.u2bar = 2.0;
    REQUIRE_THROWS_WITH(validate(p), Catch::Matchers::ContainsSubstring("u2bar must lie in (0,1]"));

    // every violated invariant is listed at once
    p.kappa = -1.0;
    p.eta = -0.5;
    try {
        validate(p);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("kappa") != std::string::npos);
        REQUIRE(msg.find("eta") != std::string::npos);
        REQUIRE(msg.find("u2bar") != std::string::npos);
    }
}

TEST_CASE("validation is idempotent", "[params]") {
    SystemParams p;
    p.kappa = 0.7;
    p.delta_a = -2.5;
    const SystemParams once = validate(p);
    const SystemParams twice = validate(once);
    REQUIRE(once.kappa == twice.kappa);
    REQUIRE(once.delta_a == twice.delta_a);
    REQUIRE(once.eta == twice.eta);
}

TEST_CASE("saturation guard", "[params]") {
    REQUIRE(saturation_guard(0.0).pass);
    REQUIRE(saturation_guard(0.1).pass); // boundary is inclusive
    const auto warn = saturation_guard(0.5);
    REQUIRE_FALSE(warn.pass);
    REQUIRE(warn.excitation == 0.5);
    REQUIRE_THROWS_AS(saturation_guard(-0.1), std::invalid_argument);
}

TEST_CASE("config parsing: comments, sections, overrides", "[params]") {
    std::istringstream text(
        "# a comment\n"
        "kappa = 0.1   # trailing comment\n"
        "g_single = 0.3\n"
        "\n"
        "[simulate]\n"
        "dt = 0.5\n"
        "n_trajectories = 64\n");
    ConfigMap map = parse_config_text(text, "test");
    REQUIRE(map.at("kappa") == "0.1");
    REQUIRE(map.at("simulate.dt") == "0.5");

    apply_override(map, "eta=0.02");
    apply_override(map, "kappa=2.5");
    const Settings s = settings_from_map(map);
    REQUIRE(s.params.kappa == 2.5);
    REQUIRE(s.params.eta == 0.02);
    REQUIRE(s.params.g_single == 0.3);
    REQUIRE(s.modes.g_single == 0.3);
    REQUIRE(s.sim.dt == 0.5);
    REQUIRE(s.sim.n_trajectories == 64);
}

TEST_CASE("config parsing rejects unknown and malformed keys", "[params]") {
    {
        ConfigMap map;
        map["does_not_exist"] = "1";
        REQUIRE_THROWS_WITH(settings_from_map(map),
                            Catch::Matchers::ContainsSubstring("unknown config key"));
    }
    {
        ConfigMap map;
        map["kappa"] = "fast";
        REQUIRE_THROWS_AS(settings_from_map(map), std::invalid_argument);
    }
    {
        std::istringstream text("kappa 0.1\n");
        REQUIRE_THROWS_WITH(parse_config_text(text, "test"),
                            Catch::Matchers::ContainsSubstring("expected key = value"));
    }
    {
        std::istringstream text("kappa = 1\nkappa = 2\n");
        REQUIRE_THROWS_WITH(parse_config_text(text, "test"),
                            Catch::Matchers::ContainsSubstring("duplicate key"));
    }
}

TEST_CASE("config validation failures propagate", "[params]") {
    ConfigMap map;
    map["u2bar"] = "2";
    REQUIRE_THROWS_WITH(settings_from_map(map),
                        Catch::Matchers::ContainsSubstring("u2bar must lie in (0,1]"));
}
