#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "rustseg/config.hpp"
#include "rustseg/error.hpp"

using namespace rustseg;

namespace {

std::vector<std::string> issue_fields(const std::string& json) {
    try {
        config_from_json(json);
    } catch (const ConfigError& e) {
        std::vector<std::string> out;
        for (const auto& i : e.issues()) out.push_back(i.field);
        return out;
    }
    return {};
}

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST_CASE("defaults") {
    const PipelineConfig c;
    CHECK_FALSE(c.ssr.sigma.has_value());
    CHECK(c.ssr.epsilon_floor == 1e-4);
    CHECK(c.filter.fusion == Fusion::AndWithThreshold);
    CHECK(c.db.eps == 3.0);
    CHECK(c.db.min_pts == 9);
    CHECK(c.min_area == 64);
    CHECK(c.rust_threshold_pct == 0.5);
    CHECK_NOTHROW(validate(c));
    CHECK(config_from_json("{}") == c);
}

TEST_CASE("round trip is exact") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0), hue(0.0, 359.999);
    for (int trial = 0; trial < 200; ++trial) {
        PipelineConfig c;
        if (trial % 3) c.ssr.sigma = 0.5 + 100.0 * unit(rng);
        c.ssr.epsilon_floor = 1e-6 + 9e-4 * unit(rng);
        c.filter.ranges.clear();
        const int n = 1 + trial % 4;
        for (int i = 0; i < n; ++i) {
            double s0 = unit(rng), s1 = unit(rng), v0 = unit(rng), v1 = unit(rng);
            c.filter.ranges.push_back({hue(rng), hue(rng), std::min(s0, s1), std::max(s0, s1), std::min(v0, v1),
                                       std::max(v0, v1)});
        }
        c.filter.fusion = static_cast<Fusion>(trial % 3);
        c.db.eps = 0.1 + 10.0 * unit(rng);
        c.db.min_pts = 1 + trial % 20;
        c.db.decimate = trial % 2 == 0;
        c.min_area = static_cast<std::size_t>(trial * 7);
        c.rust_threshold_pct = 100.0 * unit(rng);

        const std::string text = config_to_json(c);
        const PipelineConfig back = config_from_json(text);
        REQUIRE(back == c);
        REQUIRE(config_to_json(back) == text);
    }
}

TEST_CASE("canonical layout") {
    const std::string text = config_to_json(PipelineConfig{});
    CHECK(text.back() == '\n');
    const auto pos = [&](const char* k) { return text.find(k); };
    CHECK(pos("\"ssr\"") < pos("\"ranges\""));
    CHECK(pos("\"ranges\"") < pos("\"fusion\""));
    CHECK(pos("\"fusion\"") < pos("\"dbscan\""));
    CHECK(pos("\"dbscan\"") < pos("\"min_area\""));
    CHECK(pos("\"min_area\"") < pos("\"rust_threshold_pct\""));
    CHECK(text.find("\"sigma\": null") != std::string::npos);
    CHECK(text.find("\"fusion\": \"and\"") != std::string::npos);
}

TEST_CASE("validation names every offending field") {
    auto f = issue_fields(R"({"dbscan": {"eps": 0, "min_pts": 0}, "rust_threshold_pct": 150})");
    CHECK(has(f, "dbscan.eps"));
    CHECK(has(f, "dbscan.min_pts"));
    CHECK(has(f, "rust_threshold_pct"));

    f = issue_fields(R"({"ranges": [{"h_lo": 0, "h_hi": 20, "s_lo": 0.5, "s_hi": 1, "v_lo": 0, "v_hi": 1},
                                    {"h_lo": 400, "h_hi": 20, "s_lo": 0.9, "s_hi": 0.1, "v_lo": 0, "v_hi": 2}]})");
    CHECK(has(f, "ranges[1].h_lo"));
    CHECK(has(f, "ranges[1].s_lo"));
    CHECK(has(f, "ranges[1].v_hi"));
    CHECK_FALSE(has(f, "ranges[0].h_lo"));

    CHECK(has(issue_fields(R"({"ranges": []})"), "ranges"));
    CHECK(has(issue_fields(R"({"ssr": {"sigma": -1}})"), "ssr.sigma"));
    CHECK(has(issue_fields(R"({"ssr": {"epsilon_floor": 0.5}})"), "ssr.epsilon_floor"));
    CHECK(has(issue_fields(R"({"fusion": "xor"})"), "fusion"));
    CHECK(has(issue_fields(R"({"min_area": -3})"), "min_area"));
    CHECK(has(issue_fields(R"({"dbscan": {"min_pts": 2.5}})"), "dbscan.min_pts"));
    CHECK(has(issue_fields(R"({"ranges": [{"h_lo": 1}]})"), "ranges[0].h_hi"));
}

TEST_CASE("unknown keys are rejected") {
    CHECK(has(issue_fields(R"({"colour": 1})"), "colour"));
    CHECK(has(issue_fields(R"({"dbscan": {"epsilon": 2}})"), "dbscan.epsilon"));
    CHECK(has(issue_fields(R"({"ssr": {"sigma": 5, "gain": 1}})"), "ssr.gain"));
    CHECK(has(issue_fields(R"({"ranges": [{"h_lo": 1, "h_hi": 2, "s_lo": 0, "s_hi": 1, "v_lo": 0, "v_hi": 1, "a": 0}]})"),
              "ranges[0].a"));
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(config_from_json("{"), ConfigError);
    CHECK_THROWS_AS(config_from_json("[1,2]"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("load_config reads a file") {
    auto dir = testing::make_temp_dir("config");
    PipelineConfig c;
    c.db.eps = 4.5;
    c.filter.fusion = Fusion::OrWithThreshold;
    {
        std::ofstream out(dir / "c.json");
        out << config_to_json(c);
    }
    CHECK(load_config(dir / "c.json") == c);
    std::filesystem::remove_all(dir);
}

TEST_CASE("parse_emit") {
    auto e = parse_emit("mask,overlay");
    CHECK(e.mask);
    CHECK(e.overlay);
    CHECK_FALSE(e.report);
    CHECK_FALSE(e.premask);
    e = parse_emit("report,premask");
    CHECK(e.report);
    CHECK(e.premask);
    CHECK_FALSE(e.mask);
    CHECK(parse_emit("") == EmitFlags{false, false, false, false});
    CHECK_THROWS_AS(parse_emit("mask,heatmap"), Error);
}
