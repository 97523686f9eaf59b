#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "rustseg/colorspace.hpp"
#include "rustseg/error.hpp"

using namespace rustseg;

TEST_CASE("rgb_to_hsv anchors and hand-evaluated values") {
    auto red = rgb_to_hsv(1, 0, 0);
    CHECK(red.h == 0.0);
    CHECK(red.s == 1.0);
    CHECK(red.v == 1.0);

    auto green = rgb_to_hsv(0, 1, 0);
    CHECK(green.h == 120.0);
    CHECK(green.s == 1.0);

    CHECK(rgb_to_hsv(0, 0, 1).h == 240.0);

    auto gray = rgb_to_hsv(0.3, 0.3, 0.3);
    CHECK(gray.h == 0.0);
    CHECK(gray.s == 0.0);
    CHECK(gray.v == 0.3);

    auto rust = rgb_to_hsv(0.5, 0.25, 0.1);
    CHECK(rust.h == doctest::Approx(22.5).epsilon(1e-14));
    CHECK(rust.s == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(rust.v == 0.5);

    auto black = rgb_to_hsv(0, 0, 0);
    CHECK(black.s == 0.0);
    CHECK(black.v == 0.0);
}

TEST_CASE("rgb_to_hsv wraparound branch stays below 360") {
    // Max = R, G < B: 60 (G-B)/(Max-Min) + 360
    auto p = rgb_to_hsv(1.0, 0.0, 0.5);
    CHECK(p.h == doctest::Approx(330.0));
    auto q = rgb_to_hsv(1.0, 0.0, 1e-17 + 1e-300);
    CHECK(q.h < 360.0);
    CHECK(q.h >= 0.0);
}

TEST_CASE("rgb_to_hsv rejects out-of-range channels") {
    CHECK_THROWS_AS(rgb_to_hsv(1.1, 0, 0), Error);
    CHECK_THROWS_AS(rgb_to_hsv(0, -0.01, 0), Error);
    CHECK_THROWS_AS(rgb_to_hsv(0, 0, std::nan("")), Error);
}

TEST_CASE("hsv_to_rgb inverts the examples") {
    auto a = hsv_to_rgb({0, 1, 1});
    CHECK(a.r == 1.0);
    CHECK(a.g == 0.0);
    CHECK(a.b == 0.0);

    for (double h : {0.0, 77.0, 359.0}) {
        auto g = hsv_to_rgb({h, 0.0, 0.3});
        CHECK(g.r == 0.3);
        CHECK(g.g == 0.3);
        CHECK(g.b == 0.3);
    }

    auto r = hsv_to_rgb({22.5, 0.8, 0.5});
    CHECK(r.r == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.g == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.b == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("hsv properties over random triples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double r = u(rng), g = u(rng), b = u(rng);
        const HsvPixel p = rgb_to_hsv(r, g, b);
        REQUIRE(p.h >= 0.0);
        REQUIRE(p.h < 360.0);
        REQUIRE(p.s >= 0.0);
        REQUIRE(p.s <= 1.0);
        REQUIRE(p.v >= 0.0);
        REQUIRE(p.v <= 1.0);
        const Rgb back = hsv_to_rgb(p);
        worst = std::max({worst, std::fabs(back.r - r), std::fabs(back.g - g), std::fabs(back.b - b)});

        // Cyclic channel permutation (r,g,b) -> (b,r,g) rotates hue by +120.
        if (r != g && g != b && r != b) {
            const HsvPixel rot = rgb_to_hsv(b, r, g);
            const double expected = std::fmod(p.h + 120.0, 360.0);
            double diff = std::fabs(rot.h - expected);
            diff = std::min(diff, 360.0 - diff);
            REQUIRE(diff < 1e-9);
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("rgb_image_to_hsv and extract_saturation") {
    SUBCASE("red pixel") {
        auto img = testing::make_board(1, 1, 1, 0, 0);
        auto hsv = rgb_image_to_hsv(img);
        CHECK(hsv(0, 0).h == 0.0);
        CHECK(hsv(0, 0).s == 1.0);
        CHECK(hsv(0, 0).v == 1.0);
        auto sat = extract_saturation(hsv);
        CHECK(sat.size() == 1);
        CHECK(sat(0, 0) == 1.0);
    }
    SUBCASE("all gray") {
        auto hsv = rgb_image_to_hsv(testing::make_board(4, 3, 0.4, 0.4, 0.4));
        auto sat = extract_saturation(hsv);
        for (std::size_t i = 0; i < hsv.size(); ++i) {
            CHECK(hsv[i].h == 0.0);
            CHECK(hsv[i].s == 0.0);
            CHECK(sat.data()[i] == 0.0);
        }
    }
    SUBCASE("per-pixel agreement") {
        auto f = testing::make_rust_fixture(1);
        auto hsv = rgb_image_to_hsv(f.image);
        auto sat = extract_saturation(hsv);
        CHECK(hsv.width() == 512);
        CHECK(sat.height() == 512);
        for (int y = 0; y < 512; y += 7)
            for (int x = 0; x < 512; x += 5) {
                const double* p = f.image.at(x, y);
                const HsvPixel want = rgb_to_hsv(p[0], p[1], p[2]);
                REQUIRE(hsv(x, y).h == want.h);
                REQUIRE(hsv(x, y).s == want.s);
                REQUIRE(hsv(x, y).v == want.v);
                REQUIRE(sat(x, y) == hsv(x, y).s);
            }
    }
}
