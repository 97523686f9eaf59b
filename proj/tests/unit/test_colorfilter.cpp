#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "rustseg/colorfilter.hpp"
#include "rustseg/error.hpp"

using namespace rustseg;

TEST_CASE("in_range") {
    const HsvRange r{5, 25, 0.4, 1.0, 0.3, 1.0};
    CHECK(in_range({20, 0.8, 0.6}, r));
    CHECK_FALSE(in_range({20, 0.2, 0.6}, r));
    CHECK_FALSE(in_range({20, 0.8, 0.1}, r));
    CHECK_FALSE(in_range({30, 0.8, 0.6}, r));

    const HsvRange wrap{350, 10, 0.4, 1.0, 0.3, 1.0};
    CHECK(in_range({355, 0.8, 0.6}, wrap));
    CHECK(in_range({5, 0.8, 0.6}, wrap));
    CHECK_FALSE(in_range({180, 0.8, 0.6}, wrap));

    // Endpoints are inclusive.
    CHECK(in_range({5, 0.4, 0.3}, r));
    CHECK(in_range({25, 1.0, 1.0}, r));
    CHECK(in_range({350, 0.4, 0.3}, wrap));
    CHECK(in_range({10, 0.4, 0.3}, wrap));
}

TEST_CASE("wraparound equals the union of its halves") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> hue(0.0, 360.0), unit(0.0, 1.0);
    const HsvRange wrap{350, 10, 0.2, 0.9, 0.1, 0.95};
    HsvRange top = wrap, bottom = wrap;
    top.h_hi = std::nextafter(360.0, 0.0);
    bottom.h_lo = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const HsvPixel p{hue(rng), unit(rng), unit(rng)};
        REQUIRE(in_range(p, wrap) == (in_range(p, top) || in_range(p, bottom)));
    }
}

TEST_CASE("apply_ranges") {
    SUBCASE("gray never matches a saturated range") {
        auto hsv = rgb_image_to_hsv(testing::make_board(6, 6, 0.5, 0.5, 0.5));
        FilterConfig cfg{default_rust_ranges(), Fusion::ColorOnly};
        CHECK(apply_ranges(hsv, cfg).popcount() == 0);
    }
    SUBCASE("range center color fills the mask") {
        double r, g, b;
        testing::hsv_to_rgb_reference(15.0, 0.7, 0.5, r, g, b);
        auto hsv = rgb_image_to_hsv(testing::make_board(6, 6, r, g, b));
        FilterConfig cfg{{HsvRange{5, 25, 0.5, 0.9, 0.3, 0.7}}, Fusion::ColorOnly};
        CHECK(apply_ranges(hsv, cfg).popcount() == 36);
    }
    SUBCASE("two ranges give the union of per-range masks") {
        auto img = testing::make_board(8, 8, 0.5, 0.5, 0.5);
        testing::paint_rect(img, 0, 0, 3, 3, 0.8, 0.1, 0.1);  // red
        testing::paint_rect(img, 5, 5, 3, 3, 0.9, 0.8, 0.1);  // yellow
        testing::paint_rect(img, 0, 5, 2, 2, 0.1, 0.2, 0.9);  // blue, matched by neither
        auto hsv = rgb_image_to_hsv(img);
        const HsvRange red{350, 10, 0.5, 1, 0.2, 1}, yellow{45, 65, 0.5, 1, 0.2, 1};
        auto both = apply_ranges(hsv, {{red, yellow}, Fusion::ColorOnly});
        auto only_red = apply_ranges(hsv, {{red}, Fusion::ColorOnly});
        auto only_yellow = apply_ranges(hsv, {{yellow}, Fusion::ColorOnly});
        for (std::size_t i = 0; i < both.size(); ++i) CHECK(both[i] == (only_red[i] || only_yellow[i]));
        CHECK(both.popcount() == 18);
    }
    SUBCASE("adding a range never removes pixels") {
        auto f = testing::make_rust_fixture(2);
        auto hsv = rgb_image_to_hsv(f.image);
        FilterConfig cfg{{HsvRange{10, 20, 0.5, 1, 0.2, 1}}, Fusion::ColorOnly};
        auto before = apply_ranges(hsv, cfg);
        cfg.ranges.push_back(HsvRange{200, 230, 0.0, 1, 0.0, 1});
        auto after = apply_ranges(hsv, cfg);
        for (std::size_t i = 0; i < before.size(); ++i)
            if (before[i]) REQUIRE(after[i]);
    }
}

TEST_CASE("fuse_masks") {
    BinaryMask color(3, 3);
    color.set(0, 0, true);
    color.set(1, 1, true);
    const BinaryMask all(3, 3, true), none(3, 3, false);

    CHECK(fuse_masks(color, all, Fusion::AndWithThreshold) == color);
    CHECK(fuse_masks(color, none, Fusion::AndWithThreshold).popcount() == 0);
    CHECK(fuse_masks(color, none, Fusion::ColorOnly) == color);

    BinaryMask a(3, 3), b(3, 3);
    a.set(0, 2, true);
    b.set(2, 0, true);
    CHECK(fuse_masks(a, b, Fusion::OrWithThreshold).popcount() == 2);

    CHECK_THROWS_AS(fuse_masks(color, BinaryMask(2, 3), Fusion::OrWithThreshold), Error);

    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        BinaryMask x(9, 7), y(9, 7);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x.set(i, rng() % 3 == 0);
            y.set(i, rng() % 2 == 0);
        }
        const auto land = fuse_masks(x, y, Fusion::AndWithThreshold).popcount();
        const auto lor = fuse_masks(x, y, Fusion::OrWithThreshold).popcount();
        CHECK(land <= std::min(x.popcount(), y.popcount()));
        CHECK(lor >= std::max(x.popcount(), y.popcount()));
    }
}

TEST_CASE("fusion names") {
    CHECK(parse_fusion("color") == Fusion::ColorOnly);
    CHECK(parse_fusion("and_with_threshold") == Fusion::AndWithThreshold);
    CHECK(parse_fusion("or") == Fusion::OrWithThreshold);
    CHECK(to_string(Fusion::AndWithThreshold) == "and");
    CHECK_THROWS_AS(parse_fusion("xor"), Error);
}
