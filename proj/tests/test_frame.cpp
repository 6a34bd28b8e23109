#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "dynloc/errors.hpp"
#include "dynloc/frame.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/transport.hpp"

using namespace dynloc;

namespace {
Mask chain_mask(int n, double cx0, double cy, double dx, double r) {
    Mask m;
    for (int i = 0; i < n; ++i) m.rois.push_back({i, cx0 + i * dx, cy, r});
    return m;
}
} // namespace

TEST_CASE("frame parsing accepts whitespace grids and rejects junk", "[frame]") {
    std::istringstream good("1 2 3\n4 5 6\n");
    Frame f = load_frame(good);
    REQUIRE(f.width == 3);
    REQUIRE(f.height == 2);
    CHECK(f.at(0, 0) == 1);
    CHECK(f.at(1, 2) == 6);

    std::ostringstream out;
    dump_frame(f, out);
    std::istringstream back(out.str());
    Frame f2 = load_frame(back);
    CHECK(f2.counts == f.counts);

    std::istringstream ragged("1 2 3\n4 5\n");
    CHECK_THROWS_AS(load_frame(ragged), io_error);
    std::istringstream negative("1 -2\n3 4\n");
    CHECK_THROWS_AS(load_frame(negative), io_error);
    std::istringstream junk("1 x\n3 4\n");
    CHECK_THROWS_AS(load_frame(junk), io_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(load_frame(empty), io_error);
}

TEST_CASE("mask JSON round trip and bounds", "[frame]") {
    Mask m = chain_mask(3, 20.5, 15.5, 25.0, 6.0);
    Mask back = mask_from_json(mask_to_json(m));
    REQUIRE(back.rois.size() == 3);
    CHECK(back.rois[2].cx == Catch::Approx(70.5));
    CHECK_THROWS_AS(mask_from_json(nlohmann::json::array({{{"site_id", 0}}})), config_error);

    Frame f;
    f.width = 100;
    f.height = 31; // circle of r=6 at cy=15.5 needs rows up to 21.5 < 31: fits
    f.counts.assign(3100, 0);
    CHECK_NOTHROW(validate_mask_bounds(m, f));
    f.height = 20;
    f.counts.assign(2000, 0);
    CHECK_THROWS_AS(validate_mask_bounds(m, f), config_error);
}

TEST_CASE("corner background estimation", "[frame]") {
    Frame f;
    f.width = 40;
    f.height = 20;
    f.counts.assign(800, 7);
    // plant a bright blob away from all corners
    for (int r = 8; r < 12; ++r)
        for (int c = 18; c < 22; ++c) f.at(r, c) = 500;
    for (Corner k : {Corner::up_left, Corner::up_right, Corner::down_left, Corner::down_right,
                     Corner::four_corner_mean})
        CHECK(estimate_background(f, {k, 8, 6}) == Catch::Approx(7.0).epsilon(1e-15));

    // a gradient makes the corners disagree and the mean average out
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 40; ++c) f.at(r, c) = 10 + c;
    double left = estimate_background(f, {Corner::up_left, 8, 6});
    double right = estimate_background(f, {Corner::up_right, 8, 6});
    CHECK(left == Catch::Approx(10.0 + 3.5));
    CHECK(right == Catch::Approx(10.0 + 35.5));
    CHECK(estimate_background(f, {Corner::four_corner_mean, 8, 6}) ==
          Catch::Approx(0.5 * (left + right)));
    CHECK_THROWS_AS(estimate_background(f, {Corner::up_left, 60, 6}), std::invalid_argument);
}

TEST_CASE("probability extraction subtracts background and clamps", "[frame]") {
    Frame f;
    f.width = 120;
    f.height = 40;
    f.counts.assign(120 * 40, 10);
    Mask m = chain_mask(3, 20.5, 20.5, 40.0, 8.0);
    // ROI 0 gets 300 counts above bg, ROI 1 gets 900, ROI 2 stays at bg
    for (int r = 17; r < 23; ++r) {
        f.at(r, 20) = 10 + 50;
        f.at(r, 60) = 10 + 150;
    }
    ProbabilityField field = extract_probabilities(f, m, 10.0);
    CHECK(field.p[0] == Catch::Approx(0.25).epsilon(1e-12));
    CHECK(field.p[1] == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(field.p[2] == 0.0);

    // background above all counts -> every ROI clamps to zero
    CHECK_THROWS_AS(extract_probabilities(f, m, 1e6), accuracy_error);
}

TEST_CASE("render then extract round trip is tight without noise", "[frame]") {
    Mask m = chain_mask(5, 40.5, 40.5, 30.0, 9.0);
    ProbabilityField truth{{0.1, 0.2, 0.4, 0.2, 0.1}};
    RenderSpec spec;
    spec.width = 200;
    spec.height = 81;
    spec.spot_sigma_px = 2.0;
    spec.amplitude = 2e5;
    spec.offset = 50.0;
    spec.poisson = false;
    Frame f = render_frame(m, truth, spec);
    double bg = estimate_background(f, {Corner::four_corner_mean, 20, 15});
    CHECK(bg == Catch::Approx(50.0).margin(0.5));
    ProbabilityField got = extract_probabilities(f, m, bg);
    CHECK(total_variation(got, truth) < 1e-3);
}

TEST_CASE("strategy spread produces a positive error bar under tilt", "[frame]") {
    Lattice lat = build_lattice_1d(5, 15.0);
    Mask m = chain_mask(5, 40.5, 40.5, 30.0, 9.0);
    ProbabilityField truth{{0.1, 0.2, 0.4, 0.2, 0.1}};
    RenderSpec spec;
    spec.width = 200;
    spec.height = 81;
    spec.spot_sigma_px = 2.0;
    spec.amplitude = 5e5;
    spec.offset = 400.0;
    spec.tilt_x = 0.8;
    spec.poisson = true;
    spec.seed = 4242;
    Frame f = render_frame(m, truth, spec);
    std::vector<BackgroundStrategy> strategies = {{Corner::up_left, 20, 15},
                                                  {Corner::up_right, 20, 15},
                                                  {Corner::four_corner_mean, 20, 15}};
    VarianceReport rep = variance_with_errorbars(f, m, lat, strategies, Axis::chain, 2);
    REQUIRE(rep.per_strategy.size() == 3);
    CHECK(rep.error > 0.0);
    double truth_var = variance(truth, lat, Axis::chain, 2);
    CHECK(rep.mean == Catch::Approx(truth_var).epsilon(0.1));
    CHECK_THROWS_AS(
        variance_with_errorbars(f, m, lat, {strategies[0]}, Axis::chain, 2),
        std::invalid_argument);
}

TEST_CASE("corner labels round trip", "[frame]") {
    for (Corner k : {Corner::up_left, Corner::up_right, Corner::down_left, Corner::down_right,
                     Corner::four_corner_mean})
        CHECK(corner_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(corner_from_string("middle"), config_error);
}
